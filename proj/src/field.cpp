#include "cwb/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cwb/util.hpp"

namespace cwb {

Complex FourierField::at(const MultiIndex& x) const {
  auto it = coeffs_.find(x);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

void FourierField::set(const MultiIndex& x, Complex v) {
  if (x.d() != d_ || x.b() != b_)
    throw std::invalid_argument("FourierField::set: index shape mismatch");
  if (!box_.contains(x))
    throw std::out_of_range("FourierField::set: site outside support box " +
                            x.str());
  if (v == Complex(0.0, 0.0))
    coeffs_.erase(x);
  else
    coeffs_[x] = v;
}

void FourierField::add(const MultiIndex& x, Complex v) { set(x, at(x) + v); }

FourierField FourierField::scaled(Complex s) const {
  FourierField out(d_, b_, box_, real_flag_ && s.imag() == 0.0);
  if (s == Complex(0.0, 0.0)) return out;
  for (const auto& [x, c] : coeffs_) out.coeffs_[x] = c * s;
  return out;
}

FourierField FourierField::plus(const FourierField& o) const {
  Box box{std::max(box_.radius, o.box_.radius)};
  FourierField out(d_, b_, box, real_flag_ && o.real_flag_);
  out.coeffs_ = coeffs_;
  for (const auto& [x, c] : o.coeffs_) {
    auto [it, inserted] = out.coeffs_.try_emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex(0.0, 0.0)) out.coeffs_.erase(it);
    }
  }
  return out;
}

FourierField FourierField::minus(const FourierField& o) const {
  return plus(o.scaled(-1.0));
}

double FourierField::max_abs() const {
  double m = 0.0;
  for (const auto& [x, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double FourierField::max_imag() const {
  double m = 0.0;
  for (const auto& [x, c] : coeffs_) m = std::max(m, std::abs(c.imag()));
  return m;
}

double FourierField::l1_norm() const {
  double s = 0.0;
  for (const auto& [x, c] : coeffs_) s += std::abs(c);
  return s;
}

double FourierField::strip_imag_dust(double tol) {
  double worst = 0.0;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    worst = std::max(worst, std::abs(it->second.imag()));
    if (std::abs(it->second.imag()) <= tol)
      it->second = Complex(it->second.real(), 0.0);
    if (it->second == Complex(0.0, 0.0))
      it = coeffs_.erase(it);
    else
      ++it;
  }
  return worst;
}

double Multiplier::eval(std::span<const int> n) const {
  for (size_t j = 0; j < resonant_n.size(); ++j) {
    if (resonant_n[j].size() == n.size() &&
        std::equal(n.begin(), n.end(), resonant_n[j].begin()))
      return values[j];
  }
  double s = 0.0;
  for (int v : n) s += static_cast<double>(v) * v;
  return s;
}

Multiplier make_multiplier(const ResonantSet& R, const std::vector<double>& lambda) {
  if (static_cast<int>(lambda.size()) != R.b())
    throw std::invalid_argument("make_multiplier: lambda length != b");
  Multiplier m;
  for (const auto& mode : R.modes()) m.resonant_n.push_back(mode.n);
  m.values = lambda;
  m.description = "convolution potential spectrum";
  return m;
}

namespace {

struct PackedEntry {
  int c[6];
  Complex v;
};

std::vector<PackedEntry> pack(const FourierField& f) {
  std::vector<PackedEntry> out;
  out.reserve(f.size());
  for (const auto& [x, c] : f.entries()) {
    PackedEntry e;
    int i = 0;
    for (int v : x.n) e.c[i++] = v;
    for (int v : x.k) e.c[i++] = v;
    e.v = c;
    out.push_back(e);
  }
  return out;
}

}  // namespace

FourierField multiply(const FourierField& f, const FourierField& g, Box out_box,
                      double* dropped_mass) {
  if (f.d() != g.d() || f.b() != g.b())
    throw std::invalid_argument("multiply: field shape mismatch");
  const int dims = f.d() + f.b();
  FourierField out(f.d(), f.b(), out_box, f.real_flag() && g.real_flag());
  if (f.empty() || g.empty()) return out;

  BoxIndexer idx(out_box.radius, dims);
  std::vector<Complex> buf(static_cast<size_t>(idx.size()), Complex(0, 0));
  const auto fa = pack(f);
  const auto ga = pack(g);
  double dropped = 0.0;
  int t[6];
  for (const auto& a : fa) {
    for (const auto& b : ga) {
      for (int i = 0; i < dims; ++i) t[i] = a.c[i] + b.c[i];
      if (idx.contains(t))
        buf[static_cast<size_t>(idx.flat(t))] += a.v * b.v;
      else
        dropped += std::abs(a.v * b.v);
    }
  }
  if (dropped_mass) *dropped_mass += dropped;

  int c[6];
  for (long long i = 0; i < idx.size(); ++i) {
    const Complex v = buf[static_cast<size_t>(i)];
    if (v == Complex(0.0, 0.0)) continue;
    idx.unflat(i, c);
    MultiIndex x;
    x.n.assign(c, c + f.d());
    x.k.assign(c + f.d(), c + dims);
    out.set(x, v);
  }
  return out;
}

FourierField conjugate_field(const FourierField& f) {
  FourierField out(f.d(), f.b(), f.support_box(), f.real_flag());
  for (const auto& [x, c] : f.entries()) out.set(-x, std::conj(c));
  return out;
}

FourierField theta_derivative(const FourierField& f,
                              const std::vector<double>& lambda_prime) {
  if (static_cast<int>(lambda_prime.size()) != f.b())
    throw std::invalid_argument("theta_derivative: lambda' length != b");
  FourierField out(f.d(), f.b(), f.support_box(), f.real_flag());
  for (const auto& [x, c] : f.entries()) {
    double kl = 0.0;
    for (int j = 0; j < f.b(); ++j) kl += x.k[j] * lambda_prime[j];
    if (kl != 0.0) out.set(x, kl * c);
  }
  return out;
}

FourierField apply_multiplier(const FourierField& f, const Multiplier& m) {
  FourierField out(f.d(), f.b(), f.support_box(), f.real_flag());
  for (const auto& [x, c] : f.entries()) {
    const double mu = m.eval(std::span<const int>(x.n.data(), x.n.size()));
    if (mu != 0.0) out.set(x, mu * c);
  }
  return out;
}

FourierField project_field(const FourierField& f, Region region,
                           const ResonantSet& R, int box_radius) {
  if ((region == Region::PBox || region == Region::PPrimeBox) && box_radius < 1)
    throw std::invalid_argument("project_field: boxed region needs a radius");
  FourierField out(f.d(), f.b(), f.support_box(), f.real_flag());
  for (const auto& [x, c] : f.entries())
    if (region_contains(region, x, R, box_radius)) out.set(x, c);
  return out;
}

}  // namespace cwb

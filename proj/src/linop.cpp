#include "cwb/linop.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cwb/errors.hpp"
#include "cwb/util.hpp"

namespace cwb {

namespace {

constexpr double kRealityTol = 1e-9;

struct PackedSites {
  int dims = 0;
  int d = 0;
  std::vector<int> coords;  // dims per site
  std::vector<int8_t> sign;

  void load(const std::vector<SignedSite>& sites) {
    if (sites.empty()) return;
    d = sites[0].site.d();
    dims = sites[0].site.dims();
    coords.resize(sites.size() * dims);
    sign.resize(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
      int* c = &coords[i * dims];
      int j = 0;
      for (int v : sites[i].site.n) c[j++] = v;
      for (int v : sites[i].site.k) c[j++] = v;
      sign[i] = sites[i].sign == Sign::plus ? 0 : 1;
    }
  }
};

// Per-component |delta|^(1/alpha) lookup over delta in [-range, range].
struct AlphaDistance {
  int range;
  std::vector<double> table;

  AlphaDistance(int range, double alpha) : range(range), table(2 * range + 1) {
    for (int v = -range; v <= range; ++v)
      table[v + range] = std::pow(std::abs(static_cast<double>(v)), 1.0 / alpha);
  }
  double between(const int* a, const int* b, int dims) const {
    double w = 0.0;
    for (int i = 0; i < dims; ++i) w += table[a[i] - b[i] + range];
    return w;
  }
};

// Two-pass least-squares fit of log|m| against -alpha * distance with
// pointwise inflation of the prefactor; streaming, O(1) memory.
class DecayAccumulator {
 public:
  explicit DecayAccumulator(double alpha) : alpha_(alpha) {}

  void add(double dist, double magnitude) {
    if (magnitude == 0.0) return;
    const double x = -alpha_ * dist;
    const double y = std::log(magnitude);
    ++n_;
    sx_ += x;
    sy_ += y;
    sxx_ += x * x;
    sxy_ += x * y;
  }

  bool empty() const { return n_ == 0; }

  double slope() const {
    if (n_ < 2) return 0.0;
    const double det = n_ * sxx_ - sx_ * sx_;
    if (det <= 1e-14 * (n_ * sxx_ + sx_ * sx_ + 1.0)) return 0.0;
    return (n_ * sxy_ - sx_ * sy_) / det;
  }

 private:
  double alpha_;
  double n_ = 0, sx_ = 0, sy_ = 0, sxx_ = 0, sxy_ = 0;
};

template <typename EnumeratePairs>
DecayFit streamed_decay_fit(double alpha, EnumeratePairs&& enumerate) {
  DecayAccumulator acc(alpha);
  enumerate([&](double dist, double mag) { acc.add(dist, mag); });
  DecayFit fit;
  if (acc.empty()) return fit;  // all zero: B = 0, L_fit = +inf
  const double L = acc.slope();
  double logB = -std::numeric_limits<double>::infinity();
  enumerate([&](double dist, double mag) {
    if (mag > 0.0) logB = std::max(logB, std::log(mag) + alpha * L * dist);
  });
  double resid = 0.0;
  enumerate([&](double dist, double mag) {
    if (mag > 0.0)
      resid = std::max(resid,
                       std::abs(std::log(mag) + alpha * L * dist - logB));
  });
  fit.B = std::exp(logB);
  fit.L_fit = L;
  fit.max_residual = resid;
  return fit;
}

// Hager's 1-norm estimator inside Eigen's rcond() silently fails on exact
// zero pivots, so the gate combines it with a pivot-based lower bound:
// ||T^-1||_1 >= 1 / (min |U_ii| * n) for the partial-pivot factor U.
struct LuGate {
  double inv_norm_estimate = 0.0;
  double condition_estimate = 0.0;
};

LuGate gate_from_lu(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                    const Eigen::MatrixXd& A, const char* what) {
  const double rcond = lu.rcond();
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  const double pivmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (pivmin == 0.0 || !(rcond > 0.0) || !std::isfinite(rcond))
    throw SmallDivisorFailure(std::string(what) +
                              ": numerically singular factorization");
  LuGate g;
  g.inv_norm_estimate =
      std::max(1.0 / (rcond * norm1),
               1.0 / (pivmin * static_cast<double>(A.rows())));
  g.condition_estimate = g.inv_norm_estimate * norm1;
  return g;
}

double require_real(const FourierField& f, const char* what) {
  const double scale = std::max(1.0, f.max_abs());
  const double im = f.max_imag();
  if (im > kRealityTol * scale)
    throw RealityViolation(std::string(what) +
                           ": imaginary part beyond tolerance, max |Im| = " +
                           std::to_string(im));
  return im;
}

}  // namespace

int BlockOperator::row_of(const SignedSite& s) const {
  auto it = std::lower_bound(sites.begin(), sites.end(), s);
  if (it == sites.end() || !(*it == s)) return -1;
  return static_cast<int>(it - sites.begin());
}

std::vector<SignedSite> restricted_sites(Box box, const ResonantSet& R) {
  const auto lattice = enumerate_box(box.radius, R.d(), R.b());
  std::vector<SignedSite> sites;
  sites.reserve(2 * lattice.size());
  for (const auto& x : lattice)
    if (!R.contains(x)) sites.push_back({Sign::plus, x});
  for (const auto& x : lattice)
    if (!R.minus_contains(x)) sites.push_back({Sign::minus, x});
  return sites;
}

Eigen::VectorXd assemble_D(const std::vector<SignedSite>& sites,
                           const std::vector<double>& lambda_prime,
                           const Multiplier& mu) {
  Eigen::VectorXd diag(sites.size());
  std::vector<int> neg;
  for (size_t i = 0; i < sites.size(); ++i) {
    const auto& s = sites[i];
    double kl = 0.0;
    for (size_t j = 0; j < lambda_prime.size(); ++j)
      kl += s.site.k[j] * lambda_prime[j];
    if (s.sign == Sign::plus) {
      diag[i] = kl - mu.eval(std::span<const int>(s.site.n.data(),
                                                  s.site.n.size()));
    } else {
      neg.assign(s.site.n.begin(), s.site.n.end());
      for (int& v : neg) v = -v;
      diag[i] = -kl - mu.eval(std::span<const int>(neg.data(), neg.size()));
    }
  }
  return diag;
}

Eigen::MatrixXd assemble_S(const SecondDerivatives& symbols,
                           const std::vector<SignedSite>& sites, Box box) {
  const int need = 2 * box.radius - 1;
  for (const FourierField* sym :
       {&symbols.qqbar, &symbols.qbarqbar, &symbols.qq}) {
    if (sym->support_box().radius < need)
      throw std::invalid_argument(
          "assemble_S: symbol support radius " +
          std::to_string(sym->support_box().radius) +
          " cannot cover differences up to |x-x'| = " + std::to_string(need - 1));
  }
  require_real(symbols.qqbar, "assemble_S qqbar symbol");
  require_real(symbols.qbarqbar, "assemble_S qbarqbar symbol");
  require_real(symbols.qq, "assemble_S qq symbol");

  const int n = static_cast<int>(sites.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return S;
  const int dims = sites[0].site.dims();
  const int d = sites[0].site.d();

  BoxIndexer diff(need, dims);
  std::vector<double> qqbar_buf(static_cast<size_t>(diff.size()), 0.0);
  std::vector<double> qbarqbar_buf(qqbar_buf), qq_buf(qqbar_buf);
  auto fill = [&](const FourierField& sym, std::vector<double>& buf) {
    int c[6];
    for (const auto& [x, v] : sym.entries()) {
      int i = 0;
      for (int vv : x.n) c[i++] = vv;
      for (int vv : x.k) c[i++] = vv;
      if (diff.contains(c)) buf[static_cast<size_t>(diff.flat(c))] = v.real();
    }
  };
  fill(symbols.qqbar, qqbar_buf);
  fill(symbols.qbarqbar, qbarqbar_buf);
  fill(symbols.qq, qq_buf);

  PackedSites ps;
  ps.load(sites);
  int delta[6];
  for (int i = 0; i < n; ++i) {
    const int* a = &ps.coords[static_cast<size_t>(i) * dims];
    for (int j = 0; j < n; ++j) {
      const int* b = &ps.coords[static_cast<size_t>(j) * dims];
      for (int t = 0; t < dims; ++t) delta[t] = a[t] - b[t];
      const size_t f = static_cast<size_t>(diff.flat(delta));
      double v;
      if (ps.sign[i] == ps.sign[j])
        v = qqbar_buf[f];
      else if (ps.sign[i] == 0)
        v = qbarqbar_buf[f];
      else
        v = qq_buf[f];
      S(i, j) = v;
    }
  }
  (void)d;
  return S;
}

BlockOperator assemble_T(const FourierField& q, const PowerSeries& f,
                         double epsilon, Box box, const ResonantSet& R,
                         const std::vector<double>& lambda_prime,
                         const Multiplier& mu, double budget,
                         double* dropped_mass) {
  require_real(q, "assemble_T q");
  BlockOperator T;
  T.box = box;
  T.epsilon = epsilon;
  T.sites = restricted_sites(box, R);
  T.diag = assemble_D(T.sites, lambda_prime, mu);
  T.symbols = second_derivatives(q, f, Box{2 * box.radius - 1}, budget,
                                 dropped_mass);
  T.dense = -epsilon * assemble_S(T.symbols, T.sites, box);
  T.dense.diagonal() += T.diag;
  return T;
}

HomologicalSolution solve_homological(const BlockOperator& T,
                                      const FourierField& rhs_plus,
                                      const FourierField& rhs_minus,
                                      double B_max) {
  const int n = T.dim();
  require_real(rhs_plus, "solve_homological rhs_plus");
  require_real(rhs_minus, "solve_homological rhs_minus");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  auto place = [&](const FourierField& field, Sign sign, const char* what) {
    for (const auto& [x, c] : field.entries()) {
      const int row = T.row_of({sign, x});
      if (row < 0)
        throw std::invalid_argument(std::string(what) +
                                    " carries a coefficient outside the "
                                    "restricted index set at " +
                                    x.str());
      rhs[row] = c.real();
    }
  };
  place(rhs_plus, Sign::plus, "solve_homological: rhs_plus");
  place(rhs_minus, Sign::minus, "solve_homological: rhs_minus");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T.dense);
  const LuGate gate = gate_from_lu(lu, T.dense, "solve_homological");
  HomologicalSolution sol{FourierField(rhs_plus.d(), rhs_plus.b(), T.box, true),
                          FourierField(rhs_plus.d(), rhs_plus.b(), T.box, true)};
  sol.inv_norm_estimate = gate.inv_norm_estimate;
  sol.condition_estimate = gate.condition_estimate;
  if (sol.inv_norm_estimate > B_max)
    throw SmallDivisorFailure(
        "inverse norm estimate " + std::to_string(sol.inv_norm_estimate) +
            " exceeds B_max " + std::to_string(B_max),
        sol.inv_norm_estimate);

  const Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite())
    throw SmallDivisorFailure("solve produced non-finite coefficients");
  const double rhs_norm = rhs.norm();
  sol.residual_rel =
      rhs_norm == 0.0 ? 0.0 : (T.dense * x - rhs).norm() / rhs_norm;

  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    if (T.sites[i].sign == Sign::plus)
      sol.dq.set(T.sites[i].site, x[i]);
    else
      sol.dq_bar.set(T.sites[i].site, x[i]);
  }
  double defect = 0.0;
  for (const auto& [xm, c] : sol.dq_bar.entries())
    defect = std::max(defect, std::abs(c - std::conj(sol.dq.at(-xm))));
  for (const auto& [xp, c] : sol.dq.entries())
    defect = std::max(defect, std::abs(std::conj(c) - sol.dq_bar.at(-xp)));
  sol.conj_defect = defect;
  return sol;
}

double operator_norm(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(M.cols());
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = M * v;
    const double s = w.norm();
    if (s == 0.0) return 0.0;
    Eigen::VectorXd u = M.transpose() * w;
    const double un = u.norm();
    if (un == 0.0) return s;
    v = u / un;
    if (std::abs(s - sigma) <= 1e-13 * s) return s;
    sigma = s;
  }
  return sigma;
}

InverseDiagnostics invert_with_decay_fit(const BlockOperator& T,
                                         const GevreyWeight& w, double B_max) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T.dense);
  gate_from_lu(lu, T.dense, "invert_with_decay_fit");
  InverseDiagnostics out;
  out.inverse = lu.inverse();
  if (!out.inverse.allFinite())
    throw SmallDivisorFailure("invert_with_decay_fit: non-finite inverse");
  out.op_norm = operator_norm(out.inverse);
  if (out.op_norm > B_max)
    throw SmallDivisorFailure("invert_with_decay_fit: inverse norm " +
                                  std::to_string(out.op_norm) +
                                  " exceeds B_max",
                              out.op_norm);

  const int n = T.dim();
  PackedSites ps;
  ps.load(T.sites);
  AlphaDistance dist(2 * T.box.radius, w.alpha);
  out.fit = streamed_decay_fit(w.alpha, [&](auto&& sink) {
    for (int i = 0; i < n; ++i) {
      const int* a = &ps.coords[static_cast<size_t>(i) * ps.dims];
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int* b = &ps.coords[static_cast<size_t>(j) * ps.dims];
        // off-diagonal in the lattice sense: skip same (n,k) across signs
        if (std::equal(a, a + ps.dims, b)) continue;
        sink(dist.between(a, b, ps.dims), std::abs(out.inverse(i, j)));
      }
    }
  });
  return out;
}

DecayFit sampled_decay_fit(const BlockOperator& T, const GevreyWeight& w,
                           int max_columns, double B_max) {
  const int n = T.dim();
  if (n == 0) return DecayFit{};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T.dense);
  gate_from_lu(lu, T.dense, "sampled_decay_fit");
  (void)B_max;

  const int cols = std::min(max_columns, n);
  std::vector<int> picks;
  for (int i = 0; i < cols; ++i)
    picks.push_back(cols == 1 ? 0
                              : static_cast<int>((static_cast<long long>(i) *
                                                  (n - 1)) /
                                                 (cols - 1)));
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

  Eigen::MatrixXd columns(n, picks.size());
  for (size_t c = 0; c < picks.size(); ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[picks[c]] = 1.0;
    columns.col(c) = lu.solve(e);
  }

  PackedSites ps;
  ps.load(T.sites);
  AlphaDistance dist(2 * T.box.radius, w.alpha);
  return streamed_decay_fit(w.alpha, [&](auto&& sink) {
    for (size_t c = 0; c < picks.size(); ++c) {
      const int* b = &ps.coords[static_cast<size_t>(picks[c]) * ps.dims];
      for (int i = 0; i < n; ++i) {
        if (i == picks[c]) continue;
        const int* a = &ps.coords[static_cast<size_t>(i) * ps.dims];
        if (std::equal(a, a + ps.dims, b)) continue;
        sink(dist.between(a, b, ps.dims), std::abs(columns(i, c)));
      }
    }
  });
}

}  // namespace cwb

#include "cwb/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cwb/util.hpp"

namespace cwb {

double f_norm(const FourierField& f, const GevreyWeight& w) {
  double s = 0.0;
  for (const auto& [x, c] : f.entries())
    s += std::exp(w.alpha * w.L * alpha_index_weight(x, w.alpha)) * std::abs(c);
  return s;
}

double weight_factor(const MultiIndex& x, const GevreyWeight& w) {
  return std::exp(w.alpha * w.L * alpha_index_weight(x, w.alpha));
}

namespace {

// sum_{m=0}^{cap} ((t^m / m!))^alpha plus a certified geometric tail.
// Requires t < cap + 1 so the post-cap term ratio (t/(cap+1))^alpha is < 1.
double one_dim_weight_series(double t, double alpha, int cap) {
  double u = 1.0;  // t^m / m!
  double s = 1.0;
  for (int m = 1; m <= cap; ++m) {
    u *= t / m;
    s += std::pow(u, alpha);
  }
  const double ratio = t / (cap + 1);
  if (ratio >= 1.0)
    throw std::runtime_error(
        "gevrey_c0_norm_bracket: tail not certifiable, raise order_cap");
  const double first_tail = std::pow(u * ratio, alpha);
  s += first_tail / (1.0 - std::pow(ratio, alpha));
  return s;
}

// Recursive enumeration of derivative orders for the lower bound. Evaluates
// the grid sup of d^beta f whenever the l1 ceiling of the term is above the
// pruning threshold.
struct LowerAccumulator {
  const FourierField& f;
  const GevreyWeight& w;
  int grid;
  int dims;
  std::vector<const MultiIndex*> sites;
  std::vector<Complex> coeffs;
  double total = 0.0;

  double grid_sup(const std::vector<int>& beta) const {
    // d^beta f = sum_x fhat(x) (i x)^beta e^{i x.theta}; max |.| over the grid.
    std::vector<Complex> amps(sites.size());
    for (size_t s = 0; s < sites.size(); ++s) {
      double mag = 1.0;
      const MultiIndex& x = *sites[s];
      int i = 0;
      for (int v : x.n) mag *= std::pow(static_cast<double>(v), beta[i++]);
      for (int v : x.k) mag *= std::pow(static_cast<double>(v), beta[i++]);
      amps[s] = coeffs[s] * mag;  // modulus of i^|beta| is 1; phases below
    }
    double best = 0.0;
    std::vector<int> g(dims, 0);
    const double step = 2.0 * std::numbers::pi / grid;
    for (;;) {
      Complex acc(0.0, 0.0);
      for (size_t s = 0; s < sites.size(); ++s) {
        double phase = 0.0;
        const MultiIndex& x = *sites[s];
        int i = 0;
        for (int v : x.n) phase += v * g[i++] * step;
        for (int v : x.k) phase += v * g[i++] * step;
        acc += amps[s] * Complex(std::cos(phase), std::sin(phase));
      }
      best = std::max(best, std::abs(acc));
      int i = dims - 1;
      while (i >= 0) {
        if (++g[i] < grid) break;
        g[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
    return best;
  }

  double l1_ceiling(const std::vector<int>& beta) const {
    double s = 0.0;
    for (size_t j = 0; j < sites.size(); ++j) {
      double mag = std::abs(coeffs[j]);
      const MultiIndex& x = *sites[j];
      int i = 0;
      for (int v : x.n) mag *= std::pow(std::abs(static_cast<double>(v)), beta[i++]);
      for (int v : x.k) mag *= std::pow(std::abs(static_cast<double>(v)), beta[i++]);
      s += mag;
    }
    return s;
  }

  void visit(std::vector<int>& beta, int pos, int budget, double weight_log) {
    if (pos == dims) {
      const double weight = std::exp(w.alpha * weight_log);
      const double ceiling = weight * l1_ceiling(beta);
      if (ceiling < 1e-16 * (total + 1e-300)) return;
      total += weight * grid_sup(beta);
      return;
    }
    for (int m = 0; m <= budget; ++m) {
      // weight log accumulates log(L^m / m!)
      double wl = weight_log;
      for (int j = 1; j <= m; ++j) wl += std::log(w.L) - std::log(j);
      beta[pos] = m;
      visit(beta, pos + 1, budget - m, wl);
    }
    beta[pos] = 0;
  }
};

}  // namespace

NormBracket gevrey_c0_norm_bracket(const FourierField& f, const GevreyWeight& w,
                                   int order_cap, int grid_per_dim) {
  const int dims = f.d() + f.b();
  NormBracket out;
  if (f.empty()) return out;

  for (const auto& [x, c] : f.entries()) {
    double prod = std::abs(c);
    for (int v : x.n)
      prod *= one_dim_weight_series(
          w.L * std::pow(std::abs(static_cast<double>(v)), 1.0 / w.alpha),
          w.alpha, order_cap);
    for (int v : x.k)
      prod *= one_dim_weight_series(
          w.L * std::pow(std::abs(static_cast<double>(v)), 1.0 / w.alpha),
          w.alpha, order_cap);
    out.upper += prod;
  }

  LowerAccumulator acc{f, w, grid_per_dim, dims, {}, {}};
  for (const auto& [x, c] : f.entries()) {
    acc.sites.push_back(&x);
    acc.coeffs.push_back(c);
  }
  std::vector<int> beta(dims, 0);
  acc.visit(beta, 0, order_cap, 0.0);
  out.lower = acc.total;
  // Floating-point guard: both sides bound the same quantity, keep ordering.
  out.lower = std::min(out.lower, out.upper);
  return out;
}

double decay_constant_h(double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("decay_constant_h: eps in (0,1)");
  if (!(alpha > 1.0)) throw std::invalid_argument("decay_constant_h: alpha > 1");
  const double base = 1.0 - std::pow(1.0 - eps, alpha / (alpha - 1.0));
  return std::pow(1.0 / base, alpha - 1.0);
}

double c_delta_sum(double alpha, double delta, int dims) {
  if (!(delta > 0.0)) throw std::invalid_argument("c_delta_sum: delta > 0");
  const double one_dim = 1.0 + 2.0 * sum_exp_alpha(alpha * delta, alpha);
  return std::pow(one_dim, dims);
}

DecayFit fit_exponential_decay(const std::vector<DecayEntry>& entries,
                               double alpha) {
  if (entries.empty())
    throw std::invalid_argument("fit_exponential_decay: no entries");
  std::vector<double> dist;
  std::vector<double> logmag;
  for (const auto& e : entries) {
    if (e.magnitude == 0.0) continue;
    dist.push_back(alpha_index_weight(e.x - e.xp, alpha));
    logmag.push_back(std::log(e.magnitude));
  }
  DecayFit fit;
  if (dist.empty()) return fit;  // B = 0, L_fit = +inf sentinel

  double L = 0.0;
  if (dist.size() == 1) {
    L = 0.0;
  } else {
    // regress log m = c - alpha L w
    std::vector<double> xs(dist.size());
    for (size_t i = 0; i < dist.size(); ++i) xs[i] = -alpha * dist[i];
    const LinearFit lf = linear_fit(xs, logmag);
    L = lf.degenerate ? 0.0 : lf.slope;
  }
  // Inflate B so the envelope holds pointwise on the input.
  double logB = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < dist.size(); ++i)
    logB = std::max(logB, logmag[i] + alpha * L * dist[i]);
  fit.B = std::exp(logB);
  fit.L_fit = L;
  double resid = 0.0;
  for (size_t i = 0; i < dist.size(); ++i)
    resid = std::max(resid, std::abs(logmag[i] + alpha * L * dist[i] - logB));
  fit.max_residual = resid;
  return fit;
}

}  // namespace cwb

#include "cwb/multiscale.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "cwb/errors.hpp"
#include "cwb/linop.hpp"
#include "cwb/util.hpp"

namespace cwb {

namespace {

Eigen::MatrixXd restrict_rows(const Eigen::MatrixXd& T,
                              const std::vector<int>& idx) {
  Eigen::MatrixXd R(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) R(i, j) = T(idx[i], idx[j]);
  return R;
}

Eigen::MatrixXd safe_inverse(const Eigen::MatrixXd& M, const std::string& name) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || !std::isfinite(rcond))
    throw std::runtime_error("singular restriction: " + name);
  Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite())
    throw std::runtime_error("singular restriction: " + name);
  return inv;
}

}  // namespace

double resolvent_residual(const Eigen::MatrixXd& T, const std::vector<int>& L1,
                          const std::vector<int>& L2) {
  const int n = static_cast<int>(T.rows());
  std::vector<char> seen(n, 0);
  for (int i : L1) {
    if (i < 0 || i >= n || seen[i]++)
      throw std::invalid_argument("resolvent_residual: L1 not a valid partition");
  }
  for (int i : L2) {
    if (i < 0 || i >= n || seen[i]++)
      throw std::invalid_argument("resolvent_residual: L2 overlaps or out of range");
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i])
      throw std::invalid_argument("resolvent_residual: L1 u L2 must cover T");

  const Eigen::MatrixXd G = safe_inverse(T, "Lambda");
  // Block-diagonal embedding of the sub-inverses.
  Eigen::MatrixXd Gsplit = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Tsplit = Eigen::MatrixXd::Zero(n, n);
  for (const auto* part : {&L1, &L2}) {
    if (part->empty()) continue;
    const Eigen::MatrixXd Tp = restrict_rows(T, *part);
    const Eigen::MatrixXd Gp =
        safe_inverse(Tp, part == &L1 ? "Lambda1" : "Lambda2");
    for (size_t i = 0; i < part->size(); ++i)
      for (size_t j = 0; j < part->size(); ++j) {
        Gsplit((*part)[i], (*part)[j]) = Gp(i, j);
        Tsplit((*part)[i], (*part)[j]) = Tp(i, j);
      }
  }
  const Eigen::MatrixXd defect = G - (Gsplit - Gsplit * (T - Tsplit) * G);
  return defect.cwiseAbs().maxCoeff();
}

PerturbationReport perturbation_check(const std::vector<MultiIndex>& sites,
                                      const Eigen::MatrixXd& T,
                                      const Eigen::MatrixXd& T_prime, double B,
                                      double D_radius, double L, double eta,
                                      double alpha) {
  const int n = static_cast<int>(T.rows());
  if (static_cast<int>(sites.size()) != n || T_prime.rows() != n)
    throw std::invalid_argument("perturbation_check: size mismatch");
  const int bd = sites.empty() ? 1 : sites[0].dims();
  const double C5 = 2.0 * bd + 1.0;
  int box_radius = 1;
  for (const auto& s : sites) box_radius = std::max(box_radius, s.sup_norm() + 1);

  PerturbationReport rep;
  rep.smallness = eta * std::pow(static_cast<double>(box_radius), C5) * B * B *
                  std::exp(D_radius);

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[i][j] = alpha_index_weight(sites[i] - sites[j], alpha);

  // Hypothesis (1): ||T^-1|| < B with decay beyond D_radius.
  Eigen::MatrixXd Ginv;
  try {
    Ginv = safe_inverse(T, "T");
  } catch (const std::exception&) {
    rep.unmet = "T not invertible";
    return rep;
  }
  rep.inv_norm = operator_norm(Ginv);
  if (!(rep.inv_norm < B)) {
    rep.unmet = "||T^-1|| >= B";
    return rep;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (dist[i][j] > D_radius &&
          !(std::abs(Ginv(i, j)) < std::exp(-alpha * L * dist[i][j]))) {
        rep.unmet = "T^-1 decay hypothesis fails beyond D";
        return rep;
      }
    }
  // Hypothesis (2): perturbation envelope.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(std::abs(T_prime(i, j) - T(i, j)) <
            eta * std::exp(-alpha * L * dist[i][j]) + 1e-300)) {
        rep.unmet = "|T' - T| exceeds eta envelope";
        return rep;
      }
  // Hypothesis (3): smallness product.
  if (!(rep.smallness <= 0.1)) {
    rep.unmet = "eta N^C5 B^2 e^D not small";
    return rep;
  }
  rep.hypotheses_met = true;

  Eigen::MatrixXd Gp;
  try {
    Gp = safe_inverse(T_prime, "T'");
  } catch (const std::exception&) {
    rep.conclusion_norm = rep.conclusion_decay = false;
    return rep;
  }
  rep.inv_norm_pert = operator_norm(Gp);
  rep.conclusion_norm = rep.inv_norm_pert < 2.0 * B;
  rep.margin_norm = 2.0 * B - rep.inv_norm_pert;

  rep.conclusion_decay = true;
  rep.margin_decay = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (dist[i][j] <= D_radius) continue;
      const double envelope = 2.0 * std::exp(-alpha * L * dist[i][j]);
      rep.margin_decay = std::min(rep.margin_decay, envelope - std::abs(Gp(i, j)));
      if (!(std::abs(Gp(i, j)) < envelope)) rep.conclusion_decay = false;
    }
  if (!std::isfinite(rep.margin_decay)) rep.margin_decay = 0.0;
  return rep;
}

NeumannReport neumann_bound(const Eigen::VectorXd& D_diag,
                            const Eigen::MatrixXd& S, double epsilon) {
  const int n = static_cast<int>(D_diag.size());
  NeumannReport rep;
  for (int i = 0; i < n; ++i)
    if (D_diag[i] == 0.0)
      throw std::invalid_argument("neumann_bound: D must be invertible");
  Eigen::MatrixXd Dinv = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) Dinv(i, i) = 1.0 / D_diag[i];
  rep.coupling = operator_norm(epsilon * S * Dinv);
  rep.precondition_met = rep.coupling < 0.5;
  Eigen::MatrixXd T = -epsilon * S;
  T.diagonal() += D_diag;
  const Eigen::MatrixXd Tinv = safe_inverse(T, "T");
  rep.lhs = operator_norm(Tinv);
  rep.rhs = 2.0 * operator_norm(Dinv);
  rep.holds = rep.lhs < rep.rhs;
  return rep;
}

// ---------------------------------------------------------------------------
// ParamPolynomial

ParamPolynomial::ParamPolynomial(int nvars, int degree_cap)
    : nvars_(nvars), degree_cap_(degree_cap) {
  if (nvars < 1 || degree_cap < 0)
    throw std::invalid_argument("ParamPolynomial: bad shape");
}

ParamPolynomial ParamPolynomial::constant(int nvars, int degree_cap,
                                          double value) {
  ParamPolynomial p(nvars, degree_cap);
  p.set_term(std::vector<int>(nvars, 0), value);
  return p;
}

ParamPolynomial ParamPolynomial::variable(int nvars, int degree_cap, int var) {
  ParamPolynomial p(nvars, degree_cap);
  std::vector<int> e(nvars, 0);
  e[var] = 1;
  p.set_term(e, 1.0);
  return p;
}

double ParamPolynomial::coeff(const std::vector<int>& expo) const {
  auto it = terms_.find(expo);
  return it == terms_.end() ? 0.0 : it->second;
}

int ParamPolynomial::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    deg = std::max(deg, d);
  }
  return deg;
}

void ParamPolynomial::set_term(const std::vector<int>& expo, double coeff) {
  if (static_cast<int>(expo.size()) != nvars_)
    throw std::invalid_argument("ParamPolynomial: exponent arity mismatch");
  int d = 0;
  for (int v : expo) {
    if (v < 0) throw std::invalid_argument("ParamPolynomial: negative exponent");
    d += v;
  }
  if (d > degree_cap_)
    throw std::invalid_argument("ParamPolynomial: degree cap exceeded");
  if (coeff == 0.0)
    terms_.erase(expo);
  else
    terms_[expo] = coeff;
}

double ParamPolynomial::eval(const std::vector<double>& x) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int j = 0; j < e[i]; ++j) t *= x[i];
    acc += t;
  }
  return acc;
}

ParamPolynomial ParamPolynomial::partial(int var) const {
  ParamPolynomial out(nvars_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    std::vector<int> ne = e;
    ne[var] -= 1;
    out.set_term(ne, out.coeff(ne) + c * e[var]);
  }
  return out;
}

ParamPolynomial ParamPolynomial::plus(const ParamPolynomial& o) const {
  ParamPolynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.set_term(e, out.coeff(e) + c);
  return out;
}

ParamPolynomial ParamPolynomial::times(const ParamPolynomial& o) const {
  ParamPolynomial out(nvars_, degree_cap_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<int> e = e1;
      for (int i = 0; i < nvars_; ++i) e[i] += e2[i];
      out.set_term(e, out.coeff(e) + c1 * c2);
    }
  return out;
}

ParamPolynomial ParamPolynomial::scaled(double s) const {
  ParamPolynomial out(nvars_, degree_cap_);
  if (s == 0.0) return out;
  for (const auto& [e, c] : terms_) out.set_term(e, c * s);
  return out;
}

ParamPolynomial ParamPolynomial::shifted(const std::vector<double>& shift) const {
  ParamPolynomial out(nvars_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    // expand prod_i (x_i + shift_i)^{e_i}
    ParamPolynomial term = ParamPolynomial::constant(nvars_, degree_cap_, c);
    for (int i = 0; i < nvars_; ++i) {
      ParamPolynomial lin = ParamPolynomial::variable(nvars_, degree_cap_, i);
      lin.set_term(std::vector<int>(nvars_, 0), shift[i]);
      for (int j = 0; j < e[i]; ++j) term = term.times(lin);
    }
    out = out.plus(term);
  }
  return out;
}

ParamPolynomial ParamPolynomial::truncated(int p) const {
  ParamPolynomial out(nvars_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v : e) d += v;
    if (d <= p) out.set_term(e, c);
  }
  return out;
}

FourierField ParamField::eval(const std::vector<double>& x, Box box) const {
  FourierField out(d, b, box, true);
  for (const auto& [site, poly] : coeffs) {
    const double v = poly.eval(x);
    if (v != 0.0) out.set(site, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taylor remainder (asymptotic-expansion bound)

namespace {

void grid_points(const std::vector<double>& lo, const std::vector<double>& hi,
                 int per_dim, std::vector<std::vector<double>>& out) {
  const int dims = static_cast<int>(lo.size());
  std::vector<int> g(dims, 0);
  for (;;) {
    std::vector<double> x(dims);
    for (int i = 0; i < dims; ++i)
      x[i] = per_dim == 1
                 ? lo[i]
                 : lo[i] + (hi[i] - lo[i]) * g[i] / (per_dim - 1);
    out.push_back(std::move(x));
    int i = dims - 1;
    while (i >= 0) {
      if (++g[i] < per_dim) break;
      g[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TaylorReport taylor_remainder(const ParamField& phi,
                              const std::vector<double>& center, int p,
                              Box field_box, double alpha, double L1, double L2,
                              const std::vector<double>& lo,
                              const std::vector<double>& hi, int grid_per_dim) {
  const int nvars = static_cast<int>(center.size());
  TaylorReport rep;

  // Degree-p Taylor truncation at the center: exact for polynomial entries.
  std::vector<double> minus_center(center);
  for (double& v : minus_center) v = -v;
  rep.truncation.d = phi.d;
  rep.truncation.b = phi.b;
  for (const auto& [site, poly] : phi.coeffs) {
    ParamPolynomial t = poly.shifted(center).truncated(p).shifted(minus_center);
    rep.truncation.coeffs.emplace(site, std::move(t));
  }

  // Measured (alpha, L1, L2) norm: sum over parameter orders k1 of
  // (L1^|k1|/k1!)^alpha * sup_grid || d^k1 phi ||_{F_{alpha,L2}}.
  std::vector<std::vector<double>> grid;
  grid_points(lo, hi, grid_per_dim, grid);
  const GevreyWeight w2{alpha, L2};
  int max_param_deg = 0;
  for (const auto& [site, poly] : phi.coeffs)
    max_param_deg = std::max(max_param_deg, poly.total_degree());

  std::vector<int> k1(nvars, 0);
  for (;;) {
    int total = 0;
    for (int v : k1) total += v;
    if (total <= max_param_deg) {
      std::map<MultiIndex, ParamPolynomial> deriv;
      for (const auto& [site, poly] : phi.coeffs) {
        ParamPolynomial dp = poly;
        for (int i = 0; i < nvars; ++i)
          for (int j = 0; j < k1[i]; ++j) dp = dp.partial(i);
        deriv.emplace(site, std::move(dp));
      }
      double sup = 0.0;
      for (const auto& x : grid) {
        double fn = 0.0;
        for (const auto& [site, dp] : deriv)
          fn += std::abs(dp.eval(x)) * weight_factor(site, w2);
        sup = std::max(sup, fn);
      }
      double wlog = 0.0;
      double kfact = 1.0;
      for (int i = 0; i < nvars; ++i) {
        wlog += k1[i] * std::log(L1);
        kfact *= factorial(k1[i]);
      }
      rep.norm_l1l2 += std::pow(std::exp(wlog) / kfact, alpha) * sup;
    }
    // next multi-order, bounded per-variable by max_param_deg
    int i = nvars - 1;
    while (i >= 0) {
      if (++k1[i] <= max_param_deg) break;
      k1[i] = 0;
      --i;
    }
    if (i < 0) break;
  }

  rep.bound_coeff = rep.norm_l1l2 * std::pow(factorial(p + 1), alpha - 1.0) *
                    std::pow(L1, -(p + 1) * alpha);

  rep.verified = true;
  for (const auto& x : grid) {
    double dl1 = 0.0;
    for (int i = 0; i < nvars; ++i) dl1 += std::abs(x[i] - center[i]);
    const FourierField full = phi.eval(x, field_box);
    const FourierField trunc = rep.truncation.eval(x, field_box);
    const double measured = f_norm(full.minus(trunc), w2);
    const double bound = rep.bound_coeff * std::pow(dl1, p + 1);
    if (measured > rep.max_measured) {
      rep.max_measured = measured;
      rep.max_bound = bound;
    }
    if (measured > bound * (1.0 + 1e-12) + 1e-15) rep.verified = false;
  }
  return rep;
}

MarkovReport markov_bound(const ParamPolynomial& p,
                          const std::vector<double>& lo,
                          const std::vector<double>& hi, int grid_per_dim) {
  const int nvars = p.nvars();
  if (static_cast<int>(lo.size()) != nvars || hi.size() != lo.size())
    throw std::invalid_argument("markov_bound: box arity mismatch");
  double omega = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nvars; ++i) {
    if (!(hi[i] > lo[i]))
      throw std::invalid_argument("markov_bound: degenerate interval");
    omega = std::min(omega, hi[i] - lo[i]);
  }
  std::vector<ParamPolynomial> grad;
  for (int i = 0; i < nvars; ++i) grad.push_back(p.partial(i));

  std::vector<std::vector<double>> grid;
  grid_points(lo, hi, grid_per_dim, grid);
  double sup_p = 0.0, sup_grad = 0.0;
  for (const auto& x : grid) {
    sup_p = std::max(sup_p, std::abs(p.eval(x)));
    double g2 = 0.0;
    for (const auto& gp : grad) {
      const double v = gp.eval(x);
      g2 += v * v;
    }
    sup_grad = std::max(sup_grad, std::sqrt(g2));
  }
  MarkovReport rep;
  const double k = static_cast<double>(p.total_degree());
  rep.bound = 4.0 * k * k / omega * sup_p;
  rep.measured = sup_grad;
  rep.holds = rep.measured <= rep.bound * (1.0 + 1e-12) + 1e-15;
  return rep;
}

ArithmeticPartition arithmetic_partition(int B, int box_radius, int d,
                                         long long enum_cap) {
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    total *= (2LL * box_radius + 1);
    if (total > enum_cap)
      throw std::length_error("arithmetic_partition: box exceeds cap");
  }
  std::vector<std::vector<int>> pts;
  pts.reserve(static_cast<size_t>(total));
  std::vector<int> c(d, -box_radius);
  for (;;) {
    pts.push_back(c);
    int i = d - 1;
    while (i >= 0) {
      if (++c[i] <= box_radius) break;
      c[i] = -box_radius;
      --i;
    }
    if (i < 0) break;
  }

  auto link_value = [&](const std::vector<int>& a, const std::vector<int>& b) {
    long long sup = 0, na = 0, nb = 0;
    for (int i = 0; i < d; ++i) {
      sup = std::max<long long>(sup, std::abs(a[i] - b[i]));
      na += static_cast<long long>(a[i]) * a[i];
      nb += static_cast<long long>(b[i]) * b[i];
    }
    return sup + std::llabs(na - nb);
  };

  // Union-find over the adjacency |n-n'| + ||n|^2-|n'|^2| <= B.
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (link_value(pts[i], pts[j]) <= B) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[ri] = rj;
      }

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

  ArithmeticPartition out;
  for (const auto& [root, members] : groups) {
    std::vector<std::vector<int>> cluster;
    for (int i : members) cluster.push_back(pts[i]);
    int diam = 0;
    for (size_t a = 0; a < cluster.size(); ++a)
      for (size_t b = a + 1; b < cluster.size(); ++b) {
        int sup = 0;
        for (int i = 0; i < d; ++i)
          sup = std::max(sup, std::abs(cluster[a][i] - cluster[b][i]));
        diam = std::max(diam, sup);
      }
    out.max_diameter = std::max(out.max_diameter, diam);
    out.clusters.push_back(std::move(cluster));
  }
  out.fitted_C0 =
      B > 1 ? std::log(std::max(out.max_diameter, 2) + 0.0) / std::log(B) : 0.0;

  out.min_cross_link = std::numeric_limits<long long>::max();
  std::vector<int> cluster_of(n);
  {
    int cidx = 0;
    for (const auto& [root, members] : groups) {
      for (int i : members) cluster_of[i] = cidx;
      ++cidx;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cluster_of[i] != cluster_of[j])
        out.min_cross_link = std::min(out.min_cross_link,
                                      link_value(pts[i], pts[j]));
  if (out.min_cross_link == std::numeric_limits<long long>::max())
    out.min_cross_link = 0;  // single cluster
  out.separation_verified =
      out.clusters.size() <= 1 || out.min_cross_link > B;
  return out;
}

CouplingReport coupling_experiment(const CouplingSpec& spec) {
  const double c = 1.0 / spec.alpha;
  auto fail = [](const std::string& ineq) {
    throw ConfigError("coupling_experiment: exponent constraint violated: " +
                      ineq);
  };
  if (!(spec.theta4 < spec.theta3 && spec.theta3 < spec.theta2 &&
        spec.theta2 < spec.theta1 && spec.theta1 < spec.theta &&
        spec.theta < 1.0))
    fail("theta4 < theta3 < theta2 < theta1 < theta < 1");
  if (!(spec.kappa < c)) fail("kappa < 1/alpha");
  if (!(c > spec.theta4 / spec.theta3)) fail("1/alpha > theta4/theta3");
  if (!(c < (spec.theta - spec.theta1 - spec.delta_tilde) / (1.0 - spec.theta3)))
    fail("1/alpha < (theta - theta1 - delta)/(1 - theta3)");

  const int dims = spec.d + spec.b;
  const int R = spec.M1;
  std::vector<std::vector<int>> pts;
  std::vector<int> cc(dims, -R);
  for (;;) {
    pts.push_back(cc);
    int i = dims - 1;
    while (i >= 0) {
      if (++cc[i] <= R) break;
      cc[i] = -R;
      --i;
    }
    if (i < 0) break;
  }
  const int n = static_cast<int>(pts.size());

  std::mt19937_64 rng(splitmix64(spec.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto dist_alpha = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double w = 0.0;
    for (int i = 0; i < dims; ++i)
      w += std::pow(std::abs(static_cast<double>(a[i] - b[i])), c);
    return w;
  };
  auto dist_sup = [&](const std::vector<int>& a, const std::vector<int>& b) {
    int m = 0;
    for (int i = 0; i < dims; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };

  CouplingReport rep;
  rep.planted_rate = spec.L;

  std::vector<int> center(dims, spec.M1 / 2);
  const double cluster_norm = std::exp(std::pow(spec.M1, spec.theta4));

  Eigen::MatrixXd T(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double envelope =
          spec.noise_amp *
          std::exp(-spec.alpha * spec.L * dist_alpha(pts[i], pts[j]));
      T(i, j) = envelope * (2.0 * unit(rng) - 1.0);
    }
  }
  for (int i = 0; i < n; ++i) {
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    T(i, i) = sign * (1.0 + unit(rng));
  }
  if (spec.with_singular_cluster) {
    int ci = -1;
    for (int i = 0; i < n; ++i)
      if (pts[i] == center) ci = i;
    T(ci, ci) = 1.0 / cluster_norm;
    rep.cluster_center = center;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0))
    throw std::runtime_error("coupling_experiment: synthesized T is singular");
  const Eigen::MatrixXd G = lu.inverse();
  rep.norm_G = operator_norm(G);

  // Fit the off-diagonal decay using pairs far from the singular cluster and
  // separated by at least M1^theta.
  const double exclusion = std::ceil(std::pow(spec.M1, spec.theta3)) + 1.0;
  const double min_sep = std::pow(spec.M1, spec.theta);
  std::vector<DecayEntry> entries;
  for (int i = 0; i < n; ++i) {
    if (spec.with_singular_cluster &&
        dist_sup(pts[i], center) <= exclusion)
      continue;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (spec.with_singular_cluster &&
          dist_sup(pts[j], center) <= exclusion)
        continue;
      if (dist_sup(pts[i], pts[j]) < min_sep) continue;
      MultiIndex a, b;
      a.n.assign(pts[i].begin(), pts[i].begin() + spec.d);
      a.k.assign(pts[i].begin() + spec.d, pts[i].end());
      b.n.assign(pts[j].begin(), pts[j].begin() + spec.d);
      b.k.assign(pts[j].begin() + spec.d, pts[j].end());
      entries.push_back({a, b, std::abs(G(i, j))});
    }
  }
  rep.pairs_fitted = static_cast<int>(entries.size());
  if (entries.empty())
    throw std::runtime_error(
        "coupling_experiment: no probe pairs at the requested separation");
  const DecayFit fit = fit_exponential_decay(entries, spec.alpha);
  rep.fitted_rate = fit.L_fit;
  rep.pass = rep.fitted_rate >= (1.0 - spec.loss_fraction) * spec.L;
  return rep;
}

}  // namespace cwb

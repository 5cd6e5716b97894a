#include "cwb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cwb/field.hpp"
#include "cwb/gevrey.hpp"
#include "cwb/linop.hpp"
#include "cwb/multiscale.hpp"
#include "cwb/smalldiv.hpp"
#include "cwb/util.hpp"

namespace cwb {

namespace {

std::mt19937_64 trial_rng(uint64_t seed, uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ (trial * 0x9e3779b97f4a7c15ULL)));
}

MultiIndex random_site(std::mt19937_64& rng, int d, int b, int range) {
  std::uniform_int_distribution<int> comp(-range, range);
  MultiIndex x;
  x.n.resize(d);
  x.k.resize(b);
  for (int& v : x.n) v = comp(rng);
  for (int& v : x.k) v = comp(rng);
  return x;
}

FourierField random_field(std::mt19937_64& rng, int d, int b, int range,
                          int max_modes, double scale, bool real) {
  std::uniform_int_distribution<int> nmodes(1, max_modes);
  std::normal_distribution<double> gauss(0.0, scale);
  FourierField f(d, b, Box{range + 1}, real);
  const int m = nmodes(rng);
  for (int i = 0; i < m; ++i) {
    const MultiIndex x = random_site(rng, d, b, range);
    f.set(x, real ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng)));
  }
  return f;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

}  // namespace

SuiteResult verify_gevrey_norms(uint64_t seed) {
  SuiteResult res;
  res.name = "gevrey-norms";
  const double alpha = 2.0;
  const double L = 1.0;

  // Sub-additivity of the index weight.
  for (int t = 0; t < 1000; ++t) {
    auto rng = trial_rng(seed, t);
    const MultiIndex x = random_site(rng, 2, 2, 40);
    const MultiIndex y = random_site(rng, 2, 2, 40);
    ++res.trials;
    if (alpha_index_weight(x + y, alpha) >
        alpha_index_weight(x, alpha) + alpha_index_weight(y, alpha) + 1e-12)
      ++res.violations;
  }

  // Submultiplicativity of the F-norm under truncated convolution.
  const GevreyWeight w{alpha, L};
  for (int t = 0; t < 1000; ++t) {
    auto rng = trial_rng(seed, 10000 + t);
    const FourierField f = random_field(rng, 1, 1, 4, 6, 1.0, false);
    const FourierField g = random_field(rng, 1, 1, 4, 6, 1.0, false);
    const FourierField fg = multiply(f, g, Box{9});
    ++res.trials;
    if (f_norm(fg, w) > f_norm(f, w) * f_norm(g, w) * (1.0 + 1e-12))
      ++res.violations;
  }

  // Norm-chain and Fourier-decay bounds on random trig polynomials.
  const double eps_chain = 0.3, delta = 0.2;
  const double eps_decay = 0.01;
  const int dims = 2;
  const double h_chain = decay_constant_h(eps_chain, alpha);
  const double h_decay = decay_constant_h(eps_decay, alpha);
  const double c_delta = c_delta_sum(alpha, delta, dims);
  const double two_pi = 2.0 * std::numbers::pi;
  double worst_chain = 0.0, worst_decay = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto rng = trial_rng(seed, 20000 + t);
    const FourierField f = random_field(rng, 1, 1, 6, 8, 1.0, false);
    const NormBracket br = gevrey_c0_norm_bracket(f, w, 40, 32);
    ++res.trials;
    if (br.lower > f_norm(f, w) * (1.0 + 1e-12)) ++res.violations;

    const double reduced_width = (1.0 - eps_chain) * L - delta;
    const double lhs = f_norm(f, {alpha, reduced_width});
    const double rhs =
        std::pow(h_chain / two_pi, dims) * c_delta * br.upper;
    ++res.trials;
    if (lhs > rhs * (1.0 + 1e-12)) ++res.violations;
    worst_chain = std::max(worst_chain, rhs > 0 ? lhs / rhs : 0.0);

    for (const auto& [x, c] : f.entries()) {
      const double bound = std::pow(h_decay / two_pi, dims) * br.upper *
                           std::exp(-alpha * (1.0 - eps_decay) * L *
                                    alpha_index_weight(x, alpha));
      ++res.trials;
      if (std::abs(c) > bound * (1.0 + 1e-12)) ++res.violations;
      worst_decay = std::max(worst_decay, bound > 0 ? std::abs(c) / bound : 0.0);
    }
  }
  res.notes.push_back("chain worst lhs/rhs = " + fmt(worst_chain));
  res.notes.push_back("decay worst ratio = " + fmt(worst_decay));
  return res;
}

SuiteResult verify_field_algebra(uint64_t seed) {
  SuiteResult res;
  res.name = "field-algebra";
  for (int t = 0; t < 200; ++t) {
    auto rng = trial_rng(seed, t);
    const FourierField f = random_field(rng, 1, 1, 3, 5, 1.0, false);
    const FourierField g = random_field(rng, 1, 1, 3, 5, 1.0, false);
    const Box out{7};
    const FourierField fg = multiply(f, g, out);
    // oracle: double loop over coefficient pairs
    FourierField oracle(1, 1, out);
    for (const auto& [x, a] : f.entries())
      for (const auto& [y, b] : g.entries()) {
        const MultiIndex s = x + y;
        if (out.contains(s)) oracle.add(s, a * b);
      }
    double diff = 0.0;
    for (const auto& [x, c] : fg.entries())
      diff = std::max(diff, std::abs(c - oracle.at(x)));
    for (const auto& [x, c] : oracle.entries())
      diff = std::max(diff, std::abs(c - fg.at(x)));
    ++res.trials;
    if (diff > 1e-12) ++res.violations;

    // conjugation involution
    const FourierField ff = conjugate_field(conjugate_field(f));
    double invo = 0.0;
    for (const auto& [x, c] : f.entries())
      invo = std::max(invo, std::abs(c - ff.at(x)));
    ++res.trials;
    if (invo > 0.0) ++res.violations;

    // |q|^2 of a real field: real coefficients, conjugate-even
    const FourierField q = random_field(rng, 1, 1, 3, 5, 0.3, true);
    const FourierField u = multiply(q, conjugate_field(q), out);
    double sym = u.max_imag();
    for (const auto& [x, c] : u.entries())
      sym = std::max(sym, std::abs(c - u.at(-x)));
    ++res.trials;
    if (sym > 1e-12 * std::max(1.0, u.max_abs())) ++res.violations;
  }
  return res;
}

SuiteResult verify_resolvent(uint64_t seed) {
  SuiteResult res;
  res.name = "resolvent";
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto rng = trial_rng(seed, t);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(1.0, 2.0);
    const int n = 20;
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = unit(rng);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) row += std::abs(T(i, j));
      T(i, i) = (T(i, i) >= 0 ? 1.0 : -1.0) * (row + bump(rng));
    }
    std::vector<int> L1, L2;
    for (int i = 0; i < n; ++i) (unit(rng) < 0.0 ? L1 : L2).push_back(i);
    if (L1.empty() || L2.empty()) {
      L1.clear();
      L2.clear();
      for (int i = 0; i < n; ++i) (i < n / 2 ? L1 : L2).push_back(i);
    }
    const double defect = resolvent_residual(T, L1, L2);
    auto restricted_inv_norm = [&](const std::vector<int>& idx) {
      Eigen::MatrixXd R(idx.size(), idx.size());
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) R(i, j) = T(idx[i], idx[j]);
      return operator_norm(R.inverse());
    };
    const double scale = (restricted_inv_norm(L1) + restricted_inv_norm(L2)) *
                         operator_norm(T) * operator_norm(T.inverse());
    ++res.trials;
    if (defect > 1e-9 * scale) ++res.violations;
    worst = std::max(worst, scale > 0 ? defect / scale : 0.0);
  }
  res.notes.push_back("worst scaled defect = " + fmt(worst));
  return res;
}

SuiteResult verify_perturbation(uint64_t seed) {
  SuiteResult res;
  res.name = "perturbation";
  const double alpha = 2.0, L = 0.5;
  const auto lattice = enumerate_box(4, 1, 1);
  std::vector<MultiIndex> sites(lattice.begin(), lattice.end());
  const int n = static_cast<int>(sites.size());
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dist[i][j] = alpha_index_weight(sites[i] - sites[j], alpha);

  long long satisfied = 0;
  int attempts = 0;
  while (satisfied < 1000 && attempts < 2000) {
    auto rng = trial_rng(seed, attempts++);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(1.0, 2.0);
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        T(i, j) = i == j ? (unit(rng) >= 0 ? 1 : -1) * mag(rng)
                         : 0.05 * unit(rng) *
                               std::exp(-alpha * L * dist[i][j]);
    const double B = operator_norm(T.inverse()) * 1.05;
    const double D_radius = 1.0;
    const double eta = 1e-7;
    Eigen::MatrixXd Tp = T;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        Tp(i, j) += eta * unit(rng) * std::exp(-alpha * L * dist[i][j]);
    const PerturbationReport rep =
        perturbation_check(sites, T, Tp, B, D_radius, L, eta, alpha);
    if (!rep.hypotheses_met) continue;
    ++satisfied;
    ++res.trials;
    if (!(rep.conclusion_norm && rep.conclusion_decay)) ++res.violations;
  }
  res.notes.push_back("hypothesis-satisfying instances = " +
                      std::to_string(satisfied));
  if (satisfied < 1000) ++res.violations;
  return res;
}

SuiteResult verify_neumann(uint64_t seed) {
  SuiteResult res;
  res.name = "neumann";
  for (int t = 0; t < 1000; ++t) {
    auto rng = trial_rng(seed, t);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> target(0.05, 0.49);
    const int n = 30;
    Eigen::VectorXd D(n);
    for (int i = 0; i < n; ++i) D[i] = (unit(rng) >= 0 ? 1 : -1) * mag(rng);
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) S(i, j) = unit(rng);
    Eigen::MatrixXd Dinv = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) Dinv(i, i) = 1.0 / D[i];
    const double coupling = operator_norm(S * Dinv);
    const double eps = target(rng) / coupling;
    const NeumannReport rep = neumann_bound(D, S, eps);
    ++res.trials;
    if (!rep.precondition_met || !rep.holds) ++res.violations;
  }
  return res;
}

SuiteResult verify_markov(uint64_t seed) {
  SuiteResult res;
  res.name = "markov";
  for (int t = 0; t < 900; ++t) {
    auto rng = trial_rng(seed, t);
    std::uniform_int_distribution<int> deg(1, 10);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> a0(-2.0, 2.0);
    std::uniform_real_distribution<double> len(0.5, 3.0);
    const int k = deg(rng);
    ParamPolynomial p(1, 12);
    for (int j = 0; j <= k; ++j) p.set_term({j}, gauss(rng));
    const double lo = a0(rng);
    const MarkovReport rep = markov_bound(p, {lo}, {lo + len(rng)}, 513);
    ++res.trials;
    if (!rep.holds) ++res.violations;
  }
  for (int t = 0; t < 100; ++t) {
    auto rng = trial_rng(seed, 100000 + t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> a0(-1.0, 1.0);
    std::uniform_real_distribution<double> len(0.5, 2.0);
    ParamPolynomial p(2, 8);
    std::uniform_int_distribution<int> deg(0, 4);
    for (int terms = 0; terms < 8; ++terms) {
      const int e1 = deg(rng), e2 = deg(rng);
      p.set_term({e1, e2}, gauss(rng));
    }
    const double lo1 = a0(rng), lo2 = a0(rng);
    const MarkovReport rep =
        markov_bound(p, {lo1, lo2}, {lo1 + len(rng), lo2 + len(rng)}, 129);
    ++res.trials;
    if (!rep.holds) ++res.violations;
  }
  return res;
}

SuiteResult verify_taylor(uint64_t seed) {
  SuiteResult res;
  res.name = "taylor";
  for (int t = 0; t < 100; ++t) {
    auto rng = trial_rng(seed, t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> deg(0, 4);
    std::uniform_int_distribution<int> porder(0, 4);
    ParamField phi;
    phi.d = 1;
    phi.b = 1;
    for (int m = 0; m < 3; ++m) {
      const MultiIndex x = random_site(rng, 1, 1, 2);
      ParamPolynomial poly(1, 6);
      const int k = deg(rng);
      for (int j = 0; j <= k; ++j) poly.set_term({j}, 0.5 * gauss(rng));
      phi.coeffs.insert_or_assign(x, poly);
    }
    const int p = porder(rng);
    const TaylorReport rep = taylor_remainder(
        phi, {0.0}, p, Box{4}, 2.0, 1.0, 0.5, {-0.4}, {0.4}, 9);
    ++res.trials;
    if (!rep.verified) ++res.violations;
  }
  return res;
}

SuiteResult verify_partition(uint64_t seed) {
  SuiteResult res;
  res.name = "partition";
  (void)seed;
  struct Case {
    int B, radius, d;
  };
  for (const Case c : {Case{0, 20, 1}, Case{2, 10, 1}, Case{3, 12, 1},
                       Case{2, 6, 2}, Case{4, 7, 2}}) {
    const ArithmeticPartition part = arithmetic_partition(c.B, c.radius, c.d);
    ++res.trials;
    if (!part.separation_verified) ++res.violations;
    res.notes.push_back("B=" + std::to_string(c.B) + " d=" +
                        std::to_string(c.d) + " max_diam=" +
                        std::to_string(part.max_diameter) + " C0=" +
                        fmt(part.fitted_C0));
  }
  return res;
}

SuiteResult verify_coupling(uint64_t seed) {
  SuiteResult res;
  res.name = "coupling";
  int passes = 0;
  double rate_sum = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    CouplingSpec spec;
    spec.seed = splitmix64(seed ^ static_cast<uint64_t>(t));
    spec.loss_fraction = 0.2;
    const CouplingReport rep = coupling_experiment(spec);
    if (rep.pass) ++passes;
    rate_sum += rep.fitted_rate;
  }
  res.trials = trials;
  res.notes.push_back("pass fraction = " + fmt(passes / double(trials)));
  res.notes.push_back("mean fitted rate = " + fmt(rate_sum / trials) +
                      " planted = 0.5");
  if (passes < 190) ++res.violations;  // >= 95% of 200 trials
  return res;
}

SuiteResult verify_smalldiv_measure(uint64_t seed, long long samples) {
  SuiteResult res;
  res.name = "smalldiv-measure";
  const ResonantSet R(1, 1, {{1}});
  const std::vector<double> gammas{0.005, 0.01, 0.02, 0.04, 0.08};
  std::vector<double> logg, logf, fractions;
  for (double g : gammas) {
    DiophantineSpec spec{g, 3.0, 8};
    const double frac = excluded_measure_mc(spec, R, samples, seed);
    fractions.push_back(frac);
    res.notes.push_back("gamma=" + fmt(g) + " fraction=" + fmt(frac));
    if (frac > 0.0) {
      logg.push_back(std::log(g));
      logf.push_back(std::log(frac));
    }
  }
  ++res.trials;
  if (logg.size() < gammas.size()) {
    ++res.violations;  // zero fraction at some gamma: slope undefined
  } else {
    const LinearFit fit = linear_fit(logg, logf);
    res.notes.push_back("log-log slope = " + fmt(fit.slope));
    if (!(fit.slope >= 0.8 && fit.slope <= 1.2)) ++res.violations;
  }
  // monotone in gamma (same seed, nested exclusion sets)
  for (size_t i = 1; i < fractions.size(); ++i) {
    ++res.trials;
    if (fractions[i] + 1e-15 < fractions[i - 1]) ++res.violations;
  }
  // monotone in horizon N
  DiophantineSpec small{0.02, 3.0, 4}, large{0.02, 3.0, 12};
  const double f_small = excluded_measure_mc(small, R, samples / 10, seed + 7);
  const double f_large = excluded_measure_mc(large, R, samples / 10, seed + 7);
  ++res.trials;
  if (f_large + 1e-15 < f_small) ++res.violations;
  return res;
}

SuiteResult verify_remove_intervals(uint64_t seed) {
  SuiteResult res;
  res.name = "remove-intervals";
  const int M = 2, N = 8, C = 6;
  const double tau = 3.0, gamma = 0.05;
  const RemoveIntervalsResult rm =
      remove_intervals({0.0}, {1.0}, M, N, gamma, tau, C, 16, seed);
  res.notes.push_back("removed measure = " + fmt(rm.removed_measure));
  res.notes.push_back("bound constant K = " + fmt(rm.bound_constant));

  // Fine-grid re-scan of every kept cell against the gamma-condition.
  std::vector<std::vector<int>> ks;
  for (int k = -(N - 1); k <= N - 1; ++k)
    if (std::abs(k) > M) ks.push_back({k});
  long long checked = 0, bad = 0;
  for (const auto& [lo, hi] : rm.kept.cells) {
    for (int g = 0; g < 64; ++g) {
      const double lam = lo[0] + (hi[0] - lo[0]) * (g + 0.5) / 64.0;
      ++checked;
      for (const auto& k : ks) {
        const double v = std::abs(k[0] * lam);
        if (!(v > gamma * std::pow(1.0 + std::abs(k[0]), -tau))) {
          ++bad;
          break;
        }
      }
    }
  }
  res.trials += checked;
  res.violations += bad;
  res.notes.push_back("kept cells = " + std::to_string(rm.kept.cells.size()));

  // gamma -> 0: nothing removed
  const RemoveIntervalsResult rm0 =
      remove_intervals({0.0}, {1.0}, M, N, 0.0, tau, 3, 4, seed);
  ++res.trials;
  if (rm0.cells_removed != 0) ++res.violations;
  return res;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{
      "gevrey-norms", "field-algebra", "resolvent",        "perturbation",
      "neumann",      "markov",        "taylor",           "partition",
      "coupling",     "smalldiv-measure", "remove-intervals"};
  return names;
}

SuiteResult run_verify_suite(const std::string& name, uint64_t seed) {
  if (name == "gevrey-norms") return verify_gevrey_norms(seed);
  if (name == "field-algebra") return verify_field_algebra(seed);
  if (name == "resolvent") return verify_resolvent(seed);
  if (name == "perturbation") return verify_perturbation(seed);
  if (name == "neumann") return verify_neumann(seed);
  if (name == "markov") return verify_markov(seed);
  if (name == "taylor") return verify_taylor(seed);
  if (name == "partition") return verify_partition(seed);
  if (name == "coupling") return verify_coupling(seed);
  if (name == "smalldiv-measure") return verify_smalldiv_measure(seed);
  if (name == "remove-intervals") return verify_remove_intervals(seed);
  throw std::out_of_range("unknown verify suite: " + name);
}

}  // namespace cwb

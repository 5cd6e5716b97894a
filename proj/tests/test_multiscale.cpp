#include <doctest.h>

#include <random>

#include "cwb/errors.hpp"
#include "cwb/linop.hpp"
#include "cwb/multiscale.hpp"

using namespace cwb;

namespace {

MultiIndex mi(int n, int k) {
  MultiIndex x;
  x.n = {n};
  x.k = {k};
  return x;
}

}  // namespace

TEST_SUITE("multiscale") {

TEST_CASE("resolvent identity: block diagonal is exact") {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(6, 6);
  T.block(0, 0, 3, 3) << 2, 1, 0, 1, 3, 0.5, 0, 0.5, 2.5;
  T.block(3, 3, 3, 3) << 4, 0.2, 0, 0.2, 3, 0, 0, 0, 5;
  CHECK(resolvent_residual(T, {0, 1, 2}, {3, 4, 5}) == 0.0);
}

TEST_CASE("resolvent identity: empty second region degenerates") {
  Eigen::MatrixXd T(3, 3);
  T << 3, 1, 0, 1, 4, 1, 0, 1, 5;
  CHECK(resolvent_residual(T, {0, 1, 2}, {}) == 0.0);
}

TEST_CASE("resolvent identity defect small on random instances") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int n = 20;
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = unit(rng);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) row += std::abs(T(i, j));
      T(i, i) = (T(i, i) >= 0 ? 1 : -1) * (row + 1.5);
    }
    std::vector<int> L1, L2;
    for (int i = 0; i < n; ++i) (i % 2 ? L1 : L2).push_back(i);
    const double defect = resolvent_residual(T, L1, L2);
    CHECK(defect < 1e-10 * operator_norm(T.inverse()) * operator_norm(T));
  }
}

TEST_CASE("resolvent identity rejects bad partitions and singular blocks") {
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS(resolvent_residual(T, {0, 1}, {1, 2, 3}));  // overlap
  CHECK_THROWS(resolvent_residual(T, {0, 1}, {2}));        // not covering
  // full matrix invertible, Lambda1 = {0} restriction singular
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(4, 4);
  S(0, 0) = 0.0;
  S(0, 1) = 1.0;
  S(1, 0) = 1.0;
  S(1, 1) = 0.0;
  CHECK_THROWS_WITH_AS(resolvent_residual(S, {0}, {1, 2, 3}),
                       "singular restriction: Lambda1", std::runtime_error);
}

TEST_CASE("perturbation_check: identical matrices and planted perturbation") {
  const auto lattice = enumerate_box(3, 1, 1);
  const std::vector<MultiIndex> sites(lattice.begin(), lattice.end());
  const int n = static_cast<int>(sites.size());
  const double alpha = 2.0, L = 0.5;

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) T(i, i) = (i % 2 ? 1.5 : -1.2);
  const double B = 1.0;  // ||T^-1|| = 1/1.2 < 1

  const PerturbationReport same =
      perturbation_check(sites, T, T, B, 1.0, L, 1e-9, alpha);
  CHECK(same.hypotheses_met);
  CHECK(same.conclusion_norm);
  CHECK(same.conclusion_decay);
  CHECK(same.margin_norm == doctest::Approx(2.0 * B - same.inv_norm));

  // planted decaying perturbation within the eta envelope
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double eta = 1e-6;
  Eigen::MatrixXd Tp = T;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      Tp(i, j) += 0.99 * eta * unit(rng) *
                  std::exp(-alpha * L *
                           alpha_index_weight(sites[i] - sites[j], alpha));
  const PerturbationReport planted =
      perturbation_check(sites, T, Tp, B, 1.0, L, eta, alpha);
  CHECK(planted.hypotheses_met);
  CHECK(planted.conclusion_norm);
  CHECK(planted.conclusion_decay);

  // grossly violated smallness: gate reports unmet, makes no claim
  const PerturbationReport gated =
      perturbation_check(sites, T, Tp, B, 1.0, L, 1e6 * eta, alpha);
  CHECK(!gated.hypotheses_met);
  CHECK(gated.unmet == "eta N^C5 B^2 e^D not small");
}

TEST_CASE("neumann_bound cases") {
  Eigen::VectorXd D(4);
  D << 1.0, -2.0, 0.5, 1.5;
  Eigen::MatrixXd S(4, 4);
  S << 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0;

  // eps = 0: ||T^-1|| = ||D^-1|| < 2 ||D^-1||
  const NeumannReport r0 = neumann_bound(D, S, 0.0);
  CHECK(r0.precondition_met);
  CHECK(r0.holds);
  CHECK(r0.lhs == doctest::Approx(2.0).epsilon(1e-10));  // 1/min|D|

  // scale the coupling to 0.4: bound must hold
  Eigen::MatrixXd Dinv = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) Dinv(i, i) = 1.0 / D[i];
  const double eps = 0.4 / operator_norm(S * Dinv);
  const NeumannReport r1 = neumann_bound(D, S, eps);
  CHECK(r1.precondition_met);
  CHECK(r1.coupling == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(r1.holds);

  // coupling >= 1: precondition fails, no claim made
  const NeumannReport r2 = neumann_bound(D, S, 3.0 / operator_norm(S * Dinv));
  CHECK(!r2.precondition_met);
}

TEST_CASE("param polynomial arithmetic") {
  ParamPolynomial p(2, 6);
  p.set_term({2, 0}, 1.0);
  p.set_term({0, 1}, -3.0);
  CHECK(p.eval({2.0, 1.0}) == doctest::Approx(4.0 - 3.0));
  CHECK(p.total_degree() == 2);
  const ParamPolynomial dp = p.partial(0);
  CHECK(dp.eval({2.0, 7.0}) == doctest::Approx(4.0));
  const ParamPolynomial shifted = p.shifted({1.0, 0.0});
  CHECK(shifted.eval({1.0, 1.0}) == doctest::Approx(p.eval({2.0, 1.0})));
  CHECK_THROWS(p.set_term({7, 0}, 1.0));  // degree cap
}

TEST_CASE("taylor_remainder frozen cases") {
  // phi = lambda^2 at mode 0; p = 2: remainder identically zero
  ParamField phi2;
  phi2.d = 1;
  phi2.b = 1;
  ParamPolynomial sq(1, 4);
  sq.set_term({2}, 1.0);
  phi2.coeffs.emplace(mi(0, 0), sq);
  const TaylorReport rep2 =
      taylor_remainder(phi2, {0.0}, 2, Box{2}, 2.0, 1.0, 0.5, {-0.5}, {0.5}, 9);
  CHECK(rep2.verified);
  CHECK(rep2.max_measured == 0.0);

  // phi = lambda^3, p = 2: measured remainder h^3 below the bound
  ParamField phi3;
  phi3.d = 1;
  phi3.b = 1;
  ParamPolynomial cube(1, 4);
  cube.set_term({3}, 1.0);
  phi3.coeffs.emplace(mi(0, 0), cube);
  const double h = 0.3;
  const TaylorReport rep3 =
      taylor_remainder(phi3, {0.0}, 2, Box{2}, 2.0, 1.0, 0.5, {-h}, {h}, 9);
  CHECK(rep3.verified);
  CHECK(rep3.max_measured == doctest::Approx(h * h * h).epsilon(1e-12));
  CHECK(rep3.max_measured <= rep3.max_bound);

  // p at or above the degree: zero remainder
  const TaylorReport rep4 =
      taylor_remainder(phi3, {0.0}, 3, Box{2}, 2.0, 1.0, 0.5, {-h}, {h}, 9);
  CHECK(rep4.max_measured == 0.0);
}

TEST_CASE("markov_bound frozen cases") {
  // p(x) = x on [-1,1]: bound 4*1/2 = 2 >= measured 1
  ParamPolynomial lin(1, 4);
  lin.set_term({1}, 1.0);
  const MarkovReport r1 = markov_bound(lin, {-1.0}, {1.0});
  CHECK(r1.bound == doctest::Approx(2.0));
  CHECK(r1.measured == doctest::Approx(1.0));
  CHECK(r1.holds);

  // constant: both sides zero
  ParamPolynomial c(1, 4);
  c.set_term({0}, 5.0);
  const MarkovReport rc = markov_bound(c, {-1.0}, {1.0});
  CHECK(rc.bound == 0.0);
  CHECK(rc.measured == 0.0);
  CHECK(rc.holds);

  // Chebyshev T2 = 2x^2 - 1 on [-1,1]: bound 8, measured 4 at the endpoints
  ParamPolynomial t2(1, 4);
  t2.set_term({2}, 2.0);
  t2.set_term({0}, -1.0);
  const MarkovReport r2 = markov_bound(t2, {-1.0}, {1.0});
  CHECK(r2.bound == doctest::Approx(8.0));
  CHECK(r2.measured == doctest::Approx(4.0));
  CHECK(r2.holds);
}

TEST_CASE("arithmetic_partition frozen 1-d case") {
  // d=1, B=2, box [-3,3]: component {-1,0,1}, singletons elsewhere
  const ArithmeticPartition part = arithmetic_partition(2, 3, 1);
  CHECK(part.clusters.size() == 5);
  bool found_triple = false;
  for (const auto& cl : part.clusters)
    if (cl.size() == 3) {
      found_triple = true;
      int sum = 0;
      for (const auto& v : cl) sum += std::abs(v[0]);
      CHECK(sum == 2);  // {-1, 0, 1}
    }
  CHECK(found_triple);
  CHECK(part.separation_verified);
  CHECK(part.min_cross_link > 2);

  // B = 0: all singletons
  const ArithmeticPartition p0 = arithmetic_partition(0, 3, 1);
  CHECK(p0.clusters.size() == 7);
  CHECK(p0.max_diameter == 0);
}

TEST_CASE("arithmetic_partition separation in 2-d") {
  const ArithmeticPartition part = arithmetic_partition(3, 5, 2);
  CHECK(part.separation_verified);
}

TEST_CASE("coupling_experiment smoke and constraint gate") {
  CouplingSpec spec;
  spec.seed = 12345;
  const CouplingReport rep = coupling_experiment(spec);
  CHECK(rep.planted_rate == spec.L);
  CHECK(rep.pairs_fitted > 0);
  CHECK(rep.fitted_rate > 0.0);

  // diagonally dominant, no singular cluster: rate stays within 10%
  CouplingSpec clean = spec;
  clean.with_singular_cluster = false;
  const CouplingReport crep = coupling_experiment(clean);
  CHECK(crep.fitted_rate >= 0.9 * clean.L);

  CouplingSpec bad = spec;
  bad.theta3 = 0.5;  // breaks theta ordering
  CHECK_THROWS_AS(coupling_experiment(bad), ConfigError);
}

}  // TEST_SUITE

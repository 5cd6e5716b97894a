#include <doctest.h>

#include <cmath>
#include <random>

#include "cwb/gevrey.hpp"
#include "cwb/util.hpp"

using namespace cwb;

namespace {

MultiIndex mi(int n, int k) {
  MultiIndex x;
  x.n = {n};
  x.k = {k};
  return x;
}

}  // namespace

TEST_SUITE("gevrey") {

TEST_CASE("f_norm single mode and zero") {
  const GevreyWeight w{2.0, 1.0};
  FourierField f(1, 1, Box{3});
  f.set(mi(2, 1), {0.0, -0.5});
  const double expected =
      0.5 * std::exp(2.0 * 1.0 * (std::sqrt(2.0) + 1.0));
  CHECK(f_norm(f, w) == doctest::Approx(expected).epsilon(1e-14));

  CHECK(f_norm(FourierField(1, 1, Box{3}), w) == 0.0);
}

TEST_CASE("f_norm two-mode frozen value") {
  // fhat((1),(0)) = 1 and fhat((0),(1)) = 1 at alpha=2, L=1: both weights e^2
  const GevreyWeight w{2.0, 1.0};
  FourierField f(1, 1, Box{2});
  f.set(mi(1, 0), {1.0, 0.0});
  f.set(mi(0, 1), {1.0, 0.0});
  CHECK(f_norm(f, w) ==
        doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-14));
}

TEST_CASE("weight_factor") {
  const GevreyWeight w0{2.0, 0.5};
  MultiIndex zero;
  zero.n = {0};
  zero.k = {};
  CHECK(weight_factor(zero, w0) == 1.0);

  MultiIndex one;
  one.n = {1};
  one.k = {};
  CHECK(weight_factor(one, {2.0, 0.5}) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  // doubling L squares the factor
  CHECK(weight_factor(one, {2.0, 1.0}) ==
        doctest::Approx(std::exp(1.0) * std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("decay_constant_h frozen values") {
  CHECK(decay_constant_h(0.5, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(decay_constant_h(0.25, 2.0) == doctest::Approx(16.0 / 7.0).epsilon(1e-15));
  CHECK(decay_constant_h(1.0 - 1e-9, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
  // monotone decreasing in eps
  CHECK(decay_constant_h(0.2, 2.0) > decay_constant_h(0.3, 2.0));
}

TEST_CASE("c0 norm bracket: constants and single modes") {
  const GevreyWeight w{2.0, 1.0};
  FourierField c(1, 1, Box{2});
  c.set(mi(0, 0), {-3.0, 0.0});
  const NormBracket br = gevrey_c0_norm_bracket(c, w, 20, 16);
  CHECK(br.lower == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(br.upper == doctest::Approx(3.0).epsilon(1e-12));

  // single exponential mode: upper bounded by the weight factor
  FourierField e(1, 1, Box{4});
  e.set(mi(2, 3), {1.0, 0.0});
  const NormBracket be = gevrey_c0_norm_bracket(e, w, 60, 16);
  CHECK(be.upper <= weight_factor(mi(2, 3), w) * (1.0 + 1e-12));
  CHECK(be.lower <= be.upper);
  CHECK(be.lower > 0.0);
}

TEST_CASE("c0 norm bracket brackets the F-norm from below") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> comp(-3, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const GevreyWeight w{2.0, 1.0};
  for (int t = 0; t < 25; ++t) {
    FourierField f(1, 1, Box{4});
    for (int m = 0; m < 3; ++m)
      f.add(mi(comp(rng), comp(rng)), {gauss(rng), gauss(rng)});
    if (f.empty()) continue;
    const NormBracket br = gevrey_c0_norm_bracket(f, w, 40, 32);
    CHECK(br.lower <= f_norm(f, w) * (1.0 + 1e-12));
    CHECK(br.lower <= br.upper * (1.0 + 1e-12));
  }
}

TEST_CASE("c0 norm bracket rejects uncertifiable tails") {
  FourierField f(1, 1, Box{2000});
  MultiIndex big;
  big.n = {1500};
  big.k = {0};
  f.set(big, {1.0, 0.0});
  // t = L * 1500^(1/2) ~ 38.7 with order_cap 20 < t: geometric tail fails
  CHECK_THROWS(gevrey_c0_norm_bracket(f, {2.0, 1.0}, 20, 4));
}

TEST_CASE("fit_exponential_decay recovers planted decay") {
  const double alpha = 2.0;
  const double B0 = 3.0, L0 = 0.7;
  std::vector<DecayEntry> entries;
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      if (a == 0 && b == 0) continue;
      DecayEntry e;
      e.x = mi(a, b);
      e.xp = mi(0, 0);
      const double w = alpha_index_weight(e.x, alpha);
      e.magnitude = B0 * std::exp(-alpha * L0 * w);
      entries.push_back(e);
    }
  const DecayFit fit = fit_exponential_decay(entries, alpha);
  CHECK(fit.L_fit == doctest::Approx(L0).epsilon(1e-10));
  CHECK(fit.B == doctest::Approx(B0).epsilon(1e-10));
  CHECK(fit.max_residual < 1e-10);
}

TEST_CASE("fit_exponential_decay sentinels") {
  std::vector<DecayEntry> zeros{{mi(1, 0), mi(0, 0), 0.0}};
  const DecayFit z = fit_exponential_decay(zeros, 2.0);
  CHECK(z.B == 0.0);
  CHECK(std::isinf(z.L_fit));

  std::vector<DecayEntry> single{{mi(2, 1), mi(0, 0), 0.25}};
  const DecayFit s = fit_exponential_decay(single, 2.0);
  CHECK(s.L_fit == 0.0);
  CHECK(s.B == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("fit bound holds pointwise on random data") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha = 2.0;
  std::vector<DecayEntry> entries;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      if (!a && !b) continue;
      entries.push_back({mi(a, b), mi(0, 0), unit(rng)});
    }
  const DecayFit fit = fit_exponential_decay(entries, alpha);
  for (const auto& e : entries) {
    const double w = alpha_index_weight(e.x - e.xp, alpha);
    CHECK(e.magnitude <=
          fit.B * std::exp(-alpha * fit.L_fit * w) * (1.0 + 1e-12));
  }
}

TEST_CASE("c_delta_sum matches direct summation") {
  const double alpha = 2.0, delta = 0.2;
  double direct = 0.0;
  for (int m = -4000; m <= 4000; ++m)
    direct += std::exp(-alpha * delta *
                       std::pow(std::abs(static_cast<double>(m)), 1.0 / alpha));
  const double series = c_delta_sum(alpha, delta, 1);
  CHECK(series == doctest::Approx(direct).epsilon(1e-6));
  CHECK(c_delta_sum(alpha, delta, 2) ==
        doctest::Approx(series * series).epsilon(1e-12));
}

}  // TEST_SUITE

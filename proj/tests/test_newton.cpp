#include <doctest.h>

#include <cmath>

#include "cwb/errors.hpp"
#include "cwb/newton.hpp"

using namespace cwb;

namespace {

MultiIndex mi(int n, int k) {
  MultiIndex x;
  x.n = {n};
  x.k = {k};
  return x;
}

NewtonSettings headline(double eps) {
  NewtonSettings s;
  s.d = 1;
  s.b = 1;
  s.resonant_modes = {{1}};
  s.amplitudes = {0.1};
  s.lambda = {0.61803398874989484};
  s.epsilon = eps;
  s.alpha = 2.0;
  s.L0 = 1.0;
  s.f = PowerSeries{{0.0, 0.0, 0.5}};
  s.schedule.N0 = 4;
  s.schedule.growth = 2.0;
  s.schedule.box_cap = 16;
  s.schedule.max_steps = 6;
  s.schedule.residual_tol = 1e-12;
  return s;
}

NewtonSettings two_mode(double eps) {
  NewtonSettings s;
  s.d = 1;
  s.b = 2;
  s.resonant_modes = {{1}, {2}};
  s.amplitudes = {0.08, 0.06};
  s.lambda = {0.61803398874989484, 0.41421356237309515};
  s.epsilon = eps;
  s.alpha = 2.0;
  s.L0 = 1.0;
  s.f = PowerSeries{{0.0, 0.0, 0.5}};
  s.schedule.N0 = 3;
  s.schedule.growth = 2.0;
  s.schedule.box_cap = 4;
  s.schedule.max_steps = 8;
  s.schedule.residual_tol = 1e-9;
  return s;
}

}  // namespace

TEST_SUITE("newton") {

TEST_CASE("schedule radii and widths") {
  Schedule sch;
  sch.N0 = 4;
  sch.growth = 2.0;
  sch.box_cap = 16;
  CHECK(sch.radius_at(0) == 4);
  CHECK(sch.radius_at(1) == 8);
  CHECK(sch.radius_at(2) == 16);
  CHECK(sch.radius_at(5) == 16);  // capped

  CHECK(sch.width_at(0, 1.0) == 1.0);
  for (int r = 1; r < 40; ++r) {
    CHECK(sch.width_at(r, 1.0) < sch.width_at(r - 1, 1.0));
    CHECK(sch.width_at(r, 1.0) > 0.5);  // limit is L0/2
  }
}

TEST_CASE("residual examples") {
  const ResonantSet R(1, 1, {{1}});
  const PowerSeries cubic{{0.0, 0.0, 0.5}};

  // eps = 0, q = q0, lambda' = lambda: exactly zero
  FourierField q0(1, 1, Box{4}, true);
  q0.set(mi(1, 1), 0.1);
  const FourierField F0 =
      residual(q0, {0.35}, {0.35}, 0.0, cubic, R, Box{7});
  CHECK(F0.empty());

  // q = 0
  CHECK(residual(FourierField(1, 1, Box{4}, true), {0.35}, {0.4}, 1e-3, cubic,
                 R, Box{7})
            .empty());

  // cubic, q = q0, lambda' = lambda: Q-defect -eps a^3 at the resonant site
  const double eps = 1e-3;
  const FourierField F =
      residual(q0, {0.35}, {0.35}, eps, cubic, R, Box{7});
  const FourierField FQ = project_field(F, Region::Q, R);
  const FourierField FP = project_field(F, Region::P, R);
  CHECK(FP.empty());
  CHECK(FQ.entries().size() == 1);
  CHECK(FQ.at(mi(1, 1)).real() == doctest::Approx(-eps * 1e-3).epsilon(1e-12));
}

TEST_CASE("q_equation_update") {
  const ResonantSet R(1, 1, {{1}});
  FourierField q0(1, 1, Box{4}, true);
  q0.set(mi(1, 1), 0.1);

  // f(s) = s: dH = q, update lambda + eps
  const auto lp1 = q_equation_update(q0, {0.3}, 1e-2, PowerSeries{{0.0, 1.0}},
                                     {0.1}, R, Box{7});
  CHECK(lp1[0] == doctest::Approx(0.3 + 1e-2).epsilon(1e-15));

  // cubic: lambda + eps a^2
  const auto lp2 = q_equation_update(q0, {0.3}, 1e-2,
                                     PowerSeries{{0.0, 0.0, 0.5}}, {0.1}, R,
                                     Box{7});
  CHECK(lp2[0] == doctest::Approx(0.3 + 1e-2 * 0.01).epsilon(1e-15));

  // eps = 0
  const auto lp0 = q_equation_update(q0, {0.3}, 0.0,
                                     PowerSeries{{0.0, 0.0, 0.5}}, {0.1}, R,
                                     Box{7});
  CHECK(lp0[0] == 0.3);
}

TEST_CASE("eps = 0 converges immediately") {
  NewtonSettings s = headline(0.0);
  const RunOutcome out = run(s);
  CHECK(out.verdict == Verdict::converged);
  CHECK(out.state.r == 0);
  CHECK(out.state.lambda_prime == out.state.lambda);
  CHECK(out.claims.amplitudes_exact);
  CHECK(out.claims.freq_drift == 0.0);
}

TEST_CASE("newton_step on a converged state is a no-op") {
  NewtonSettings s = headline(0.0);
  const NewtonState st = initial_state(s);
  NewtonTrace trace;
  const NewtonState next = newton_step(st, s, trace);
  CHECK(next.r == 1);
  CHECK(next.q.entries() == st.q.entries());
  CHECK(next.lambda_prime == st.lambda_prime);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].dq_F == 0.0);
}

TEST_CASE("headline single-mode run: plane wave is exact") {
  NewtonSettings s = headline(1e-3);
  const RunOutcome out = run(s);
  CHECK(out.verdict == Verdict::converged);
  CHECK(out.state.r <= 6);
  REQUIRE(!out.trace.steps.empty());
  CHECK(out.trace.steps.back().residual_F < 1e-12);
  // frequency drift is exactly eps * a^2 for the cubic plane wave
  CHECK(out.claims.K == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(out.claims.decay_sum == 0.0);
  CHECK(out.claims.amplitudes_exact);
}

TEST_CASE("two-mode run iterates and satisfies the invariants") {
  NewtonSettings s = two_mode(1e-3);
  const RunOutcome out = run(s);
  REQUIRE(out.verdict == Verdict::converged);
  CHECK(out.state.r >= 1);

  const ResonantSet R(1, 2, s.resonant_modes);
  // support invariant: resonant amplitudes pinned exactly, support in the box
  CHECK(out.claims.amplitudes_exact);
  for (const auto& [x, c] : out.state.q.entries()) {
    if (R.contains(x)) continue;
    CHECK(x.sup_norm() < s.schedule.box_cap);
  }
  // reality and conjugate-pairing diagnostics from the trace
  for (const auto& rec : out.trace.steps) {
    CHECK(rec.max_imag_q <= 1e-12);
    CHECK(rec.lambda_imag <= 1e-12);
    CHECK(rec.conj_defect <= 1e-10);
  }
  // frequency drift O(eps)
  CHECK(out.claims.freq_drift <= 10.0 * s.epsilon);
  CHECK(out.claims.decay_sum <= 10.0 * s.epsilon);

  // contraction past the first step: log r_{next} <= 1.4 log r + log C
  for (size_t i = 2; i + 1 < out.trace.steps.size(); ++i) {
    const double a = out.trace.steps[i].residual_F;
    const double b = out.trace.steps[i + 1].residual_F;
    if (a > 0.0 && b > 0.0)
      CHECK(std::log(b) <= 1.4 * std::log(a) + std::log(10.0));
  }
}

TEST_CASE("K and K' stable across eps for the two-mode family") {
  const RunOutcome o3 = run(two_mode(1e-3));
  const RunOutcome o4 = run(two_mode(1e-4));
  REQUIRE(o3.verdict == Verdict::converged);
  REQUIRE(o4.verdict == Verdict::converged);
  CHECK(std::abs(o3.claims.K - o4.claims.K) <=
        0.2 * std::max(o3.claims.K, o4.claims.K));
  CHECK(std::abs(o3.claims.K_prime - o4.claims.K_prime) <=
        0.2 * std::max(o3.claims.K_prime, o4.claims.K_prime));
}

TEST_CASE("B_max gate rejects the run") {
  NewtonSettings s = two_mode(1e-3);
  s.schedule.B_max = 10.0;  // any truncated solve exceeds this
  const RunOutcome out = run(s);
  CHECK(out.verdict == Verdict::rejected);
  CHECK(!out.rejection_reason.empty());
}

TEST_CASE("max_steps verdict when the tolerance is unreachable") {
  NewtonSettings s = two_mode(1e-3);
  s.schedule.residual_tol = 1e-300;
  s.schedule.max_steps = 3;
  const RunOutcome out = run(s);
  CHECK(out.verdict == Verdict::max_steps);
  CHECK(out.state.r == 3);
}

}  // TEST_SUITE

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cwb/newton.hpp"
#include "cwb/smalldiv.hpp"
#include "cwb/util.hpp"
#include "cwb/verify.hpp"

using namespace cwb;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++failures;
}

NewtonSettings headline_settings(double eps) {
  NewtonSettings s;
  s.d = 1;
  s.b = 1;
  s.resonant_modes = {{1}};
  s.amplitudes = {0.1};
  s.lambda = {0.61803398874989484};  // passes the gamma = 0.01 prefilter
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

NewtonSettings two_mode_settings(double eps) {
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

bool contraction_holds(const NewtonTrace& trace, double exponent, double C) {
  for (size_t i = 1; i + 1 < trace.steps.size(); ++i) {
    const double a = trace.steps[i].residual_F;
    const double b = trace.steps[i + 1].residual_F;
    if (a <= 0.0 || b <= 0.0) continue;
    if (std::log(b) > exponent * std::log(a) + std::log(C)) return false;
  }
  return true;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void criterion_1_and_2_and_3() {
  // 1. Headline solve, prefiltered at gamma = 0.01.
  const NewtonSettings s3 = headline_settings(1e-3);
  const ResonantSet R(1, 1, s3.resonant_modes);
  const DcReport dc =
      dc_check(s3.lambda, DiophantineSpec{0.01, 3.0, 16},
               make_multiplier(R, s3.lambda), R);

  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome head = run(s3);
  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const bool converged = head.verdict == Verdict::converged &&
                         head.state.r <= 6 &&
                         !head.trace.steps.empty() &&
                         head.trace.steps.back().residual_F_half < 1e-12;
  const bool contraction = contraction_holds(head.trace, 1.4, 10.0);
  report(1,
         dc.pass && converged && wall_s < 60.0 && contraction,
         "headline solve: prefilter=" + std::string(dc.pass ? "pass" : "fail") +
             ", verdict=" + verdict_name(head.verdict) + ", steps=" +
             std::to_string(head.state.r) + ", residual=" +
             (head.trace.steps.empty()
                  ? "n/a"
                  : fmt(head.trace.steps.back().residual_F_half)) +
             ", wall=" + fmt(wall_s) + "s, contraction(1.4,C=10)=" +
             (contraction ? "ok" : "violated"));

  // 2. Persistence claims at desk scale across eps, on the headline family
  //    and on a two-mode family with genuine P-equation forcing.
  const RunOutcome head4 = run(headline_settings(1e-4));
  const RunOutcome two3 = run(two_mode_settings(1e-3));
  const RunOutcome two4 = run(two_mode_settings(1e-4));

  bool pass2 = true;
  std::string detail2;
  for (const RunOutcome* o : {&head, &head4, &two3, &two4}) {
    if (o->verdict != Verdict::converged) {
      pass2 = false;
      detail2 += " a run failed to converge;";
    } else if (!o->claims.amplitudes_exact) {
      pass2 = false;
      detail2 += " amplitudes not pinned;";
    }
  }
  auto stable = [](double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 || std::abs(a - b) <= 0.2 * m;
  };
  if (!stable(head.claims.K, head4.claims.K) ||
      !stable(two3.claims.K, two4.claims.K)) {
    pass2 = false;
    detail2 += " K not stable across eps;";
  }
  if (!stable(head.claims.K_prime, head4.claims.K_prime) ||
      !stable(two3.claims.K_prime, two4.claims.K_prime)) {
    pass2 = false;
    detail2 += " K' not stable across eps;";
  }
  report(2, pass2,
         "claims: K(head)=" + fmt(head.claims.K) + "/" + fmt(head4.claims.K) +
             ", K(two-mode)=" + fmt(two3.claims.K) + "/" + fmt(two4.claims.K) +
             ", K'(two-mode)=" + fmt(two3.claims.K_prime) + "/" +
             fmt(two4.claims.K_prime) + (detail2.empty() ? "" : ";" + detail2));

  // 3. Reality and conjugate symmetry at every step of every run.
  bool pass3 = true;
  double worst_imag = 0.0, worst_lambda = 0.0, worst_conj = 0.0;
  for (const RunOutcome* o : {&head, &head4, &two3, &two4}) {
    for (const auto& rec : o->trace.steps) {
      worst_imag = std::max(worst_imag, rec.max_imag_q);
      worst_lambda = std::max(worst_lambda, rec.lambda_imag);
      worst_conj = std::max(worst_conj, rec.conj_defect);
      if (rec.max_imag_q > 1e-12 || rec.lambda_imag > 1e-12 ||
          rec.conj_defect > 1e-10)
        pass3 = false;
    }
  }
  report(3, pass3,
         "reality/symmetry: max|Im q|=" + fmt(worst_imag) + ", |Im lambda'|=" +
             fmt(worst_lambda) + ", conj defect=" + fmt(worst_conj));
}

void suite_criterion(int criterion, const SuiteResult& result,
                     const std::string& label) {
  std::string detail = label + ": " + std::to_string(result.trials) +
                       " checks, " + std::to_string(result.violations) +
                       " violations";
  for (const auto& n : result.notes) detail += "; " + n;
  report(criterion, result.pass(), detail);
}

void criterion_8() {
  // Planted in-box resonance: resonant n1 = 2 with lambda = 0.5 makes
  // (n,k) = (1,2) an exact resonance; the run must reject with a populated
  // violation record.
  const ResonantSet R(1, 1, {{2}});
  const std::vector<double> lambda{0.5};
  const DcReport dc = dc_check(lambda, DiophantineSpec{0.01, 3.0, 8},
                               make_multiplier(R, lambda), R);
  const bool pass = !dc.pass && !dc.violations.empty();
  report(8, pass,
         "rejection path: prefilter fail with " +
             std::to_string(dc.violations.size()) + " violation(s), worst at " +
             (dc.violations.empty() ? "n/a" : dc.violations[0].site.str()));
}

}  // namespace

int main() {
  std::printf("cwb acceptance suite\n");
  criterion_1_and_2_and_3();

  // 4. Gevrey calculus property suite.
  suite_criterion(4, verify_gevrey_norms(2024), "gevrey norms");

  // 5. Small-divisor measure scaling + interval removal re-verification.
  {
    const SuiteResult mc = verify_smalldiv_measure(2024);
    const SuiteResult rm = verify_remove_intervals(2024);
    SuiteResult merged{"smalldiv"};
    merged.trials = mc.trials + rm.trials;
    merged.violations = mc.violations + rm.violations;
    merged.notes = mc.notes;
    merged.notes.insert(merged.notes.end(), rm.notes.begin(), rm.notes.end());
    suite_criterion(5, merged, "small divisors");
  }

  // 6. Matrix machinery: resolvent, perturbation, Neumann, Markov, partition.
  {
    SuiteResult merged{"matrix"};
    for (const SuiteResult& r :
         {verify_resolvent(2024), verify_perturbation(2024),
          verify_neumann(2024), verify_markov(2024), verify_partition(2024)}) {
      merged.trials += r.trials;
      merged.violations += r.violations;
      for (const auto& n : r.notes) merged.notes.push_back(r.name + ": " + n);
    }
    suite_criterion(6, merged, "matrix machinery");
  }

  // 7. Coupling surrogate at toy scale.
  suite_criterion(7, verify_coupling(2024), "coupling surrogate");

  criterion_8();

  std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}

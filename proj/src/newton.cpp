#include "cwb/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "cwb/errors.hpp"

namespace cwb {

int Schedule::radius_at(int r) const {
  double v = N0 * std::pow(growth, r);
  const int rounded = static_cast<int>(std::llround(v));
  return std::min(std::max(rounded, 1), box_cap);
}

double Schedule::width_at(int r, double L0) const {
  double s = 0.0;
  for (int j = 1; j <= r; ++j) s += 1.0 / (static_cast<double>(j) * j);
  return L0 * (1.0 - 3.0 / (std::numbers::pi * std::numbers::pi) * s);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::rejected: return "rejected";
    case Verdict::max_steps: return "max_steps";
  }
  return "unknown";
}

FourierField residual(const FourierField& q, const std::vector<double>& lambda,
                      const std::vector<double>& lambda_prime, double epsilon,
                      const PowerSeries& f, const ResonantSet& R, Box out_box,
                      double budget, double* dropped_mass) {
  const Multiplier mu = make_multiplier(R, lambda);
  const FourierField dH = dH_dqbar(q, f, out_box, budget, dropped_mass);
  return theta_derivative(q, lambda_prime)
      .minus(apply_multiplier(q, mu))
      .minus(dH.scaled(epsilon));
}

namespace {

constexpr double kImagTol = 1e-12;

std::vector<double> q_update_impl(const FourierField& q,
                                  const std::vector<double>& lambda,
                                  double epsilon, const PowerSeries& f,
                                  const std::vector<double>& amplitudes,
                                  const ResonantSet& R, Box work_box,
                                  double budget, double* imag_defect) {
  const FourierField dH = dH_dqbar(q, f, work_box, budget);
  std::vector<double> lp(lambda);
  double worst_imag = 0.0;
  for (int j = 0; j < R.b(); ++j) {
    const Complex v = dH.at(R.modes()[j]);
    worst_imag = std::max(worst_imag, std::abs(v.imag()));
    if (std::abs(v.imag()) > kImagTol * std::max(1.0, std::abs(v)))
      throw RealityViolation(
          "q_equation_update: dH/dqbar at resonant mode " +
          R.modes()[j].str() + " has imaginary part " +
          std::to_string(v.imag()));
    lp[j] = lambda[j] + epsilon / amplitudes[j] * v.real();
  }
  if (imag_defect) *imag_defect = worst_imag;
  return lp;
}

struct EvaluatedResidual {
  FourierField F;
  double norm_Lr = 0.0;
  double norm_half = 0.0;
  double tail = 0.0;
  double dropped = 0.0;
};

ResonantSet resonant_set(const NewtonSettings& s) {
  return ResonantSet(s.d, s.b, s.resonant_modes);
}

int eval_radius(const NewtonSettings& s, int r) {
  return 2 * s.schedule.radius_at(r + 1) - 1;
}

EvaluatedResidual eval_residual(const NewtonState& state,
                                const NewtonSettings& s, const ResonantSet& R) {
  EvaluatedResidual ev;
  const int r = state.r;
  const Box out_box{eval_radius(s, r)};
  ev.F = residual(state.q, state.lambda, state.lambda_prime, s.epsilon, s.f, R,
                  out_box, s.budget, &ev.dropped);
  const double Lr = s.schedule.width_at(r, s.L0);
  ev.norm_Lr = f_norm(ev.F, {s.alpha, Lr});
  ev.norm_half = f_norm(ev.F, {s.alpha, s.L0 / 2.0});
  const int N_solve = s.schedule.radius_at(r + 1);
  const FourierField inside =
      project_field(ev.F, Region::PBox, R, N_solve)
          .plus(project_field(ev.F, Region::Q, R));
  ev.tail = f_norm(ev.F.minus(inside), {s.alpha, Lr}) + ev.dropped;
  return ev;
}

struct SolveDiagnostics {
  double dq_F = 0.0;
  double inv_norm = 0.0;
  double decay_B = 0.0;
  double decay_L = 0.0;
  double conj_defect = 0.0;
  double max_imag_q = 0.0;
  double lambda_imag = 0.0;
  long long ms = 0;
};

StepRecord make_record(const NewtonState& state, const NewtonSettings& s,
                       const EvaluatedResidual& ev, const SolveDiagnostics& d) {
  StepRecord rec;
  rec.step = state.r;
  rec.N = s.schedule.radius_at(state.r);
  rec.residual_F = ev.norm_Lr;
  rec.residual_F_half = ev.norm_half;
  rec.dq_F = d.dq_F;
  rec.lambda_prime = state.lambda_prime;
  rec.inv_norm = d.inv_norm;
  rec.decay_B = d.decay_B;
  rec.decay_L = d.decay_L;
  rec.tail = ev.tail;
  rec.max_imag_q = d.max_imag_q;
  rec.lambda_imag = d.lambda_imag;
  rec.conj_defect = d.conj_defect;
  rec.ms = d.ms;
  return rec;
}

NewtonState step_core(const NewtonState& state, const NewtonSettings& s,
                      const ResonantSet& R, const EvaluatedResidual& ev,
                      SolveDiagnostics& diag) {
  const auto t0 = std::chrono::steady_clock::now();
  const int r = state.r;
  const Box solve_box{s.schedule.radius_at(r + 1)};
  const Multiplier mu = make_multiplier(R, state.lambda);

  double dropped = 0.0;
  const BlockOperator T =
      assemble_T(state.q, s.f, s.epsilon, solve_box, R, state.lambda_prime, mu,
                 s.budget, &dropped);

  const FourierField rhs_plus =
      project_field(ev.F.scaled(-1.0), Region::PBox, R, solve_box.radius);
  const FourierField rhs_minus = project_field(
      conjugate_field(ev.F).scaled(-1.0), Region::PPrimeBox, R, solve_box.radius);

  const HomologicalSolution sol =
      solve_homological(T, rhs_plus, rhs_minus, s.schedule.B_max);

  NewtonState next{state.q.plus(sol.dq), state.lambda, state.lambda_prime,
                   r + 1};
  diag.max_imag_q = next.q.strip_imag_dust(kImagTol);
  next.q.set_real_flag(true);
  next.lambda_prime =
      q_update_impl(next.q, next.lambda, s.epsilon, s.f, s.amplitudes, R,
                    Box{eval_radius(s, r + 1)}, s.budget, &diag.lambda_imag);

  diag.dq_F = f_norm(sol.dq, {s.alpha, s.schedule.width_at(r + 1, s.L0)});
  diag.conj_defect = sol.conj_defect;
  if (T.dim() <= s.decay_fit_dim_cap) {
    const InverseDiagnostics inv =
        invert_with_decay_fit(T, {s.alpha, s.L0}, s.schedule.B_max);
    diag.inv_norm = inv.op_norm;
    diag.decay_B = inv.fit.B;
    diag.decay_L = inv.fit.L_fit;
  } else {
    const DecayFit fit = sampled_decay_fit(T, {s.alpha, s.L0},
                                           s.decay_fit_columns, s.schedule.B_max);
    diag.inv_norm = sol.inv_norm_estimate;
    diag.decay_B = fit.B;
    diag.decay_L = fit.L_fit;
  }
  diag.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  return next;
}

TheoremClaims compute_claims(const NewtonState& state, const NewtonSettings& s,
                             const ResonantSet& R) {
  TheoremClaims claims;
  claims.amplitudes_exact = true;
  for (int j = 0; j < R.b(); ++j) {
    const Complex v = state.q.at(R.modes()[j]);
    if (!(v.real() == s.amplitudes[j] && v.imag() == 0.0))
      claims.amplitudes_exact = false;
  }
  for (int j = 0; j < R.b(); ++j)
    claims.freq_drift = std::max(
        claims.freq_drift, std::abs(state.lambda_prime[j] - state.lambda[j]));
  claims.K = s.epsilon > 0.0 ? claims.freq_drift / s.epsilon : 0.0;
  const GevreyWeight half{s.alpha, s.L0 / 2.0};
  for (const auto& [x, c] : state.q.entries())
    if (!R.contains(x))
      claims.decay_sum += std::abs(c) * weight_factor(x, half);
  claims.K_prime = s.epsilon > 0.0 ? claims.decay_sum / s.epsilon : 0.0;
  return claims;
}

void validate_settings(const NewtonSettings& s) {
  if (s.d < 1 || s.d > 3 || s.b < 1 || s.b > 3)
    throw ConfigError("newton: d and b must be in [1,3]");
  if (static_cast<int>(s.amplitudes.size()) != s.b)
    throw ConfigError("newton: amplitudes size != b");
  for (double a : s.amplitudes)
    if (!(a > 0.0)) throw ConfigError("newton: amplitudes must be positive");
  if (static_cast<int>(s.lambda.size()) != s.b)
    throw ConfigError("newton: lambda size != b");
  if (!(s.alpha > 1.0)) throw ConfigError("newton: alpha must exceed 1");
  if (!(s.L0 > 0.0)) throw ConfigError("newton: L0 must be positive");
  ResonantSet R = resonant_set(s);
  int max_sup = 0;
  for (const auto& m : R.modes()) max_sup = std::max(max_sup, m.sup_norm());
  if (s.schedule.radius_at(0) <= max_sup)
    throw ConfigError("newton: initial box radius does not contain the "
                      "resonant set");
}

}  // namespace

std::vector<double> q_equation_update(const FourierField& q,
                                      const std::vector<double>& lambda,
                                      double epsilon, const PowerSeries& f,
                                      const std::vector<double>& amplitudes,
                                      const ResonantSet& R, Box work_box,
                                      double budget) {
  return q_update_impl(q, lambda, epsilon, f, amplitudes, R, work_box, budget,
                       nullptr);
}

NewtonState initial_state(const NewtonSettings& s) {
  validate_settings(s);
  const ResonantSet R = resonant_set(s);
  int max_sup = 0;
  for (const auto& m : R.modes()) max_sup = std::max(max_sup, m.sup_norm());
  const Box box{std::max(s.schedule.radius_at(0), max_sup + 1)};
  FourierField q0(s.d, s.b, box, true);
  for (int j = 0; j < s.b; ++j) q0.set(R.modes()[j], s.amplitudes[j]);
  NewtonState state{std::move(q0), s.lambda, {}, 0};
  state.lambda_prime =
      q_update_impl(state.q, state.lambda, s.epsilon, s.f, s.amplitudes, R,
                    Box{eval_radius(s, 0)}, s.budget, nullptr);
  return state;
}

NewtonState newton_step(const NewtonState& state, const NewtonSettings& s,
                        NewtonTrace& trace) {
  const ResonantSet R = resonant_set(s);
  const EvaluatedResidual ev = eval_residual(state, s, R);
  SolveDiagnostics diag;
  NewtonState next = step_core(state, s, R, ev, diag);
  const EvaluatedResidual ev_next = eval_residual(next, s, R);
  trace.steps.push_back(make_record(next, s, ev_next, diag));
  return next;
}

RunOutcome run(const NewtonSettings& s) {
  const ResonantSet R = resonant_set(s);
  RunOutcome out;
  out.state = initial_state(s);
  SolveDiagnostics pending;  // zeros for the r = 0 row
  double prev_norm = std::numeric_limits<double>::infinity();
  int increases = 0;

  for (;;) {
    const EvaluatedResidual ev = eval_residual(out.state, s, R);
    out.trace.steps.push_back(make_record(out.state, s, ev, pending));

    if (ev.norm_Lr < s.schedule.residual_tol) {
      out.verdict = Verdict::converged;
      break;
    }
    if (out.state.r >= s.schedule.max_steps) {
      out.verdict = Verdict::max_steps;
      break;
    }
    if (ev.norm_Lr > prev_norm) {
      if (++increases >= 2) {
        out.verdict = Verdict::max_steps;
        out.trace.diverged = true;
        break;
      }
    } else {
      increases = 0;
    }
    prev_norm = ev.norm_Lr;

    try {
      pending = SolveDiagnostics{};
      out.state = step_core(out.state, s, R, ev, pending);
    } catch (const SmallDivisorFailure& e) {
      out.verdict = Verdict::rejected;
      out.rejection_reason = e.what();
      break;
    }
  }
  out.claims = compute_claims(out.state, s, R);
  return out;
}

}  // namespace cwb

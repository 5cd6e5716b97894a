#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/gevrey.hpp"
#include "cwb/linop.hpp"
#include "cwb/nonlinearity.hpp"

namespace cwb {

/// Truncation schedule N_r = round(N0 * growth^r), capped by box_cap. The
/// width schedule shrinks from L0 towards L0/2 as the paper's does.
struct Schedule {
  int N0 = 4;
  double growth = 2.0;
  int max_steps = 12;
  double residual_tol = 1e-12;
  double B_max = 1e8;
  int box_cap = 32;

  int radius_at(int r) const;
  /// L_r = L0 * (1 - (3/pi^2) * sum_{j<=r} 1/j^2); decreasing, >= L0/2.
  double width_at(int r, double L0) const;
};

struct NewtonSettings {
  int d = 1;
  int b = 1;
  std::vector<std::vector<int>> resonant_modes;
  std::vector<double> amplitudes;
  std::vector<double> lambda;
  double epsilon = 1e-3;
  double alpha = 2.0;
  double L0 = 1.0;
  PowerSeries f{{0.0, 0.0, 0.5}};
  Schedule schedule;
  double budget = 0.1;
  int decay_fit_dim_cap = 2200;  // full inverse below, sampled columns above
  int decay_fit_columns = 16;
};

struct StepRecord {
  int step = 0;
  int N = 0;
  double residual_F = 0.0;       // full residual, width L_r
  double residual_F_half = 0.0;  // full residual, width L0/2
  double dq_F = 0.0;             // ||dq||_F at width L_r
  std::vector<double> lambda_prime;
  double inv_norm = 0.0;
  double decay_B = 0.0;
  double decay_L = 0.0;
  double tail = 0.0;  // mass outside the working box + dropped product mass
  double max_imag_q = 0.0;
  double lambda_imag = 0.0;
  double conj_defect = 0.0;
  long long ms = 0;
};

struct NewtonTrace {
  std::vector<StepRecord> steps;
  bool diverged = false;
};

struct NewtonState {
  FourierField q;
  std::vector<double> lambda;
  std::vector<double> lambda_prime;
  int r = 0;
};

enum class Verdict { converged, rejected, max_steps };

std::string verdict_name(Verdict v);

/// Final-solution checks corresponding to the persistence claims: pinned
/// amplitudes, frequency drift |lambda' - lambda| <= K eps, and the weighted
/// decay sum of the off-resonant coefficients at width L0/2.
struct TheoremClaims {
  bool amplitudes_exact = false;
  double freq_drift = 0.0;
  double K = 0.0;
  double decay_sum = 0.0;
  double K_prime = 0.0;
};

struct RunOutcome {
  NewtonState state;
  NewtonTrace trace;
  Verdict verdict = Verdict::max_steps;
  TheoremClaims claims;
  std::string rejection_reason;
};

/// Full (unprojected) residual F(q) on out_box:
/// Fhat(n,k) = (k.lambda' - mu_n) qhat(n,k) - eps * (dH/dqbar)^(n,k).
FourierField residual(const FourierField& q, const std::vector<double>& lambda,
                      const std::vector<double>& lambda_prime, double epsilon,
                      const PowerSeries& f, const ResonantSet& R, Box out_box,
                      double budget = 0.1, double* dropped_mass = nullptr);

/// Explicit Q-equation update lambda'_j = lambda_j + (eps/a_j) *
/// (dH/dqbar)^(n_j, e_j), with q held fixed. Throws RealityViolation if the
/// result carries imaginary mass beyond tolerance.
std::vector<double> q_equation_update(const FourierField& q,
                                      const std::vector<double>& lambda,
                                      double epsilon, const PowerSeries& f,
                                      const std::vector<double>& amplitudes,
                                      const ResonantSet& R, Box work_box,
                                      double budget = 0.1);

NewtonState initial_state(const NewtonSettings& s);

/// One truncated Newton step: assemble T on B(0, N_{r+1}), solve the
/// homological equation, update q and the frequency, append a trace record.
NewtonState newton_step(const NewtonState& state, const NewtonSettings& s,
                        NewtonTrace& trace);

RunOutcome run(const NewtonSettings& s);

}  // namespace cwb

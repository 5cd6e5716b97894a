#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/lattice.hpp"

namespace cwb {

/// Quantitative non-resonance condition: |k.lambda - mu_n| > gamma (1+|k|)^-C
/// for 0 < ... |k| < N and (n,k) not resonant. C must exceed b + d.
struct DiophantineSpec {
  double gamma = 0.01;
  double C = 3.0;
  int N = 16;
};

struct DioViolation {
  MultiIndex site;
  double value = 0.0;  // |k.lambda - mu_n|
};

struct DcReport {
  bool pass = true;
  std::vector<DioViolation> violations;
  /// min over scanned pairs of |k.lambda - mu_n| (1+|k|)^C: the largest gamma
  /// the vector would still pass.
  double worst_margin = 0.0;
};

/// Exhaustive scan over |k| < N and the derived spatial horizon
/// |n|^2 <= b*N + 1 (plus the resonant modes), skipping sites in R.
DcReport dc_check(const std::vector<double>& lambda, const DiophantineSpec& spec,
                  const Multiplier& mu, const ResonantSet& R);

struct DcPrimeReport {
  bool pass = true;
  double worst_margin = 0.0;
};

/// |k.lambda'| > gamma (1+|k|)^-tau for 0 < |k| < M, exhaustive.
DcPrimeReport dc_prime_check(const std::vector<double>& lambda_prime,
                             double gamma, double tau, int M);

struct IntervalList {
  // Axis-aligned cells, as (lo, hi) corner pairs.
  std::vector<std::pair<std::vector<double>, std::vector<double>>> cells;
};

struct RemoveIntervalsResult {
  IntervalList kept;
  double removed_measure = 0.0;
  double kept_measure = 0.0;
  long long cells_total = 0;
  long long cells_removed = 0;
  /// removed_measure / (gamma * M^(1-tau)), the measured constant against the
  /// removal bound shape.
  double bound_constant = 0.0;
};

/// Partition the interval I = prod [lo_i, hi_i] (dimension b <= 2) into cells
/// of size N^-grid_exponent. A cell survives iff some sample inside satisfies
/// the 2*gamma-strengthened condition |k.lambda| > 2 gamma (1+|k|)^-tau for
/// all M < |k| < N; surviving cells then satisfy the gamma-condition
/// everywhere provided the cell size beats the Lipschitz margin.
RemoveIntervalsResult remove_intervals(const std::vector<double>& lo,
                                       const std::vector<double>& hi, int M,
                                       int N, double gamma, double tau,
                                       int grid_exponent,
                                       int samples_per_cell = 16,
                                       uint64_t seed = 1);

/// Fraction of uniform lambda samples in [0,1]^b failing dc_check.
/// mu_factory builds the multiplier for each sampled lambda; the default pins
/// the resonant values to the sampled lambda itself.
double excluded_measure_mc(
    const DiophantineSpec& spec, const ResonantSet& R, long long samples,
    uint64_t seed,
    const std::function<Multiplier(const std::vector<double>&)>& mu_factory = {});

}  // namespace cwb

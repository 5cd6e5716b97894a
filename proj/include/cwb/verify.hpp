#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cwb {

/// Outcome of one named property suite. A suite passes iff it recorded zero
/// violations over its trials.
struct SuiteResult {
  std::string name;
  long long trials = 0;
  long long violations = 0;
  std::vector<std::string> notes;

  bool pass() const { return violations == 0; }
};

// Gevrey calculus: |.|_alpha subadditivity, F-norm submultiplicativity on
// 1e3 random pairs, the two-sided C0/F norm chain on 1e2 random trig
// polynomials, and the Fourier-decay bound on the same corpus.
SuiteResult verify_gevrey_norms(uint64_t seed);

// Convolution against the brute-force oracle, conjugation involution,
// conjugate-even symmetry of |q|^2 for real fields.
SuiteResult verify_field_algebra(uint64_t seed);

// Resolvent identity defect on 1e3 random well-conditioned instances.
SuiteResult verify_resolvent(uint64_t seed);

// Matrix perturbation lemma on 1e3 hypothesis-satisfying instances.
SuiteResult verify_perturbation(uint64_t seed);

// Neumann bound ||T^-1|| < 2||D^-1|| whenever ||eps S D^-1|| <= 1/2, 1e3 trials.
SuiteResult verify_neumann(uint64_t seed);

// Markov gradient inequality on 1e3 random polynomials.
SuiteResult verify_markov(uint64_t seed);

// Parameter-Taylor remainder bound on randomized polynomial field maps.
SuiteResult verify_taylor(uint64_t seed);

// Arithmetic cluster partition: exact separation, diameters reported.
SuiteResult verify_partition(uint64_t seed);

// Coupling surrogate: fitted decay-rate retention over 200 seeded trials.
SuiteResult verify_coupling(uint64_t seed);

// Monte-Carlo exclusion fraction vs gamma: log-log slope in [0.8, 1.2],
// monotonicity in gamma and horizon.
SuiteResult verify_smalldiv_measure(uint64_t seed, long long samples = 100000);

// Appendix-style interval removal: kept cells re-verified on a fine grid.
SuiteResult verify_remove_intervals(uint64_t seed);

const std::vector<std::string>& verify_suite_names();

/// Runs the named suite; throws std::out_of_range for unknown names.
SuiteResult run_verify_suite(const std::string& name, uint64_t seed);

}  // namespace cwb

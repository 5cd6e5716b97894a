#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/gevrey.hpp"

namespace cwb {

/// Max-norm defect of the resolvent identity
///   G_L = (G_L1 + G_L2) - (G_L1 + G_L2)(T_L - T_L1 - T_L2) G_L
/// for a disjoint partition of the row set of T. Analytically zero; measures
/// numerical conditioning. Throws (naming the region) on singular restriction.
double resolvent_residual(const Eigen::MatrixXd& T, const std::vector<int>& L1,
                          const std::vector<int>& L2);

struct PerturbationReport {
  bool hypotheses_met = false;
  std::string unmet;          // first violated hypothesis, empty if none
  double smallness = 0.0;     // eta N^C5 B^2 e^D
  double inv_norm = 0.0;      // ||T^-1||
  double inv_norm_pert = 0.0; // ||T'^-1||
  bool conclusion_norm = false;
  bool conclusion_decay = false;
  double margin_norm = 0.0;   // 2B - ||T'^-1||
  double margin_decay = 0.0;  // min over far pairs of 2 e^-aLw - |T'^-1(x,x')|
};

/// Hypotheses: ||T^-1|| < B; |T^-1(x,x')| < e^{-alpha L |x-x'|_alpha} beyond
/// distance D_radius; |T'-T| < eta e^{-alpha L |x-x'|_alpha} entrywise; and
/// the smallness product eta N^{C5} B^2 e^{D} <= 0.1 with C5 = 2(b+d)+1.
/// When they hold, verifies ||T'^-1|| < 2B and the doubled decay envelope.
PerturbationReport perturbation_check(const std::vector<MultiIndex>& sites,
                                      const Eigen::MatrixXd& T,
                                      const Eigen::MatrixXd& T_prime, double B,
                                      double D_radius, double L, double eta,
                                      double alpha);

struct NeumannReport {
  bool precondition_met = false;  // ||eps S D^-1|| < 1/2
  double coupling = 0.0;          // ||eps S D^-1||
  bool holds = false;             // ||T^-1|| < 2 ||D^-1||
  double lhs = 0.0;               // ||T^-1||
  double rhs = 0.0;               // 2 ||D^-1||
};

NeumannReport neumann_bound(const Eigen::VectorXd& D_diag,
                            const Eigen::MatrixXd& S, double epsilon);

/// Real polynomial in a fixed number of parameter variables, dense exponent
/// map, total degree capped at construction.
class ParamPolynomial {
 public:
  ParamPolynomial(int nvars, int degree_cap);
  static ParamPolynomial constant(int nvars, int degree_cap, double value);
  static ParamPolynomial variable(int nvars, int degree_cap, int var);

  int nvars() const { return nvars_; }
  int degree_cap() const { return degree_cap_; }
  int total_degree() const;
  const std::map<std::vector<int>, double>& terms() const { return terms_; }
  double coeff(const std::vector<int>& expo) const;

  void set_term(const std::vector<int>& expo, double coeff);
  double eval(const std::vector<double>& x) const;
  ParamPolynomial partial(int var) const;
  ParamPolynomial plus(const ParamPolynomial& o) const;
  ParamPolynomial times(const ParamPolynomial& o) const;
  ParamPolynomial scaled(double s) const;
  /// Composition x_i -> x_i + shift_i (exact).
  ParamPolynomial shifted(const std::vector<double>& shift) const;
  /// Drops all terms of total degree above p.
  ParamPolynomial truncated(int p) const;

 private:
  int nvars_;
  int degree_cap_;
  std::map<std::vector<int>, double> terms_;
};

/// Field whose coefficients are polynomials in the parameters.
struct ParamField {
  int d = 1;
  int b = 1;
  std::map<MultiIndex, ParamPolynomial> coeffs;

  FourierField eval(const std::vector<double>& x, Box box) const;
};

struct TaylorReport {
  ParamField truncation;
  double norm_l1l2 = 0.0;     // measured (alpha, L1, L2) norm of phi
  double bound_coeff = 0.0;   // norm * (p+1)!^(alpha-1) * L1^-(p+1)alpha
  double max_measured = 0.0;  // worst remainder over the sample grid
  double max_bound = 0.0;     // bound at the worst sample
  bool verified = false;      // measured <= bound at every sample
};

/// Degree-p Taylor truncation of a polynomial parameter-to-field map at
/// `center`, with the asymptotic-expansion remainder bound
///   ||phi(l) - T_p(l)||_{F_{alpha,L2}} <=
///     ||phi||_{alpha,L1,L2} (p+1)!^(alpha-1) L1^{-(p+1)alpha} |l-l0|_1^{p+1}
/// verified on a uniform sample grid of the interval [lo, hi].
TaylorReport taylor_remainder(const ParamField& phi,
                              const std::vector<double>& center, int p,
                              Box field_box, double alpha, double L1, double L2,
                              const std::vector<double>& lo,
                              const std::vector<double>& hi,
                              int grid_per_dim = 9);

struct MarkovReport {
  double bound = 0.0;     // 4 k^2 / omega_I * ||p||_C0(I)
  double measured = 0.0;  // grid sup of |grad p|
  bool holds = false;
};

/// Markov inequality check on the axis-aligned box [lo, hi]; omega_I is the
/// shortest side. Sups are taken on an endpoint-inclusive uniform grid.
MarkovReport markov_bound(const ParamPolynomial& p,
                          const std::vector<double>& lo,
                          const std::vector<double>& hi, int grid_per_dim = 257);

struct ArithmeticPartition {
  std::vector<std::vector<std::vector<int>>> clusters;  // clusters of n vectors
  int max_diameter = 0;         // sup-norm diameter over clusters
  double fitted_C0 = 0.0;       // log_B(max(diam, 2)) for B > 1
  long long min_cross_link = 0; // min over cross pairs of |n-n'|+||n|^2-|n'|^2|
  bool separation_verified = false;
};

/// Connected components of the graph on [-box_radius, box_radius]^d linking
/// n ~ n' when |n-n'| + ||n|^2-|n'|^2| <= B (sup norm). Cross-cluster
/// separation > B holds by construction and is re-verified by brute force.
ArithmeticPartition arithmetic_partition(int B, int box_radius, int d,
                                         long long enum_cap = 2'000'000);

struct CouplingSpec {
  int M0 = 3;
  int M1 = 12;
  int d = 1;
  int b = 1;
  double alpha = 2.0;
  double L = 0.5;          // planted rate: envelope exp(-alpha L |x-x'|_alpha)
  double noise_amp = 0.05; // prefactor of the planted off-diagonal noise
  double theta = 0.95;
  double theta1 = 0.30;
  double theta2 = 0.20;
  double theta3 = 0.15;
  double theta4 = 0.05;
  double kappa = 0.20;
  double delta_tilde = 0.05;
  bool with_singular_cluster = true;
  double loss_fraction = 0.2;  // flag when fitted rate < (1-this) * L
  uint64_t seed = 1;
};

struct CouplingReport {
  bool pass = false;
  double norm_G = 0.0;
  double fitted_rate = 0.0;
  double planted_rate = 0.0;
  int pairs_fitted = 0;
  std::vector<int> cluster_center;  // empty when no cluster planted
};

/// Throws ConfigError listing the violated exponent inequality when the toy
/// scale cannot satisfy the lemma's constraints.
CouplingReport coupling_experiment(const CouplingSpec& spec);

}  // namespace cwb

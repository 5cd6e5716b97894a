#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/gevrey.hpp"
#include "cwb/nonlinearity.hpp"

namespace cwb {

/// The duplicated linearized operator T = D - eps * S restricted to
/// (P u P') intersected with the box: index set excludes (+,x) for x in R and
/// (-,x) for x in -R. Realized dense. With real coefficient data (the only
/// regime the Newton path produces; enforced on assembly) the matrix is real.
struct BlockOperator {
  std::vector<SignedSite> sites;
  Eigen::VectorXd diag;
  Eigen::MatrixXd dense;
  double epsilon = 0.0;
  Box box;
  SecondDerivatives symbols{FourierField(1, 1, Box{1}),
                            FourierField(1, 1, Box{1}),
                            FourierField(1, 1, Box{1})};

  int dim() const { return static_cast<int>(sites.size()); }
  int row_of(const SignedSite& s) const;  // -1 if absent
};

/// Diagonal D over the restricted signed sites:
/// D(+,n,k) = k.lambda' - mu_n,  D(-,n,k) = -k.lambda' - mu_{-n}.
/// Returned in the fixed site order (all + sites, then all - sites, each
/// block lexicographic).
std::vector<SignedSite> restricted_sites(Box box, const ResonantSet& R);

Eigen::VectorXd assemble_D(const std::vector<SignedSite>& sites,
                           const std::vector<double>& lambda_prime,
                           const Multiplier& mu);

/// Entry rule of the Toeplitz block S: (+,+) and (-,-) blocks read the
/// qqbar symbol at x - x', (+,-) the qbarqbar symbol, (-,+) the qq symbol.
/// Symbols must be declared on a box of radius >= 2*box.radius - 1.
Eigen::MatrixXd assemble_S(const SecondDerivatives& symbols,
                           const std::vector<SignedSite>& sites, Box box);

BlockOperator assemble_T(const FourierField& q, const PowerSeries& f,
                         double epsilon, Box box, const ResonantSet& R,
                         const std::vector<double>& lambda_prime,
                         const Multiplier& mu, double budget = 0.1,
                         double* dropped_mass = nullptr);

struct HomologicalSolution {
  FourierField dq;
  FourierField dq_bar;
  double inv_norm_estimate = 0.0;   // 1-norm estimate from the factorization
  double condition_estimate = 0.0;  // ||T||_1 * inv_norm_estimate
  double residual_rel = 0.0;        // ||T sol - rhs|| / ||rhs||
  double conj_defect = 0.0;         // max |dq_bar(x) - conj(dq(-x))|
};

/// Dense factorization solve of T (dq, dq_bar) = (rhs_plus, rhs_minus).
/// rhs_plus must be supported on P n box, rhs_minus on P' n box. Throws
/// SmallDivisorFailure when the factorization is singular or the inverse-norm
/// estimate exceeds B_max.
HomologicalSolution solve_homological(const BlockOperator& T,
                                      const FourierField& rhs_plus,
                                      const FourierField& rhs_minus,
                                      double B_max = 1e8);

struct InverseDiagnostics {
  Eigen::MatrixXd inverse;
  double op_norm = 0.0;  // l2 operator norm of the inverse
  DecayFit fit;
};

/// Full dense inverse with operator norm and a pointwise decay fit over the
/// |x - x'|_alpha metric (sign index ignored for the distance).
InverseDiagnostics invert_with_decay_fit(const BlockOperator& T,
                                         const GevreyWeight& w,
                                         double B_max = 1e8);

/// Decay fit from a deterministic sample of inverse columns; used for trace
/// diagnostics when the full inverse is too large to realize each step.
DecayFit sampled_decay_fit(const BlockOperator& T, const GevreyWeight& w,
                           int max_columns, double B_max = 1e8);

/// l2 operator norm via power iteration (deterministic start).
double operator_norm(const Eigen::MatrixXd& M);

}  // namespace cwb

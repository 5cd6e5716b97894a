#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "cwb/field.hpp"
#include "cwb/lattice.hpp"

namespace cwb {

/// Gevrey index alpha > 1 and width L > 0; the associated coefficient weight
/// is exp(alpha * L * |x|_alpha).
struct GevreyWeight {
  double alpha = 2.0;
  double L = 1.0;
};

/// Pointwise envelope |m(x,x')| <= B exp(-alpha L_fit |x-x'|_alpha), valid on
/// the sampled entries up to max_residual (log-scale slack after inflation).
struct DecayFit {
  double B = 0.0;
  double L_fit = std::numeric_limits<double>::infinity();
  double max_residual = 0.0;
};

struct DecayEntry {
  MultiIndex x;
  MultiIndex xp;
  double magnitude = 0.0;
};

/// Weighted l1 norm sum_x exp(alpha L |x|_alpha) |fhat(x)|.
double f_norm(const FourierField& f, const GevreyWeight& w);

/// exp(alpha L |x|_alpha); the Gevrey norm of a single exponential mode is
/// bounded by exactly this factor.
double weight_factor(const MultiIndex& x, const GevreyWeight& w);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided bracket for the derivative-sum Gevrey norm
///   sum_k (L^|k|_1 / k!)^alpha ||d^k f||_C0
/// of a trigonometric polynomial. The lower bound evaluates each derivative
/// sup on a uniform grid (endpoint-free torus grid) and truncates the order
/// sum; the upper bound replaces each sup by the l1 Fourier bound and carries
/// a certified geometric tail past order_cap. Throws if the tail cannot be
/// certified (order_cap too small for the support/width).
NormBracket gevrey_c0_norm_bracket(const FourierField& f, const GevreyWeight& w,
                                   int order_cap = 40, int grid_per_dim = 64);

/// h(eps, alpha) = (1 / (1 - (1-eps)^(alpha/(alpha-1))))^(alpha-1);
/// the constant in the Fourier-decay estimate for Gevrey functions.
double decay_constant_h(double eps, double alpha);

/// C_delta = sum_{x in Z^(d+b)} exp(-alpha delta |x|_alpha), computed as the
/// (d+b)-th power of the one-dimensional sum with a certified tail.
double c_delta_sum(double alpha, double delta, int dims);

/// Least-squares fit of log|m| against -alpha |x-x'|_alpha over the nonzero
/// entries, with B inflated so the envelope holds pointwise. All-zero input
/// returns the B = 0 sentinel; a rank-deficient abscissa set pins L_fit = 0.
DecayFit fit_exponential_decay(const std::vector<DecayEntry>& entries,
                               double alpha);

}  // namespace cwb

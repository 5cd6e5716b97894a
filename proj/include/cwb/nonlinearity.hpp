#pragma once

#include <vector>

#include "cwb/field.hpp"
#include "cwb/gevrey.hpp"

namespace cwb {

/// Real finite power series f(s) = sum_j c_j s^j. The Hamiltonian density is
/// H(q, qbar) = f(q qbar).
struct PowerSeries {
  std::vector<double> c;

  int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
  double eval(double s) const;
};

PowerSeries series_derivative(const PowerSeries& f);

/// sum_{k<=order_cap} (L^k / k!)^alpha * sup_{[-1,1]} |f^(k)|, the sup taken
/// as the coefficient ceiling sum_j |c_j| j!/(j-k)! (exact for nonnegative
/// coefficients). Finite series vanish beyond their degree.
double series_gevrey_norm(const PowerSeries& f, const GevreyWeight& w,
                          int order_cap);

/// First Hamiltonian derivative dH/dqbar = f'(|q|^2) q, evaluated by Horner
/// in the field algebra with every product truncated to out_box. The l1
/// ceiling of |q|^2 must stay within `budget` (throws BudgetError otherwise).
FourierField dH_dqbar(const FourierField& q, const PowerSeries& f, Box out_box,
                      double budget = 0.1, double* dropped_mass = nullptr);

struct SecondDerivatives {
  FourierField qqbar;     // f''(|q|^2) |q|^2 + f'(|q|^2)
  FourierField qbarqbar;  // f''(|q|^2) q^2
  FourierField qq;        // f''(|q|^2) qbar^2
};

SecondDerivatives second_derivatives(const FourierField& q, const PowerSeries& f,
                                     Box out_box, double budget = 0.1,
                                     double* dropped_mass = nullptr);

/// Horner evaluation of the series at a field argument, products truncated to
/// out_box. Exposed for the composition / difference-estimate checks.
FourierField eval_series_at_field(const PowerSeries& f, const FourierField& u,
                                  Box out_box, double* dropped_mass = nullptr);

}  // namespace cwb

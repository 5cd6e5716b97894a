#include "cwb/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

#include "cwb/errors.hpp"

namespace cwb {

double PowerSeries::eval(double s) const {
  double acc = 0.0;
  for (size_t j = c.size(); j-- > 0;) acc = acc * s + c[j];
  return acc;
}

PowerSeries series_derivative(const PowerSeries& f) {
  PowerSeries d;
  for (size_t j = 1; j < f.c.size(); ++j)
    d.c.push_back(f.c[j] * static_cast<double>(j));
  return d;
}

double series_gevrey_norm(const PowerSeries& f, const GevreyWeight& w,
                          int order_cap) {
  if (order_cap < f.degree())
    throw std::invalid_argument("series_gevrey_norm: order_cap below degree");
  double total = 0.0;
  for (int k = 0; k <= std::min<int>(order_cap, f.degree()); ++k) {
    // sup_{[-1,1]} |f^(k)| <= sum_{j>=k} |c_j| j!/(j-k)!
    double sup = 0.0;
    for (int j = k; j <= f.degree(); ++j) {
      double falling = 1.0;
      for (int i = 0; i < k; ++i) falling *= static_cast<double>(j - i);
      sup += std::abs(f.c[j]) * falling;
    }
    double weight_log = 0.0;
    for (int i = 1; i <= k; ++i) weight_log += std::log(w.L) - std::log(i);
    total += std::exp(w.alpha * weight_log) * sup;
  }
  return total;
}

FourierField eval_series_at_field(const PowerSeries& f, const FourierField& u,
                                  Box out_box, double* dropped_mass) {
  FourierField acc(u.d(), u.b(), out_box, u.real_flag());
  if (f.c.empty()) return acc;
  MultiIndex zero;
  zero.n.assign(u.d(), 0);
  zero.k.assign(u.b(), 0);
  acc.set(zero, f.c.back());
  for (size_t j = f.c.size() - 1; j-- > 0;) {
    acc = multiply(acc, u, out_box, dropped_mass);
    if (f.c[j] != 0.0) acc.add(zero, f.c[j]);
  }
  return acc;
}

namespace {

void check_budget(const FourierField& u, double budget) {
  const double ceiling = u.l1_norm();
  if (ceiling > budget) throw BudgetError(ceiling, budget);
}

}  // namespace

FourierField dH_dqbar(const FourierField& q, const PowerSeries& f, Box out_box,
                      double budget, double* dropped_mass) {
  const FourierField u = multiply(q, conjugate_field(q), out_box, dropped_mass);
  check_budget(u, budget);
  const FourierField fp = eval_series_at_field(series_derivative(f), u, out_box,
                                               dropped_mass);
  return multiply(fp, q, out_box, dropped_mass);
}

SecondDerivatives second_derivatives(const FourierField& q, const PowerSeries& f,
                                     Box out_box, double budget,
                                     double* dropped_mass) {
  const FourierField qbar = conjugate_field(q);
  const FourierField u = multiply(q, qbar, out_box, dropped_mass);
  check_budget(u, budget);
  const PowerSeries fp = series_derivative(f);
  const PowerSeries fpp = series_derivative(fp);
  const FourierField fp_u = eval_series_at_field(fp, u, out_box, dropped_mass);
  const FourierField fpp_u = eval_series_at_field(fpp, u, out_box, dropped_mass);

  SecondDerivatives out{
      multiply(fpp_u, u, out_box, dropped_mass).plus(fp_u),
      multiply(fpp_u, multiply(q, q, out_box, dropped_mass), out_box,
               dropped_mass),
      multiply(fpp_u, multiply(qbar, qbar, out_box, dropped_mass), out_box,
               dropped_mass)};
  return out;
}

}  // namespace cwb

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cwb/lattice.hpp"

namespace cwb {

using Complex = std::complex<double>;

/// Finitely supported complex coefficient map on Z^d x Z^b. Immutable in
/// spirit: operations return fresh values. All supported sites must lie
/// inside support_box; real_flag asserts coefficients are real up to dust.
class FourierField {
 public:
  FourierField() : FourierField(1, 1, Box{1}) {}
  FourierField(int d, int b, Box support_box, bool real_flag = false)
      : d_(d), b_(b), box_(support_box), real_flag_(real_flag) {}

  int d() const { return d_; }
  int b() const { return b_; }
  const Box& support_box() const { return box_; }
  bool real_flag() const { return real_flag_; }
  void set_real_flag(bool v) { real_flag_ = v; }

  const std::map<MultiIndex, Complex>& entries() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  size_t size() const { return coeffs_.size(); }

  Complex at(const MultiIndex& x) const;
  /// Throws if x is outside the support box. Zero values erase the entry.
  void set(const MultiIndex& x, Complex v);
  void add(const MultiIndex& x, Complex v);

  FourierField scaled(Complex s) const;
  FourierField plus(const FourierField& o) const;   // support box = larger one
  FourierField minus(const FourierField& o) const;

  double max_abs() const;
  double max_imag() const;
  double l1_norm() const;  // sum of |coeff|
  /// Zeroes imaginary parts (and then whole entries) smaller than tol in
  /// absolute value; returns the largest imaginary part seen.
  double strip_imag_dust(double tol);

 private:
  int d_;
  int b_;
  Box box_;
  bool real_flag_;
  std::map<MultiIndex, Complex> coeffs_;
};

/// Diagonal symbol mu of the linear operator: mu_{n_j} = lambda_j on the
/// resonant spatial modes, mu_n = |n|^2 elsewhere.
struct Multiplier {
  std::vector<std::vector<int>> resonant_n;
  std::vector<double> values;
  std::string description;

  double eval(std::span<const int> n) const;
};

Multiplier make_multiplier(const ResonantSet& R, const std::vector<double>& lambda);

/// Truncated convolution product: (fg)^(x) = sum_y fhat(x-y) ghat(y),
/// restricted to out_box. Coefficient mass falling outside out_box is added
/// to *dropped_mass when given.
FourierField multiply(const FourierField& f, const FourierField& g, Box out_box,
                      double* dropped_mass = nullptr);

/// Output coefficient at x equals conj(fhat(-x)); involution.
FourierField conjugate_field(const FourierField& f);

/// Fourier symbol of (1/i) lambda' . d_theta: coefficient at (n,k) scaled by
/// k . lambda'.
FourierField theta_derivative(const FourierField& f,
                              const std::vector<double>& lambda_prime);

/// Coefficient at (n,k) scaled by mu(n).
FourierField apply_multiplier(const FourierField& f, const Multiplier& m);

/// Zeroes every coefficient outside the region. Boxed regions use box_radius.
FourierField project_field(const FourierField& f, Region region,
                           const ResonantSet& R, int box_radius = 0);

}  // namespace cwb

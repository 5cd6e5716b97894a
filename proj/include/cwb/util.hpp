#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cwb {

// splitmix64; used to derive independent per-block / per-sample seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Flat indexing of the cube [-(radius-1), radius-1]^dims, lexicographic.
class BoxIndexer {
 public:
  BoxIndexer(int radius, int dims) : radius_(radius), dims_(dims) {
    side_ = 2 * static_cast<long long>(radius) - 1;
    size_ = 1;
    for (int i = 0; i < dims; ++i) size_ *= side_;
  }

  long long size() const { return size_; }
  int radius() const { return radius_; }
  int dims() const { return dims_; }

  bool contains(const int* c) const {
    for (int i = 0; i < dims_; ++i)
      if (c[i] <= -radius_ || c[i] >= radius_) return false;
    return true;
  }

  long long flat(const int* c) const {
    long long idx = 0;
    for (int i = 0; i < dims_; ++i) idx = idx * side_ + (c[i] + radius_ - 1);
    return idx;
  }

  void unflat(long long idx, int* c) const {
    for (int i = dims_ - 1; i >= 0; --i) {
      c[i] = static_cast<int>(idx % side_) - (radius_ - 1);
      idx /= side_;
    }
  }

 private:
  int radius_;
  int dims_;
  long long side_;
  long long size_;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  bool degenerate = false;  // all abscissae equal; slope pinned to 0
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit linear_fit(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("linear_fit: bad input sizes");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LinearFit fit;
  if (det <= 1e-14 * (n * sxx + sx * sx + 1.0)) {
    fit.degenerate = true;
    fit.slope = 0.0;
    fit.intercept = sy / n;
    return fit;
  }
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

// sum_{m>=1} exp(-c m^(1/alpha)), including a certified upper bound on the
// dropped tail. Requires c > 0, alpha > 1. The tail past M is bounded by
// the integral  int_M^inf exp(-c s^(1/alpha)) ds = alpha *
// int_{M^(1/alpha)}^inf u^(alpha-1) exp(-c u) du, and for u0 >= 2(alpha-1)/c
// the integrand is dominated by u0^(alpha-1) exp(-c u0) exp(-(c/2)(u-u0)).
inline double sum_exp_alpha(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 1.0))
    throw std::invalid_argument("sum_exp_alpha: need c > 0 and alpha > 1");
  double sum = 0.0;
  const double u_min = 2.0 * (alpha - 1.0) / c;
  long long m = 1;
  for (;; ++m) {
    const double u = std::pow(static_cast<double>(m), 1.0 / alpha);
    const double term = std::exp(-c * u);
    sum += term;
    if (u >= u_min && term < 1e-18 * (sum + 1.0)) break;
    if (m > 100'000'000)
      throw std::runtime_error("sum_exp_alpha: series converges too slowly");
  }
  const double u0 = std::pow(static_cast<double>(m), 1.0 / alpha);
  const double tail =
      alpha * std::pow(u0, alpha - 1.0) * std::exp(-c * u0) * 2.0 / c;
  return sum + tail;
}

}  // namespace cwb

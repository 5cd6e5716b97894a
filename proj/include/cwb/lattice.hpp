#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cwb {

/// Lattice point (n, k) in Z^d x Z^b. n indexes the spatial mode, k the
/// frequency mode. Ordering is lexicographic over (n, k), fixed once so that
/// operator matrices are reproducible bit-for-bit across runs.
struct MultiIndex {
  std::vector<int> n;
  std::vector<int> k;

  int d() const { return static_cast<int>(n.size()); }
  int b() const { return static_cast<int>(k.size()); }
  int dims() const { return d() + b(); }

  bool is_zero() const;
  int sup_norm() const;  // max over all components of |.|

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex operator-() const;
  bool operator==(const MultiIndex& o) const = default;
  bool operator<(const MultiIndex& o) const;

  std::string str() const;
};

enum class Sign : int8_t { plus = 0, minus = 1 };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Row/column label of the duplicated linearized operator.
struct SignedSite {
  Sign sign;
  MultiIndex site;

  bool operator==(const SignedSite&) const = default;
  bool operator<(const SignedSite& o) const {
    if (sign != o.sign) return sign < o.sign;
    return site < o.site;
  }
  std::string str() const;
};

/// The b pinned modes (n_j, e_j). The k-parts are forced to be the b distinct
/// unit vectors; the n_j must be pairwise distinct.
class ResonantSet {
 public:
  ResonantSet(int d, int b, std::vector<std::vector<int>> spatial_modes);

  int d() const { return d_; }
  int b() const { return b_; }
  const std::vector<MultiIndex>& modes() const { return modes_; }

  bool contains(const MultiIndex& x) const;        // x in R
  bool minus_contains(const MultiIndex& x) const;  // x in -R
  // Index j with modes()[j] == x, or -1.
  int index_of(const MultiIndex& x) const;

 private:
  int d_;
  int b_;
  std::vector<MultiIndex> modes_;
};

/// Sup-norm truncation box: x is a member iff |n| < N and |k| < N, where
/// |.| is the max over components.
struct Box {
  int radius = 0;

  bool contains(const MultiIndex& x) const { return x.sup_norm() < radius; }
  long long site_count(int d, int b) const;
};

/// Sub-additive weight |x|_alpha = sum_j |n_j|^(1/alpha) + sum_j |k_j|^(1/alpha).
double alpha_index_weight(const MultiIndex& x, double alpha);

/// All sites of Box(N) in Z^d x Z^b, lexicographic order; exactly
/// (2N-1)^(d+b) of them. `enum_cap` guards against runaway sizes.
std::vector<MultiIndex> enumerate_box(int N, int d, int b,
                                      long long enum_cap = 5'000'000);

/// Site classes under the Lyapunov-Schmidt splitting. R and -R are disjoint
/// (their k-parts are distinct unit vectors up to sign), so every site is a
/// Q-site (in P' only), a -Q-site (in P only), or belongs to both P and P'.
enum class SiteClass { Q, MinusQ, PAndPPrime };

SiteClass classify_site(const MultiIndex& x, const ResonantSet& R);

/// Coefficient regions used by the projections; the boxed variants require a
/// radius at the call site.
enum class Region { Q, P, PPrime, PBox, PPrimeBox };

bool region_contains(Region region, const MultiIndex& x, const ResonantSet& R,
                     int box_radius = 0);

}  // namespace cwb

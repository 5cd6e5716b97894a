#include "cwb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace cwb {

namespace {

void check_same_shape(const MultiIndex& a, const MultiIndex& b) {
  if (a.n.size() != b.n.size() || a.k.size() != b.k.size())
    throw std::invalid_argument("MultiIndex dimension mismatch");
}

}  // namespace

bool MultiIndex::is_zero() const {
  for (int v : n)
    if (v != 0) return false;
  for (int v : k)
    if (v != 0) return false;
  return true;
}

int MultiIndex::sup_norm() const {
  int m = 0;
  for (int v : n) m = std::max(m, std::abs(v));
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  check_same_shape(*this, o);
  MultiIndex r = *this;
  for (size_t i = 0; i < n.size(); ++i) r.n[i] += o.n[i];
  for (size_t i = 0; i < k.size(); ++i) r.k[i] += o.k[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  check_same_shape(*this, o);
  MultiIndex r = *this;
  for (size_t i = 0; i < n.size(); ++i) r.n[i] -= o.n[i];
  for (size_t i = 0; i < k.size(); ++i) r.k[i] -= o.k[i];
  return r;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r = *this;
  for (int& v : r.n) v = -v;
  for (int& v : r.k) v = -v;
  return r;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  check_same_shape(*this, o);
  if (n != o.n) return n < o.n;
  return k < o.k;
}

std::string MultiIndex::str() const {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < n.size(); ++i) out << (i ? "," : "") << n[i];
  out << ";";
  for (size_t i = 0; i < k.size(); ++i) out << (i ? "," : "") << k[i];
  out << ")";
  return out.str();
}

std::string SignedSite::str() const {
  return std::string(sign == Sign::plus ? "+" : "-") + site.str();
}

ResonantSet::ResonantSet(int d, int b, std::vector<std::vector<int>> spatial_modes)
    : d_(d), b_(b) {
  if (d < 1 || b < 1) throw std::invalid_argument("ResonantSet: d, b >= 1");
  if (static_cast<int>(spatial_modes.size()) != b)
    throw std::invalid_argument("ResonantSet: need exactly b spatial modes");
  for (int j = 0; j < b; ++j) {
    if (static_cast<int>(spatial_modes[j].size()) != d)
      throw std::invalid_argument("ResonantSet: spatial mode length != d");
    for (int l = 0; l < j; ++l)
      if (spatial_modes[l] == spatial_modes[j])
        throw std::invalid_argument("ResonantSet: spatial modes must be distinct");
    MultiIndex m;
    m.n = spatial_modes[j];
    m.k.assign(b, 0);
    m.k[j] = 1;
    modes_.push_back(std::move(m));
  }
}

bool ResonantSet::contains(const MultiIndex& x) const {
  return index_of(x) >= 0;
}

bool ResonantSet::minus_contains(const MultiIndex& x) const {
  return index_of(-x) >= 0;
}

int ResonantSet::index_of(const MultiIndex& x) const {
  for (int j = 0; j < b_; ++j)
    if (modes_[j] == x) return j;
  return -1;
}

long long Box::site_count(int d, int b) const {
  long long side = 2LL * radius - 1;
  long long c = 1;
  for (int i = 0; i < d + b; ++i) c *= side;
  return c;
}

double alpha_index_weight(const MultiIndex& x, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha_index_weight: alpha > 1");
  double w = 0.0;
  const double inv = 1.0 / alpha;
  for (int v : x.n) w += std::pow(std::abs(v), inv);
  for (int v : x.k) w += std::pow(std::abs(v), inv);
  return w;
}

std::vector<MultiIndex> enumerate_box(int N, int d, int b, long long enum_cap) {
  if (N < 1) throw std::invalid_argument("enumerate_box: N >= 1");
  const int dims = d + b;
  long long total = 1;
  for (int i = 0; i < dims; ++i) {
    total *= (2LL * N - 1);
    if (total > enum_cap)
      throw std::length_error("enumerate_box: site count exceeds cap");
  }
  std::vector<MultiIndex> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<int> c(dims, -(N - 1));
  for (;;) {
    MultiIndex m;
    m.n.assign(c.begin(), c.begin() + d);
    m.k.assign(c.begin() + d, c.end());
    out.push_back(std::move(m));
    int i = dims - 1;
    while (i >= 0) {
      if (++c[i] <= N - 1) break;
      c[i] = -(N - 1);
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

SiteClass classify_site(const MultiIndex& x, const ResonantSet& R) {
  if (R.contains(x)) return SiteClass::Q;
  if (R.minus_contains(x)) return SiteClass::MinusQ;
  return SiteClass::PAndPPrime;
}

bool region_contains(Region region, const MultiIndex& x, const ResonantSet& R,
                     int box_radius) {
  switch (region) {
    case Region::Q:
      return R.contains(x);
    case Region::P:
      return !R.contains(x);
    case Region::PPrime:
      return !R.minus_contains(x);
    case Region::PBox:
      return !R.contains(x) && x.sup_norm() < box_radius;
    case Region::PPrimeBox:
      return !R.minus_contains(x) && x.sup_norm() < box_radius;
  }
  return false;
}

}  // namespace cwb

#include <doctest.h>

#include <random>

#include "cwb/field.hpp"
#include "cwb/lattice.hpp"

using namespace cwb;

TEST_SUITE("lattice") {

TEST_CASE("alpha_index_weight exact integer roots") {
  MultiIndex x;
  x.n = {4};
  x.k = {9};
  CHECK(alpha_index_weight(x, 2.0) == doctest::Approx(5.0).epsilon(1e-12));

  MultiIndex zero;
  zero.n = {0, 0};
  zero.k = {0};
  CHECK(alpha_index_weight(zero, 3.7) == 0.0);

  MultiIndex y;
  y.n = {8};
  y.k = {1};
  CHECK(alpha_index_weight(y, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("alpha weight is zero iff the index is zero") {
  MultiIndex x;
  x.n = {0};
  x.k = {1};
  CHECK(alpha_index_weight(x, 2.0) > 0.0);
}

TEST_CASE("alpha weight sub-additivity on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> comp(-50, 50);
  std::uniform_real_distribution<double> alpha_dist(1.1, 4.0);
  for (int t = 0; t < 500; ++t) {
    MultiIndex x, y;
    x.n = {comp(rng), comp(rng)};
    x.k = {comp(rng)};
    y.n = {comp(rng), comp(rng)};
    y.k = {comp(rng)};
    const double alpha = alpha_dist(rng);
    CHECK(alpha_index_weight(x + y, alpha) <=
          alpha_index_weight(x, alpha) + alpha_index_weight(y, alpha) + 1e-12);
  }
}

TEST_CASE("enumerate_box counts and order") {
  CHECK(enumerate_box(1, 1, 1).size() == 1);
  CHECK(enumerate_box(1, 1, 1)[0].is_zero());
  CHECK(enumerate_box(2, 1, 1).size() == 9);
  CHECK(enumerate_box(2, 2, 1).size() == 27);

  const auto sites = enumerate_box(3, 1, 1);
  for (size_t i = 1; i < sites.size(); ++i) CHECK(sites[i - 1] < sites[i]);
  for (const auto& s : sites) CHECK(s.sup_norm() < 3);
}

TEST_CASE("enumerate_box size guard") {
  CHECK_THROWS_AS(enumerate_box(200, 3, 3), std::length_error);
}

TEST_CASE("classify_site partition") {
  const ResonantSet R(1, 2, {{1}, {3}});

  MultiIndex q1;
  q1.n = {1};
  q1.k = {1, 0};
  CHECK(classify_site(q1, R) == SiteClass::Q);

  MultiIndex mq;
  mq.n = {-1};
  mq.k = {-1, 0};
  CHECK(classify_site(mq, R) == SiteClass::MinusQ);

  MultiIndex origin;
  origin.n = {0};
  origin.k = {0, 0};
  CHECK(classify_site(origin, R) == SiteClass::PAndPPrime);

  // every box site lands in exactly one class and P u Q covers everything
  int nq = 0, nmq = 0, nboth = 0;
  for (const auto& x : enumerate_box(4, 1, 2)) {
    switch (classify_site(x, R)) {
      case SiteClass::Q: ++nq; break;
      case SiteClass::MinusQ: ++nmq; break;
      case SiteClass::PAndPPrime: ++nboth; break;
    }
    const bool in_p = region_contains(Region::P, x, R);
    const bool in_q = region_contains(Region::Q, x, R);
    CHECK(in_p != in_q);  // exact partition of the lattice
  }
  CHECK(nq == 2);
  CHECK(nmq == 2);
  CHECK(nq + nmq + nboth == 7 * 7 * 7);
}

TEST_CASE("resonant set validation") {
  CHECK_THROWS(ResonantSet(1, 2, {{1}, {1}}));  // duplicate spatial modes
  CHECK_THROWS(ResonantSet(2, 1, {{1}}));       // wrong arity
}

TEST_CASE("project_field regions") {
  const ResonantSet R(1, 1, {{1}});
  FourierField f(1, 1, Box{4});
  MultiIndex res;
  res.n = {1};
  res.k = {1};
  MultiIndex far;
  far.n = {3};
  far.k = {0};
  MultiIndex mid;
  mid.n = {0};
  mid.k = {2};
  f.set(res, {1.0, 0.0});
  f.set(far, {2.0, 0.0});
  f.set(mid, {0.0, 3.0});

  // field supported only on R projects to zero under P
  FourierField only_r(1, 1, Box{4});
  only_r.set(res, {1.0, 0.0});
  CHECK(project_field(only_r, Region::P, R).empty());

  // Q + P recovers the field
  const FourierField back =
      project_field(f, Region::Q, R).plus(project_field(f, Region::P, R));
  CHECK(back.entries().size() == f.entries().size());
  for (const auto& [x, c] : f.entries()) CHECK(back.at(x) == c);

  // single mode outside the box dies under the boxed projection
  FourierField one(1, 1, Box{4});
  one.set(far, {1.0, 0.0});
  CHECK(project_field(one, Region::PBox, R, 3).empty());

  // idempotence
  const FourierField p1 = project_field(f, Region::P, R);
  const FourierField p2 = project_field(p1, Region::P, R);
  CHECK(p1.entries() == p2.entries());

  // linearity spot check: projection of sum = sum of projections
  const FourierField sum = project_field(f.plus(one), Region::PPrime, R);
  const FourierField parts = project_field(f, Region::PPrime, R)
                                 .plus(project_field(one, Region::PPrime, R));
  for (const auto& [x, c] : sum.entries())
    CHECK(std::abs(c - parts.at(x)) == 0.0);
}

}  // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"

using namespace medjn;
using medjn::test::five_grid;
using medjn::test::two_point;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("build_space from coordinates and from a matrix") {
  const Space s = two_point();
  CHECK(s.size() == 2);
  CHECK(s.distance(0, 1) == 1.0);
  CHECK(s.total_measure() == 2.0);

  SpaceInput in;
  in.ids = {"a", "b"};
  in.weights = {1.0, 2.0};
  in.distances = {{0.0, 1.0}, {1.0, 0.0}};
  const Space m = Space::build(in);
  CHECK(m.total_measure() == 3.0);
  CHECK(m.index_of("b") == 1);
}

TEST_CASE("build_space rejects bad input") {
  SpaceInput zero;
  zero.ids = {"a", "b"};
  zero.weights = {1.0, 0.0};
  zero.coords = {{0.0}, {1.0}};
  CHECK(code_of([&] { (void)Space::build(zero); }) == ErrorCode::NonPositiveWeight);

  SpaceInput tri;
  tri.ids = {"a", "b", "c"};
  tri.weights = {1.0, 1.0, 1.0};
  tri.distances = {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
  CHECK(code_of([&] { (void)Space::build(tri); }) == ErrorCode::TriangleViolation);

  SpaceInput asym;
  asym.ids = {"a", "b"};
  asym.weights = {1.0, 1.0};
  asym.distances = {{0, 1}, {1.5, 0}};
  CHECK(code_of([&] { (void)Space::build(asym); }) == ErrorCode::AsymmetricMetric);

  SpaceInput near;
  near.ids = {"a", "b"};
  near.weights = {1.0, 1.0};
  near.distances = {{0, 1}, {1 + 1e-13, 0}};
  CHECK(Space::build(near).distance(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Space::build(near).distance(0, 1) == Space::build(near).distance(1, 0));
}

TEST_CASE("balls use the strict inequality") {
  const Space s = five_grid();
  CHECK(ball_at(s, 2, 1.0).members == PointSet{2});
  CHECK(ball_at(s, 2, 1.5).members == PointSet{1, 2, 3});
  CHECK(code_of([&] { (void)ball_at(s, 2, 0.0); }) == ErrorCode::NonPositiveRadius);
  CHECK(code_of([&] { (void)ball_at(s, 9, 1.0); }) == ErrorCode::UnknownCenter);
}

TEST_CASE("dilation") {
  const Space s = five_grid();
  const Ball b = ball_at(s, 2, 1.0);
  CHECK(dilate(s, b, 1.0).members == b.members);
  CHECK(dilate(s, b, 2.0).members == PointSet{1, 2, 3});
  CHECK(dilate(s, b, 5.0).members == PointSet{0, 1, 2, 3, 4});
  CHECK(code_of([&] { (void)dilate(s, b, 0.0); }) == ErrorCode::NonPositiveDilation);
  for (double a : {0.7, 1.3, 2.0, 3.1})
    for (double c : {0.5, 1.5, 2.5})
      CHECK(dilate(s, dilate(s, b, a), c).members == dilate(s, b, a * c).members);
}

TEST_CASE("canonical balls") {
  const Space s = two_point();
  const auto balls = canonical_balls(s);
  REQUIRE(balls.size() == 3);
  std::vector<PointSet> sets;
  for (const Ball& b : balls) sets.push_back(b.members);
  std::sort(sets.begin(), sets.end());
  CHECK(sets == std::vector<PointSet>{{0}, {0, 1}, {1}});

  CHECK(canonical_balls(medjn::test::line({0.0})).size() == 1);

  const Space g = five_grid();
  const auto gb = canonical_balls(g);
  CHECK(gb.size() <= 25);
  for (std::size_t i = 0; i < gb.size(); ++i)
    for (std::size_t j = i + 1; j < gb.size(); ++j) CHECK(gb[i].members != gb[j].members);

  // every ball_at matches exactly one canonical member set
  for (PointIndex c = 0; c < g.size(); ++c)
    for (double r : {0.5, 1.0, 1.2, 2.0, 2.7, 3.5, 4.0, 9.0}) {
      const auto m = ball_at(g, c, r).members;
      CHECK(std::count_if(gb.begin(), gb.end(), [&](const Ball& b) { return b.members == m; }) == 1);
    }

  const PointSet region{0, 1, 2};
  for (const Ball& b : canonical_balls(g, region)) CHECK(is_subset(b.members, region));
  CHECK(code_of([&] { (void)canonical_balls(g, PointSet{}); }) == ErrorCode::EmptyRegion);
}

TEST_CASE("monotone in the radius") {
  const Space g = grid_space(2, 4);
  for (PointIndex c = 0; c < g.size(); ++c)
    for (double r = 0.5; r < 6.0; r += 0.25)
      CHECK(is_subset(ball_at(g, c, r).members, ball_at(g, c, r + 0.25).members));
}

TEST_CASE("doubling constant") {
  CHECK(doubling_profile(medjn::test::line({0.0})).c_mu == kDoublingFloor);
  const auto two = doubling_profile(two_point());
  CHECK(two.c_mu == 2.0);
  CHECK(two.dimension == 1.0);
  const auto five = doubling_profile(five_grid());
  CHECK(five.c_mu == 3.0);
  CHECK(five.ratio_certificate.holds);
  CHECK(five.ratio_certificate.quadruples_checked > 0);
  CHECK(doubling_profile(dyadic_space(5)).c_mu == 2.0);
}

TEST_CASE("set helpers") {
  CHECK(is_subset({1, 3}, {0, 1, 2, 3}));
  CHECK_FALSE(is_subset({1, 4}, {0, 1, 2, 3}));
  CHECK(intersects({1, 5}, {5, 6}));
  CHECK_FALSE(intersects({1, 4}, {5, 6}));
  CHECK(set_union({1, 4}, {2, 4}) == PointSet{1, 2, 4});
  CHECK(set_intersection({1, 4, 7}, {2, 4, 7}) == PointSet{4, 7});
}

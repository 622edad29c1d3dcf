#include <doctest.h>

#include <cmath>
#include <set>

#include "medjn/error.hpp"
#include "medjn/generators.hpp"

using namespace medjn;

TEST_CASE("grid spaces") {
  const Space two = grid_space(1, 2);
  CHECK(two.size() == 2);
  CHECK(two.distance(0, 1) == 1.0);
  const Space sq = grid_space(2, 3, 0.5);
  CHECK(sq.size() == 9);
  CHECK(sq.distance(0, 8) == doctest::Approx(2.0 * std::sqrt(2.0) * 0.5).epsilon(1e-15));
  CHECK(sq.id(5) == "p1_2");
  CHECK(grid_space(2, 4, 1.0, WeightProfile::Normalized).total_measure() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)grid_space(3, 2), Error);
  const Space r1 = grid_space(1, 8, 1.0, WeightProfile::Random, 42);
  const Space r2 = grid_space(1, 8, 1.0, WeightProfile::Random, 42);
  for (PointIndex i = 0; i < 8; ++i) CHECK(r1.weight(i) == r2.weight(i));
}

TEST_CASE("dyadic spaces") {
  const Space d = dyadic_space(3);
  CHECK(d.size() == 8);
  CHECK(d.distance(0, 1) == 1.0);
  CHECK(d.distance(0, 2) == 2.0);
  CHECK(d.distance(3, 4) == 4.0);
}

TEST_CASE("canonical functions") {
  const Space s = grid_space(1, 64, 1.0 / 64.0);
  const auto log = canonical_function("log_blowup", s, {}, 0);
  for (PointIndex i = 0; i < 64; ++i) CHECK(log[i] == doctest::Approx(std::log(64.0 / (i + 1.0))).epsilon(1e-15));

  const auto one_step = canonical_function("step", s, {{"levels", 1.0}}, 0);
  CHECK(std::set<double>(one_step.values.begin(), one_step.values.end()).size() == 1);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tv = canonical_function("two_valued", s, {{"a", -1.0}, {"b", 2.0}}, seed);
    CHECK(std::set<double>(tv.values.begin(), tv.values.end()) == std::set<double>{-1.0, 2.0});
  }

  const auto pw = canonical_function("power", s, {{"beta", 0.5}}, 0);
  CHECK(pw[0] == doctest::Approx(8.0));
  for (double v : pw.values) CHECK(std::isfinite(v));

  for (const char* kind : {"log_blowup", "power", "step", "two_valued", "random_piecewise", "spike", "constant"}) {
    const auto a = canonical_function(kind, s, {}, 99);
    const auto b = canonical_function(kind, s, {}, 99);
    CHECK(a.values == b.values);
  }
  CHECK_THROWS_AS((void)canonical_function("wavelet", s, {}, 0), Error);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "medjn/error.hpp"
#include "medjn/oracles.hpp"

using namespace medjn;
using medjn::test::line;
using medjn::test::values;

TEST_CASE("maximal median examples") {
  // indicator of the right half, half/half weights
  const std::vector<double> chi{0.0, 0.0, 1.0, 1.0};
  const std::vector<double> w(4, 1.0);
  CHECK(maximal_median(chi, w, 0.5) == 1.0);

  for (double s : {0.1, 0.5, 1.0}) CHECK(maximal_median(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}, s) == 5.0);
  CHECK(maximal_median(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 2}, 0.5) == 3.0);

  const Space s = medjn::test::two_point();
  CHECK(maximal_median(s, values({0.0, 1.0}), s.all_points(), 0.5) == 1.0);
}

TEST_CASE("median errors") {
  const Space s = medjn::test::two_point();
  CHECK_THROWS_AS((void)maximal_median(s, values({0.0, 1.0}), PointSet{}, 0.5), Error);
  for (double bad : {0.0, -0.1, 1.5}) {
    try {
      (void)maximal_median(s, values({0.0, 1.0}), s.all_points(), bad);
      FAIL("accepted s = " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidS);
    }
  }
}

TEST_CASE("s-median certification") {
  const std::vector<double> w(4, 1.0);
  const WeightedSample chi{{0.0, 0.0, 1.0, 1.0}, w, 4.0};
  CHECK(is_s_median(0.5, chi, 0.5));
  CHECK(is_s_median(0.0, chi, 0.5));
  CHECK_FALSE(is_s_median(2.0, chi, 0.5));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0), wt(0.2, 2.0), sd(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    WeightedSample x;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) {
      x.values.push_back(std::round(u(rng) * 4) / 4);
      x.weights.push_back(wt(rng));
      x.total += x.weights.back();
    }
    const double s = sd(rng);
    const double m = maximal_median(x, s);
    CHECK(is_s_median(m, x, s));
    CHECK(m == oracle::maximal_median(x.values, x.weights, s));
  }
}

TEST_CASE("median oscillation examples") {
  const Space s = medjn::test::two_point();
  const auto osc = median_oscillation(s, values({0.0, 1.0}), s.all_points(), 0.5);
  CHECK(osc.value == 0.5);
  CHECK(osc.center == 0.5);

  const auto flat = median_oscillation(s, values({3.0, 3.0}), s.all_points(), 0.5);
  CHECK(flat.value == 0.0);
  CHECK(flat.center == 3.0);

  // two-valued, s > 1/2: the heavier value wins
  const Space l = line({0, 1, 2}, {1, 1, 2});
  CHECK(median_oscillation(l, values({0.0, 0.0, 7.0}), l.all_points(), 0.6).value == 0.0);
}

TEST_CASE("median oscillation against the candidate oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0), wt(0.1, 3.0), sd(0.02, 1.0);
  for (int i = 0; i < 300; ++i) {
    WeightedSample x;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) {
      x.values.push_back(u(rng));
      x.weights.push_back(wt(rng));
      x.total += x.weights.back();
    }
    const double s = sd(rng);
    const auto osc = median_oscillation(x, s);
    CHECK(osc.value == doctest::Approx(oracle::oscillation_candidates(x.values, x.weights, s)).epsilon(1e-12));
    CHECK(centered_median(x, osc.center, s) == doctest::Approx(osc.value).epsilon(1e-12));
  }
}

TEST_CASE("centered median matches the oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0), wt(0.5, 1.5), sd(0.05, 1.0);
  for (int i = 0; i < 200; ++i) {
    WeightedSample x;
    for (int k = 0; k < 6; ++k) {
      x.values.push_back(u(rng));
      x.weights.push_back(wt(rng));
      x.total += x.weights.back();
    }
    const double c = u(rng);
    const double s = sd(rng);
    CHECK(centered_median(x, c, s) == oracle::centered_median(x.values, x.weights, c, s));
  }
}

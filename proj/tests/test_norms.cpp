#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"
#include "medjn/norms.hpp"
#include "medjn/oracles.hpp"
#include "medjn/packing.hpp"

using namespace medjn;
using medjn::test::line;
using medjn::test::two_point;
using medjn::test::values;

TEST_CASE("lp and weak lp norms") {
  const Space s = two_point();
  CHECK(lp_norm(s, values({0.0, 0.0}), s.all_points(), 2.0) == 0.0);
  CHECK(lp_norm(s, values({3.0, 4.0}), s.all_points(), 2.0) == 5.0);
  const Space one = line({0.0}, {2.0});
  CHECK(lp_norm(one, values({3.0}), one.all_points(), 1.0) == 6.0);

  const std::vector<double> g{2.0, 1.0};
  CHECK(weak_lp_norm(s, g, s.all_points(), 2.0) == 2.0);
  CHECK(weak_lp_norm(s, std::vector<double>{0.0, 0.0}, s.all_points(), 2.0) == 0.0);
  const Space l = line({0, 1, 2}, {1.0, 2.0, 0.5});
  CHECK(weak_lp_norm(l, std::vector<double>{-3.0, 3.0, 3.0}, l.all_points(), 2.0) ==
        doctest::Approx(3.0 * std::sqrt(3.5)));
}

TEST_CASE("integral oscillation") {
  const Space s = two_point();
  CHECK(integral_oscillation(s, values({2.0, 2.0}), s.all_points(), 1.5).value == 0.0);
  CHECK(integral_oscillation(s, values({0.0, 1.0}), s.all_points(), 1.0).value == 0.5);
  const auto sq = integral_oscillation(s, values({0.0, 1.0}), s.all_points(), 2.0);
  CHECK(sq.value == doctest::Approx(0.25).epsilon(1e-14));
  // the objective is flat to rounding within ~1e-8 of the minimizer
  CHECK(sq.center == doctest::Approx(0.5).epsilon(1e-7));
  CHECK_THROWS_AS((void)integral_oscillation(s, values({0.0, 1.0}), s.all_points(), 0.0), Error);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0), wt(0.1, 2.0);
  for (int i = 0; i < 100; ++i) {
    WeightedSample x;
    for (int k = 0; k < 7; ++k) {
      x.values.push_back(u(rng));
      x.weights.push_back(wt(rng));
      x.total += x.weights.back();
    }
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
      const double got = integral_oscillation(x, q).value;
      const double want = oracle::integral_grid_scan(x.values, x.weights, q, 101);
      CHECK(got <= want * (1 + 1e-9));
      CHECK(got >= want * (1 - 1e-8));
    }
  }
}

TEST_CASE("bmo norm") {
  const Space s = two_point();
  CHECK(bmo_median_norm(s, values({1.0, 1.0}), s.all_points(), 0.5) == 0.0);
  CHECK(bmo_median_norm(s, values({0.0, 1.0}), s.all_points(), 0.5) == 0.5);

  // indicator of one point in a 3-point space, against exhaustive enumeration
  const Space t = line({0, 1, 2});
  const auto f = values({0.0, 1.0, 0.0});
  for (double sv : {0.2, 0.34, 0.5}) {
    double want = 0.0;
    for (const Ball& b : canonical_balls(t)) {
      const auto x = WeightedSample::gather(t, f.values, b.members);
      want = std::max(want, oracle::oscillation_candidates(x.values, x.weights, sv));
    }
    CHECK(bmo_median_norm(t, f, t.all_points(), sv) == want);
  }
}

TEST_CASE("two-point JN norms") {
  const Space s = two_point();
  const auto f = values({0.0, 1.0});
  const auto m = jn_median_norm(s, f, s.all_points(), 2.0, 0.5);
  CHECK(m.norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  REQUIRE(m.packing.balls.size() == 1);
  CHECK(m.packing.balls[0].ball.members == PointSet{0, 1});
  CHECK(m.exact);
  CHECK(jn_integral_norm(s, f, s.all_points(), 2.0, 1.0).norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  const auto c = jn_median_norm(s, values({4.0, 4.0}), s.all_points(), 2.0, 0.5);
  CHECK(c.norm == 0.0);
  CHECK(c.packing.balls.empty());
}

TEST_CASE("norm argument checks") {
  const Space s = two_point();
  const auto f = values({0.0, 1.0});
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;
  };
  CHECK(code([&] { (void)jn_median_norm(s, f, {}, 2.0, 0.5); }) == ErrorCode::EmptyRegion);
  CHECK(code([&] { (void)jn_median_norm(s, f, s.all_points(), 1.0, 0.5); }) == ErrorCode::InvalidParams);
  CHECK(code([&] { (void)jn_median_norm(s, f, s.all_points(), 2.0, 0.7); }) == ErrorCode::InvalidS);
  CHECK(code([&] { (void)jn_integral_norm(s, f, s.all_points(), 2.0, 2.0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("exact mode refuses oversized searches unless forced") {
  const Space s = grid_space(2, 6);
  const auto f = canonical_function("random_piecewise", s, {{"pieces", 6.0}}, 4);
  PackingOptions tight{PackingMode::Exact};
  tight.branch_and_bound_limit = 4;
  tight.state_budget = 10;
  CHECK_THROWS_AS((void)jn_median_norm(s, f, s.all_points(), 2.0, 0.5, tight), Error);
  PackingOptions automatic = tight;
  automatic.mode = PackingMode::Auto;
  const auto greedy = jn_median_norm(s, f, s.all_points(), 2.0, 0.5, automatic);
  CHECK_FALSE(greedy.exact);
  PackingOptions forced = tight;
  forced.force = true;
  const auto exact = jn_median_norm(s, f, s.all_points(), 2.0, 0.5, forced);
  CHECK(exact.exact);
  CHECK(greedy.norm <= exact.norm * (1 + 1e-12));
}

TEST_CASE("packing solvers agree with exhaustive enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> wt(0.0, 5.0);
  for (int inst = 0; inst < 300; ++inst) {
    const std::size_t universe = 3 + rng() % 8;
    const std::size_t count = 1 + rng() % 12;
    std::vector<PackingItem> items;
    for (std::size_t i = 0; i < count; ++i) {
      PackingItem it;
      for (PointIndex p = 0; p < universe; ++p)
        if (rng() % 3 == 0) it.members.push_back(p);
      if (it.members.empty()) it.members.push_back(rng() % universe);
      it.weight = wt(rng);
      items.push_back(std::move(it));
    }
    const double best = oracle::exhaustive_packing(items);
    const auto bb = pack_branch_and_bound(items);
    const auto fr = pack_frontier(items, universe, 1'000'000);
    const auto gr = pack_greedy(items);
    CHECK(bb.optimal);
    CHECK(fr.optimal);
    CHECK(bb.total == doctest::Approx(best).epsilon(1e-12));
    CHECK(fr.total == doctest::Approx(best).epsilon(1e-12));
    CHECK(gr.total <= best * (1 + 1e-12));
    for (std::size_t a = 0; a < bb.chosen.size(); ++a)
      for (std::size_t b = a + 1; b < bb.chosen.size(); ++b)
        CHECK_FALSE(intersects(items[bb.chosen[a]].members, items[bb.chosen[b]].members));
  }
}

TEST_CASE("norm chain and BMO bound") {
  std::mt19937_64 rng(23);
  for (int inst = 0; inst < 40; ++inst) {
    const Space s = grid_space(1, 3 + rng() % 5, 1.0, WeightProfile::Random, rng());
    const auto f = canonical_function("random_piecewise", s, {}, rng());
    const auto region = s.all_points();
    for (double sv : {0.1, 0.25, 0.5}) {
      const double med = jn_median_norm(s, f, region, 2.0, sv).norm;
      const double integ = jn_integral_norm(s, f, region, 2.0, 1.0).norm;
      CHECK(sv * med <= integ * (1 + 1e-12));
      CHECK(integ <= lp_norm(s, f, region, 2.0) * (1 + 1e-12));
      CHECK(med <= std::sqrt(s.total_measure()) * bmo_median_norm(s, f, region, sv) * (1 + 1e-12));
    }
  }
}

TEST_CASE("centered sandwich") {
  std::mt19937_64 rng(29);
  for (int inst = 0; inst < 30; ++inst) {
    const Space s = grid_space(1, 3 + rng() % 3, 1.0, WeightProfile::Random, rng());
    const auto f = canonical_function("random_piecewise", s, {}, rng());
    const auto region = s.all_points();
    const double sv = 0.2;
    const double t = 0.4;
    const double plain = jn_median_norm(s, f, region, 2.0, sv).norm;
    const double centered = jn_median_centered(s, f, region, 2.0, sv, t).norm;
    CHECK(plain <= centered * (1 + 1e-12));
    CHECK(centered * centered <= 4.0 * plain * plain * (1 + 1e-12));
  }
}

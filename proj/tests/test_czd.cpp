#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "medjn/czd.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"

using namespace medjn;
using medjn::test::values;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Parse;
}

// 64-point dyadic space, B0 = {p0, p1}, eta = 16: the dilated base is the
// whole space and a spike at p0 clears the threshold.
struct SpikeFixture {
  Space space = dyadic_space(6);
  SampleFunction f = canonical_function("spike", space, {{"height", 8.0}, {"at", 0.0}}, 0);
  CZParams params = make_cz_params(space, ball_at(space, 0, 2.0), 16.0, 2.0);
};

}  // namespace

TEST_CASE("constants") {
  DoublingProfile two{2.0, 1.0, {}};
  CHECK(alpha_of(two, 1.0) == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(alpha_of(two, 1e9) == doctest::Approx(20.0).epsilon(1e-8));
  CHECK(alpha_of(two, 2.0) < alpha_of(two, 1.0));
  DoublingProfile four{4.0, 2.0, {}};
  CHECK(alpha_of(four, 1.0) == doctest::Approx(1600.0).epsilon(1e-15));
  CHECK(s0_of(two, 40.0) == doctest::Approx(1.0 / 80.0));
  CHECK(s0_of(four, 1600.0) == doctest::Approx(1.0 / 3200.0));
  // 2^5 2^6 / (sqrt 2 - 1)^2
  const double c = local_jn_constant(2.0, 2.0);
  CHECK(c == doctest::Approx(2048.0 / std::pow(std::sqrt(2.0) - 1.0, 2)).epsilon(1e-14));
  CHECK(c == doctest::Approx(11936.618751).epsilon(1e-9));
}

TEST_CASE("cz family") {
  const Space s = medjn::test::two_point();
  const Ball pair = ball_at(s, 0, 1.0 + 1.0 / 1048576.0);
  CHECK(cz_family(s, pair, 1.0).size() == 3);
  for (const Ball& b : cz_family(s, pair, 0.5)) CHECK(b.members.size() == 1);
  CHECK_THROWS_AS((void)cz_family(s, Ball{}, 1.0), Error);

  // against direct enumeration on the 5-point grid
  const Space g = medjn::test::five_grid();
  const Ball base = ball_at(g, 2, 1.5);
  const auto fam = cz_family(g, base, 5.0);
  std::vector<PointSet> want;
  for (PointIndex c : base.members)
    for (double r = 0.25; r <= 7.5; r += 0.25) {
      const auto m = ball_at(g, c, r).members;
      if (std::find(want.begin(), want.end(), m) == want.end()) want.push_back(m);
    }
  CHECK(fam.size() == want.size());
  for (const Ball& b : fam) {
    CHECK(std::find(want.begin(), want.end(), b.members) != want.end());
    CHECK(b.radius <= 7.5);
    CHECK(base.contains(b.center));
  }
}

TEST_CASE("maximal functions") {
  const Space s = medjn::test::five_grid();
  const std::vector<Ball> singles{ball_at(s, 1, 0.5), ball_at(s, 2, 0.5)};
  const auto f = values({4.0, -3.0, 2.0, 7.0, 1.0});
  CHECK(median_maximal(s, f, 0, singles, 0.5) == 0.0);
  CHECK(median_maximal(s, f, 1, singles, 0.5) == 3.0);
  CHECK(median_maximal(s, f, 2, singles, 0.5) == 2.0);
  const std::vector<Ball> one{ball_at(s, 2, 1.5)};
  CHECK(median_maximal(s, values({5, 5, 5, 5, 5}), 2, one, 0.5) == 5.0);
  CHECK(sharp_maximal(s, values({5, 5, 5, 5, 5}), 2, one, 0.5, 4.0) == 0.0);
  CHECK(sharp_maximal(s, f, 0, one, 0.5, 4.0) == 0.0);

  const Space two = medjn::test::two_point();
  const std::vector<Ball> pair{ball_at(two, 0, 2.0)};
  // m^{1/2}_f = 1, so |f - 1| = {1, 0} and its 1/8-median is 1
  CHECK(sharp_maximal(two, values({0.0, 1.0}), 0, pair, 0.5, 4.0) == 1.0);
}

TEST_CASE("cz decomposition on a spike") {
  SpikeFixture fx;
  const CZContext ctx(fx.space, fx.f, fx.params);
  CHECK(ctx.threshold() == 0.0);
  const auto d = cz_decompose(ctx, 4.0);
  CHECK(d.certificate.all());
  REQUIRE(d.balls.size() == 1);
  CHECK(d.balls[0].members == PointSet{0, 1});
  CHECK(d.level_set == PointSet{0, 1});
  CHECK(code_of([&] { (void)cz_decompose(ctx, 8.0); }) == ErrorCode::EmptyLevelSet);

  // raising the background above lambda breaks the threshold hypothesis
  auto g = fx.f;
  for (double& v : g.values) v += 3.0;
  const CZContext high(fx.space, g, fx.params);
  CHECK(code_of([&] { (void)cz_decompose(high, 2.0); }) == ErrorCode::ThresholdViolated);
}

TEST_CASE("nested decompositions") {
  SpikeFixture fx;
  const CZContext ctx(fx.space, fx.f, fx.params);
  for (double low : {2.0, 4.0}) {
    const auto n = cz_nested(ctx, low, 4.0);
    CHECK(n.total());
    CHECK(n.low.certificate.all());
    CHECK(n.high.certificate.all());
    CHECK(is_subset(n.high.level_set, n.low.level_set));
  }
}

TEST_CASE("good lambda") {
  SpikeFixture fx;
  const double s = fx.params.t / fx.params.beta;
  const auto r = good_lambda_sides(fx.space, fx.f, fx.params, s, 2.0);
  CHECK(r.pass);
  CHECK(r.lhs <= r.rhs);
  CHECK(code_of([&] { (void)good_lambda_sides(fx.space, fx.f, fx.params, s, 7.0); }) ==
        ErrorCode::PreconditionViolated);
  CHECK(code_of([&] { (void)good_lambda_sides(fx.space, fx.f, fx.params, 2 * s, 2.0); }) ==
        ErrorCode::PreconditionViolated);
  const auto flat = canonical_function("constant", fx.space, {{"value", 1.0}}, 0);
  CHECK(code_of([&] { (void)good_lambda_sides(fx.space, flat, fx.params, s, 0.5); }) ==
        ErrorCode::PreconditionViolated);
}

TEST_CASE("lambda grids") {
  const auto g = LambdaGrid::parse("log:1:100:3");
  REQUIRE(g.values.size() == 3);
  CHECK(g.values[0] == doctest::Approx(1.0));
  CHECK(g.values[1] == doctest::Approx(10.0));
  CHECK(g.values[2] == doctest::Approx(100.0));
  CHECK(LambdaGrid::parse("list:0.5,2,3").values == std::vector<double>{0.5, 2.0, 3.0});
  for (const char* bad : {"log:1:2", "lin:1:2:3", "list:", "list:a", "log:2:1:0"})
    CHECK_THROWS_AS((void)LambdaGrid::parse(bad), Error);
}

TEST_CASE("local John-Nirenberg on the logarithm") {
  const Space s = grid_space(1, 64, 1.0 / 64.0);
  const auto f = canonical_function("log_blowup", s, {}, 0);
  const auto prm = make_cz_params(s, ball_at(s, 15, 16.5 / 64.0), 1.0, 2.0);
  CHECK(prm.base.members.size() == 32);
  const auto rep = local_jn_verify(s, f, prm, prm.s0, 0.5, std::nullopt, {PackingMode::Exact});
  CHECK(rep.norm_exact);
  CHECK(rep.entries.size() == 50);
  CHECK(rep.pass);
  CHECK(rep.trivial_pass);
  for (const auto& e : rep.entries) CHECK(e.lhs <= e.rhs);
  CHECK(code_of([&] { (void)local_jn_verify(s, f, prm, 2 * prm.s0, 0.5); }) == ErrorCode::InvalidS);
  CHECK(code_of([&] { (void)local_jn_verify(s, f, prm, prm.s0, 0.7); }) == ErrorCode::InvalidCenterLevel);

  const auto flat = canonical_function("constant", s, {}, 0);
  const auto r0 = local_jn_verify(s, flat, prm, prm.s0, 0.5);
  CHECK(r0.pass);
  for (const auto& e : r0.entries) CHECK(e.lhs == 0.0);
}

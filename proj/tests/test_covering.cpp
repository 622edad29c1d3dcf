#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "medjn/covering.hpp"
#include "medjn/error.hpp"
#include "medjn/generators.hpp"

using namespace medjn;

namespace {

void check_cover(const Space& s, const std::vector<Ball>& family, const CoverResult& cover) {
  for (std::size_t a = 0; a < cover.selected.size(); ++a)
    for (std::size_t b = a + 1; b < cover.selected.size(); ++b)
      CHECK_FALSE(intersects(family[cover.selected[a]].members, family[cover.selected[b]].members));
  REQUIRE(cover.covered_by.size() == family.size());
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Ball& sel = family[cover.selected[cover.covered_by[k]]];
    CHECK(is_subset(family[k].members, dilate(s, sel, 5.0).members));
    const Ball& killer = family[cover.selected[cover.discarded_by[k]]];
    CHECK(intersects(killer.members, family[k].members));
    CHECK(killer.radius >= family[k].radius);
  }
}

}  // namespace

TEST_CASE("five cover examples") {
  const Space s = medjn::test::line({0.0, 1.0, 10.0});
  const std::vector<Ball> one{ball_at(s, 0, 3.0)};
  const auto single = five_cover(s, one);
  CHECK(single.selected == std::vector<std::size_t>{0});

  const std::vector<Ball> disjoint{ball_at(s, 0, 0.5), ball_at(s, 2, 0.5)};
  CHECK(five_cover(s, disjoint).selected.size() == 2);

  const std::vector<Ball> fam{ball_at(s, 0, 3.0), ball_at(s, 1, 1.0), ball_at(s, 2, 1.0)};
  const auto cover = five_cover(s, fam);
  CHECK(cover.selected == std::vector<std::size_t>{0, 2});
  CHECK(is_subset(fam[1].members, dilate(s, fam[0], 5.0).members));
  check_cover(s, fam, cover);

  CHECK_THROWS_AS((void)five_cover(s, std::vector<Ball>{}), Error);
}

TEST_CASE("five cover on random families") {
  std::mt19937_64 rng(31);
  const Space s = grid_space(2, 6);
  std::uniform_real_distribution<double> r(0.5, 3.0);
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<Ball> fam;
    const std::size_t n = 1 + rng() % 15;
    for (std::size_t i = 0; i < n; ++i) fam.push_back(ball_at(s, rng() % s.size(), r(rng)));
    const auto a = five_cover(s, fam);
    check_cover(s, fam, a);
    CHECK(five_cover(s, fam).selected == a.selected);
  }
}

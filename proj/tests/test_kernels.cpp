#include <doctest.h>

#include <cmath>
#include <random>

#include "medjn/generators.hpp"
#include "medjn/kernels.hpp"
#include "medjn/median.hpp"
#include "medjn/norms.hpp"

using namespace medjn;

namespace {

struct BackendGuard {
  kernels::Backend saved = kernels::active().backend;
  ~BackendGuard() { kernels::set_backend(saved); }
};

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels") {
  const auto& k = kernels::scalar_table();
  const std::vector<double> v{1.0, -2.0, 3.0, 0.5};
  const std::vector<double> w{1.0, 2.0, 0.5, 4.0};
  CHECK(k.mass_above(v, w, 0.75) == 1.5);
  CHECK(k.mass_below(v, w, 0.75) == 6.0);
  CHECK(k.weighted_sum(v, w) == 0.5);
  CHECK(k.weighted_abs_pow_sum(v, w, 0.0, 1.0) == 8.5);
  CHECK(k.weighted_abs_pow_sum(v, w, 1.0, 2.0) == 1.0 * 0 + 2.0 * 9 + 0.5 * 4 + 4.0 * 0.25);
  CHECK(k.weighted_abs_pow_sum(v, w, 0.0, 3.0) == doctest::Approx(1 + 16 + 13.5 + 0.5));
  std::vector<double> out(4);
  k.abs_deviation(v, 1.0, out);
  CHECK(out == std::vector<double>{0.0, 3.0, 2.0, 0.5});
}

TEST_CASE("AVX2 kernels agree with scalar kernels") {
  const kernels::KernelTable* avx = kernels::avx2_table();
  if (avx == nullptr) {
    MESSAGE("AVX2 backend unavailable; nothing to compare");
    return;
  }
  const auto& sc = kernels::scalar_table();
  std::mt19937_64 rng(3);
  for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1001}) {
    const auto v = random_vec(rng, n, -10.0, 10.0);
    const auto w = random_vec(rng, n, 0.1, 2.0);
    // weights that are multiples of 1/8 make every partial sum exact
    std::vector<double> wd(n);
    for (std::size_t i = 0; i < n; ++i) wd[i] = std::round(w[i] * 8.0) / 8.0 + 0.125;
    for (double t : {-20.0, -1.0, 0.0, 0.3, 5.0, 20.0}) {
      CHECK(avx->mass_above(v, wd, t) == sc.mass_above(v, wd, t));
      CHECK(avx->mass_below(v, wd, t) == sc.mass_below(v, wd, t));
      CHECK(avx->mass_above(v, w, t) == doctest::Approx(sc.mass_above(v, w, t)).epsilon(1e-13));
    }
    CHECK(avx->weighted_sum(v, w) == doctest::Approx(sc.weighted_sum(v, w)).epsilon(1e-12).scale(1.0));
    for (double q : {0.5, 1.0, 1.5, 2.0, 3.0})
      for (double c : {-1.0, 0.0, 2.5})
        CHECK(avx->weighted_abs_pow_sum(v, w, c, q) ==
              doctest::Approx(sc.weighted_abs_pow_sum(v, w, c, q)).epsilon(1e-12));
    std::vector<double> a(n), b(n);
    avx->abs_deviation(v, 1.25, a);
    sc.abs_deviation(v, 1.25, b);
    CHECK(a == b);
  }
}

TEST_CASE("norms are backend independent") {
  if (kernels::avx2_table() == nullptr) return;
  BackendGuard guard;
  const Space space = grid_space(1, 12);
  const auto f = canonical_function("random_piecewise", space, {}, 9);
  const auto region = space.all_points();
  auto run = [&] {
    return std::vector<double>{jn_median_norm(space, f, region, 2.0, 0.5).norm,
                               jn_integral_norm(space, f, region, 2.0, 1.0).norm,
                               jn_integral_norm(space, f, region, 3.0, 1.5, {PackingMode::Auto}).norm,
                               bmo_median_norm(space, f, region, 0.25), lp_norm(space, f, region, 2.0)};
  };
  REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
  const auto scalar = run();
  REQUIRE(kernels::set_backend(kernels::Backend::Avx2));
  const auto vec = run();
  for (std::size_t i = 0; i < scalar.size(); ++i) CHECK(vec[i] == doctest::Approx(scalar[i]).epsilon(1e-12));
}

TEST_CASE("backend names") {
  CHECK(kernels::backend_name(kernels::Backend::Scalar) == "scalar");
  CHECK(kernels::backend_name(kernels::Backend::Avx2) == "avx2");
}

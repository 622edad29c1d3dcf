#include "medjn/generators.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "medjn/error.hpp"

namespace medjn {

namespace {

double param(const FunctionParams& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<double> make_weights(std::size_t n, WeightProfile profile, std::uint64_t seed) {
  std::vector<double> w(n, 1.0);
  switch (profile) {
    case WeightProfile::Uniform:
      break;
    case WeightProfile::Normalized:
      for (double& x : w) x = 1.0 / static_cast<double>(n);
      break;
    case WeightProfile::Random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(0.5, 1.5);
      for (double& x : w) x = dist(rng);
      break;
    }
  }
  return w;
}

std::size_t block_of(std::size_t i, std::size_t n, std::size_t blocks) { return i * blocks / n; }

}  // namespace

WeightProfile parse_weight_profile(std::string_view name) {
  if (name == "uniform") return WeightProfile::Uniform;
  if (name == "normalized") return WeightProfile::Normalized;
  if (name == "random") return WeightProfile::Random;
  throw Error(ErrorCode::UnknownKind, "unknown weight profile '" + std::string(name) + "'");
}

std::string_view to_string(WeightProfile profile) noexcept {
  switch (profile) {
    case WeightProfile::Uniform: return "uniform";
    case WeightProfile::Normalized: return "normalized";
    case WeightProfile::Random: return "random";
  }
  return "uniform";
}

Space grid_space(int dim, std::size_t n, double spacing, WeightProfile profile, std::uint64_t seed) {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidDim, "grid dimension must be 1 or 2");
  if (n == 0) throw Error(ErrorCode::InvalidParams, "grid needs at least one point per axis");
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidParams, "grid spacing must be positive");
  SpaceInput in;
  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      in.ids.push_back("p" + std::to_string(i));
      in.coords.push_back({static_cast<double>(i) * spacing});
    }
  } else {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        in.ids.push_back("p" + std::to_string(r) + "_" + std::to_string(c));
        in.coords.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
      }
  }
  in.weights = make_weights(in.ids.size(), profile, seed);
  return Space::build(std::move(in));
}

Space dyadic_space(unsigned levels, WeightProfile profile, std::uint64_t seed) {
  if (levels > 10) throw Error(ErrorCode::InvalidParams, "dyadic space limited to 10 levels");
  const std::size_t n = std::size_t{1} << levels;
  SpaceInput in;
  in.distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    in.ids.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) in.distances[i][j] = std::ldexp(1.0, static_cast<int>(std::bit_width(i ^ j)) - 1);
  }
  in.weights = make_weights(n, profile, seed);
  return Space::build(std::move(in));
}

SampleFunction canonical_function(std::string_view kind, const Space& space, const FunctionParams& params,
                                  std::uint64_t seed) {
  const std::size_t n = space.size();
  const double dn = static_cast<double>(n);
  SampleFunction f;
  f.values.resize(n);
  std::mt19937_64 rng(seed);

  if (kind == "log_blowup") {
    for (std::size_t i = 0; i < n; ++i) f.values[i] = std::log(dn / static_cast<double>(i + 1));
  } else if (kind == "power") {
    const double beta = param(params, "beta", 0.5);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = std::pow(static_cast<double>(i + 1) / dn, -beta);
  } else if (kind == "step") {
    const auto levels = static_cast<std::size_t>(std::max(1.0, param(params, "levels", 2.0)));
    for (std::size_t i = 0; i < n; ++i) f.values[i] = static_cast<double>(block_of(i, n, levels));
  } else if (kind == "two_valued") {
    const double a = param(params, "a", 0.0);
    const double b = param(params, "b", 1.0);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = coin(rng) ? b : a;
    if (n >= 2) {
      // force both values to appear
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (j == i) j = (i + 1) % n;
      f.values[i] = a;
      f.values[j] = b;
    }
  } else if (kind == "random_piecewise") {
    const auto pieces = static_cast<std::size_t>(std::max(1.0, param(params, "pieces", 4.0)));
    std::uniform_real_distribution<double> dist(param(params, "lo", 0.0), param(params, "hi", 1.0));
    std::vector<double> levels(pieces);
    for (double& v : levels) v = dist(rng);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = levels[block_of(i, n, pieces)];
  } else if (kind == "spike") {
    const double base = param(params, "base", 0.0);
    const double height = param(params, "height", 10.0);
    const auto at = static_cast<std::size_t>(param(params, "at", static_cast<double>(n / 2)));
    if (at >= n) throw Error(ErrorCode::UnknownPoint, "spike position outside the space");
    for (double& v : f.values) v = base;
    f.values[at] = height;
  } else if (kind == "constant") {
    for (double& v : f.values) v = param(params, "value", 1.0);
  } else {
    throw Error(ErrorCode::UnknownKind, "unknown function kind '" + std::string(kind) + "'");
  }
  return f;
}

}  // namespace medjn

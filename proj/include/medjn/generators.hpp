#pragma once

// Desk-scale spaces and sample functions for tests, fixtures and the
// acceptance suite. Everything is deterministic in its arguments.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "medjn/median.hpp"
#include "medjn/space.hpp"

namespace medjn {

enum class WeightProfile { Uniform, Normalized, Random };

[[nodiscard]] WeightProfile parse_weight_profile(std::string_view name);
[[nodiscard]] std::string_view to_string(WeightProfile profile) noexcept;

// n points per axis at coordinates k * spacing (dim 1) or a row-major n x n
// lattice (dim 2). Random weights are drawn from [0.5, 1.5].
[[nodiscard]] Space grid_space(int dim, std::size_t n, double spacing = 1.0,
                               WeightProfile profile = WeightProfile::Uniform, std::uint64_t seed = 0);

// 2^levels leaves of a binary tree, d(i, j) = 2^(h - 1) where h is the bit
// length of i xor j. Uniform weights give doubling constant exactly 2.
[[nodiscard]] Space dyadic_space(unsigned levels, WeightProfile profile = WeightProfile::Uniform,
                                 std::uint64_t seed = 0);

using FunctionParams = std::map<std::string, double, std::less<>>;

// Kinds, with their parameters and defaults:
//   log_blowup        log(1/x), x = (i+1)/n
//   power             x^-beta, x = (i+1)/n          beta = 0.5
//   step              levels equal blocks, value k  levels = 2
//   two_valued        random a/b, both present      a = 0, b = 1
//   random_piecewise  pieces blocks, uniform values pieces = 4, lo = 0, hi = 1
//   spike             height at point index, else base  height = 10, at = n/2, base = 0
//   constant          value                         value = 1
// Point i is the i-th point in space order.
[[nodiscard]] SampleFunction canonical_function(std::string_view kind, const Space& space,
                                                const FunctionParams& params = {}, std::uint64_t seed = 0);

}  // namespace medjn

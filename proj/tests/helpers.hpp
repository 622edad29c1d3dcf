#pragma once

#include <string>
#include <vector>

#include "medjn/median.hpp"
#include "medjn/space.hpp"

namespace medjn::test {

inline Space line(const std::vector<double>& xs, std::vector<double> weights = {}) {
  SpaceInput in;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    in.ids.push_back("p" + std::to_string(i));
    in.coords.push_back({xs[i]});
  }
  in.weights = weights.empty() ? std::vector<double>(xs.size(), 1.0) : std::move(weights);
  return Space::build(std::move(in));
}

inline Space two_point() { return line({0.0, 1.0}); }

inline Space five_grid() { return line({0.0, 1.0, 2.0, 3.0, 4.0}); }

inline SampleFunction values(std::vector<double> v) { return SampleFunction{std::move(v)}; }

}  // namespace medjn::test

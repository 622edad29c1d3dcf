#pragma once

// Greedy 5-covering: from a finite family of balls select a pairwise
// disjoint subfamily whose 5-dilates cover every ball of the family.

#include <cstddef>
#include <span>
#include <vector>

#include "medjn/space.hpp"

namespace medjn {

struct CoverResult {
  std::vector<std::size_t> selected;  // indices into the input, in selection order
  // For every input ball, the position in `selected` of a ball whose
  // 5-dilate contains it.
  std::vector<std::size_t> covered_by;
  // For every input ball, the position in `selected` of the ball that
  // discarded it (itself when selected).
  std::vector<std::size_t> discarded_by;
};

// Repeatedly selects the remaining ball of largest radius (ties: smaller
// center id, then input order) and discards every remaining ball sharing a
// point with it. Throws EmptyFamily for an empty input.
[[nodiscard]] CoverResult five_cover(const Space& space, std::span<const Ball> balls);

}  // namespace medjn

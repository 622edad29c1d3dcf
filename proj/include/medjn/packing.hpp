#pragma once

// Maximum-weight packing of pairwise-disjoint point sets.
//
// Every John-Nirenberg functional is a supremum over disjoint ball
// collections of a sum of nonnegative per-ball terms; on a finite space this
// is a weighted set-packing problem over the canonical balls.

#include <cstddef>
#include <span>
#include <vector>

#include "medjn/space.hpp"

namespace medjn {

struct PackingItem {
  PointSet members;
  double weight = 0.0;  // nonnegative
};

struct PackingSolution {
  std::vector<std::size_t> chosen;  // indices into the item list, ascending
  double total = 0.0;
  bool optimal = false;
  std::size_t nodes = 0;  // search nodes or memo states visited
};

// Include/exclude search over items sorted by weight (descending). A node is
// pruned when its weight plus the total weight of the remaining items that
// are still disjoint from the current selection cannot beat the incumbent.
[[nodiscard]] PackingSolution pack_branch_and_bound(std::span<const PackingItem> items);

// Exact search that decides points in index order: the lowest undecided point
// is either left uncovered or covered by an item whose smallest member it is.
// Subproblems are memoized on (point, covered points ahead). Returns
// optimal == false if more than `state_budget` states would be needed.
[[nodiscard]] PackingSolution pack_frontier(std::span<const PackingItem> items, std::size_t n_points,
                                            std::size_t state_budget);

// Repeatedly takes the heaviest item disjoint from those already taken.
[[nodiscard]] PackingSolution pack_greedy(std::span<const PackingItem> items);

}  // namespace medjn

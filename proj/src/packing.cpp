#include "medjn/packing.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace medjn {

namespace {

using Bits = std::vector<std::uint64_t>;

std::size_t points_spanned(std::span<const PackingItem> items) {
  std::size_t n = 0;
  for (const auto& it : items)
    if (!it.members.empty()) n = std::max(n, it.members.back() + 1);
  return n;
}

Bits to_bits(const PointSet& set, std::size_t words) {
  Bits b(words, 0);
  for (PointIndex p : set) b[p / 64] |= std::uint64_t{1} << (p % 64);
  return b;
}

bool disjoint(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return false;
  return true;
}

std::vector<std::size_t> by_weight_desc(std::span<const PackingItem> items) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].weight > 0.0 && !items[i].members.empty()) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].weight > items[b].weight; });
  return order;
}

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : b) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

PackingSolution pack_branch_and_bound(std::span<const PackingItem> items) {
  const auto order = by_weight_desc(items);
  const std::size_t words = (points_spanned(items) + 63) / 64;
  std::vector<Bits> masks;
  masks.reserve(order.size());
  for (std::size_t idx : order) masks.push_back(to_bits(items[idx].members, words));

  PackingSolution best;
  std::vector<std::size_t> current;
  Bits used(words, 0);
  std::size_t nodes = 0;

  std::function<void(std::size_t, double)> search = [&](std::size_t pos, double value) {
    ++nodes;
    if (value > best.total) {
      best.total = value;
      best.chosen.clear();
      for (std::size_t k : current) best.chosen.push_back(order[k]);
    }
    double bound = value;
    for (std::size_t k = pos; k < order.size(); ++k)
      if (disjoint(masks[k], used)) bound += items[order[k]].weight;
    if (!(bound > best.total)) return;

    for (std::size_t k = pos; k < order.size(); ++k) {
      if (!disjoint(masks[k], used)) continue;
      // include k; items in [pos, k) are excluded on this branch
      for (std::size_t w = 0; w < words; ++w) used[w] |= masks[k][w];
      current.push_back(k);
      search(k + 1, value + items[order[k]].weight);
      current.pop_back();
      for (std::size_t w = 0; w < words; ++w) used[w] &= ~masks[k][w];

      // bound for the branches that exclude k as well
      double rest = value;
      for (std::size_t r = k + 1; r < order.size(); ++r)
        if (disjoint(masks[r], used)) rest += items[order[r]].weight;
      if (!(rest > best.total)) return;
    }
  };
  search(0, 0.0);

  std::sort(best.chosen.begin(), best.chosen.end());
  best.optimal = true;
  best.nodes = nodes;
  return best;
}

PackingSolution pack_frontier(std::span<const PackingItem> items, std::size_t n_points, std::size_t state_budget) {
  n_points = std::max(n_points, points_spanned(items));
  const std::size_t words = (n_points + 63) / 64;
  std::vector<std::vector<std::size_t>> starting(n_points);
  std::vector<Bits> masks(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!(items[i].weight > 0.0) || items[i].members.empty()) continue;
    masks[i] = to_bits(items[i].members, words);
    starting[items[i].members.front()].push_back(i);
  }

  struct Entry {
    double value;
    std::ptrdiff_t choice;  // -1: leave the point uncovered
  };
  // key: covered-points mask with the current point index stored in an extra word
  std::unordered_map<Bits, Entry, BitsHash> memo;
  bool aborted = false;

  auto clear_below = [](Bits& m, std::size_t k) {
    for (std::size_t w = 0; w < m.size(); ++w) {
      const std::size_t lo = w * 64;
      if (lo + 64 <= k) {
        m[w] = 0;
      } else if (lo < k) {
        m[w] &= ~((std::uint64_t{1} << (k - lo)) - 1);
      }
    }
  };
  auto covered = [](const Bits& m, std::size_t k) { return (m[k / 64] >> (k % 64)) & 1U; };

  std::function<double(std::size_t, Bits)> solve = [&](std::size_t k, Bits mask) -> double {
    while (k < n_points && covered(mask, k)) ++k;
    if (k >= n_points || aborted) return 0.0;
    clear_below(mask, k);
    Bits key = mask;
    key.push_back(k);
    if (auto it = memo.find(key); it != memo.end()) return it->second.value;
    if (memo.size() >= state_budget) {
      aborted = true;
      return 0.0;
    }

    Entry e{solve(k + 1, mask), -1};
    for (std::size_t i : starting[k]) {
      if (!disjoint(masks[i], mask)) continue;
      Bits next = mask;
      for (std::size_t w = 0; w < words; ++w) next[w] |= masks[i][w];
      const double v = items[i].weight + solve(k + 1, std::move(next));
      if (v > e.value) e = {v, static_cast<std::ptrdiff_t>(i)};
    }
    memo.emplace(std::move(key), e);
    return e.value;
  };

  PackingSolution sol;
  sol.total = solve(0, Bits(words, 0));
  sol.nodes = memo.size();
  if (aborted) {
    sol.optimal = false;
    sol.total = 0.0;
    return sol;
  }

  // Replay the recorded decisions.
  Bits mask(words, 0);
  std::size_t k = 0;
  while (true) {
    while (k < n_points && covered(mask, k)) ++k;
    if (k >= n_points) break;
    clear_below(mask, k);
    Bits key = mask;
    key.push_back(k);
    const Entry& e = memo.at(key);
    if (e.choice >= 0) {
      const auto i = static_cast<std::size_t>(e.choice);
      sol.chosen.push_back(i);
      for (std::size_t w = 0; w < words; ++w) mask[w] |= masks[i][w];
    }
    ++k;
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  sol.optimal = true;
  return sol;
}

PackingSolution pack_greedy(std::span<const PackingItem> items) {
  const auto order = by_weight_desc(items);
  const std::size_t words = (points_spanned(items) + 63) / 64;
  Bits used(words, 0);
  PackingSolution sol;
  for (std::size_t idx : order) {
    const Bits m = to_bits(items[idx].members, words);
    if (!disjoint(m, used)) continue;
    for (std::size_t w = 0; w < words; ++w) used[w] |= m[w];
    sol.chosen.push_back(idx);
    sol.total += items[idx].weight;
    ++sol.nodes;
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  return sol;
}

}  // namespace medjn

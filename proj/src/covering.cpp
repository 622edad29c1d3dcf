#include "medjn/covering.hpp"

#include <algorithm>
#include <numeric>

#include "medjn/error.hpp"

namespace medjn {

CoverResult five_cover(const Space& space, std::span<const Ball> balls) {
  if (balls.empty()) throw Error(ErrorCode::EmptyFamily, "five_cover needs at least one ball");
  const std::size_t n = balls.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    return balls[a].center < balls[b].center;
  });

  CoverResult out;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  out.discarded_by.assign(n, kNone);
  for (std::size_t idx : order) {
    if (out.discarded_by[idx] != kNone) continue;
    const std::size_t slot = out.selected.size();
    out.selected.push_back(idx);
    out.discarded_by[idx] = slot;
    for (std::size_t other = 0; other < n; ++other) {
      if (out.discarded_by[other] == kNone && intersects(balls[other].members, balls[idx].members))
        out.discarded_by[other] = slot;
    }
  }

  std::vector<Ball> dilates;
  dilates.reserve(out.selected.size());
  for (std::size_t idx : out.selected) dilates.push_back(dilate(space, balls[idx], 5.0));
  out.covered_by.assign(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = out.discarded_by[i];
    if (is_subset(balls[i].members, dilates[first].members)) {
      out.covered_by[i] = first;
      continue;
    }
    for (std::size_t k = 0; k < dilates.size(); ++k)
      if (is_subset(balls[i].members, dilates[k].members)) {
        out.covered_by[i] = k;
        break;
      }
  }
  return out;
}

}  // namespace medjn

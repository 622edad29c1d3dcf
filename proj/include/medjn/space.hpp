#pragma once

// Finite metric measure spaces, balls under the strict inequality d < r,
// dilation, canonical ball enumeration and the doubling constant.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace medjn {

using PointIndex = std::size_t;

// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<PointIndex>;

struct Ball {
  PointIndex center = 0;
  double radius = 0.0;
  PointSet members;
  double measure = 0.0;

  [[nodiscard]] bool contains(PointIndex x) const;
};

// Full input description for `Space::build`. Exactly one of `coords` or
// `distances` is used: a non-empty distance matrix wins.
struct SpaceInput {
  std::vector<std::string> ids;
  std::vector<double> weights;
  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> distances;
};

class Space {
 public:
  // Validates weights and metric (symmetry, identity, triangle inequality up
  // to 1e-9 * max distance). Distances asymmetric by at most 1e-12 are
  // averaged.
  static Space build(SpaceInput input);

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] const std::string& id(PointIndex i) const { return ids_.at(i); }
  [[nodiscard]] const std::vector<std::string>& ids() const noexcept { return ids_; }
  [[nodiscard]] std::optional<PointIndex> find(const std::string& id) const;
  [[nodiscard]] PointIndex index_of(const std::string& id) const;  // throws UnknownPoint

  [[nodiscard]] double weight(PointIndex i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double distance(PointIndex a, PointIndex b) const { return dist_[a * size() + b]; }
  [[nodiscard]] double total_measure() const noexcept { return total_; }
  [[nodiscard]] double max_distance() const noexcept { return dmax_; }
  [[nodiscard]] double measure(const PointSet& set) const;

  // Coordinates when the space was built from them (empty otherwise).
  [[nodiscard]] const std::vector<std::vector<double>>& coords() const noexcept { return coords_; }

  // Points ordered by distance from `center` (ties by index).
  [[nodiscard]] std::span<const PointIndex> by_distance(PointIndex center) const;

  // Distinct distances from `center`, ascending, starting with 0.
  [[nodiscard]] std::span<const double> shells(PointIndex center) const;

  // Radius used for balls equal to the whole space: d_max * (1 + 2^-20), or
  // 1 for a one-point space.
  [[nodiscard]] double full_radius() const noexcept;

  [[nodiscard]] PointSet all_points() const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> weights_;
  std::vector<double> dist_;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<PointIndex>> order_;
  std::vector<std::vector<double>> shells_;
  double total_ = 0.0;
  double dmax_ = 0.0;
};

[[nodiscard]] Ball ball_at(const Space& space, PointIndex center, double radius);
[[nodiscard]] Ball dilate(const Space& space, const Ball& ball, double lambda);

// One ball per (center, distinct member set) in `center`'s shell structure,
// before any cross-center deduplication. The radius of each is the upper end
// of the interval of radii giving that member set; the last shell uses
// `full_radius()`.
[[nodiscard]] std::vector<Ball> center_shells(const Space& space, PointIndex center);

// Distinct balls whose member set lies in `region` (whole space when
// nullopt). Duplicates keep the smallest center id, then the largest radius.
// Output is ordered by (center, radius).
[[nodiscard]] std::vector<Ball> canonical_balls(const Space& space,
                                                const std::optional<PointSet>& region = std::nullopt);

struct RatioCertificate {
  PointIndex x = 0;
  double big_radius = 0.0;
  PointIndex y = 0;
  double small_radius = 0.0;
  double ratio = 0.0;  // mu(B(x,R)) / mu(B(y,r))
  double bound = 0.0;  // c_mu^2 (R/r)^D
  bool holds = true;   // every tested quadruple satisfied the bound
  std::size_t quadruples_checked = 0;
};

struct DoublingProfile {
  double c_mu = 0.0;
  double dimension = 0.0;
  RatioCertificate ratio_certificate;
};

inline constexpr double kDoublingFloor = 1.0 + 1.0 / 1048576.0;

[[nodiscard]] DoublingProfile doubling_profile(const Space& space);

// Set helpers over sorted point sets.
[[nodiscard]] bool is_subset(const PointSet& a, const PointSet& b);
[[nodiscard]] bool intersects(const PointSet& a, const PointSet& b);
[[nodiscard]] PointSet set_union(const PointSet& a, const PointSet& b);
[[nodiscard]] PointSet set_intersection(const PointSet& a, const PointSet& b);

}  // namespace medjn

#include "medjn/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "medjn/error.hpp"

namespace medjn {

bool Ball::contains(PointIndex x) const { return std::binary_search(members.begin(), members.end(), x); }

Space Space::build(SpaceInput input) {
  const std::size_t n = input.weights.size();
  if (n == 0) throw Error(ErrorCode::EmptyRegion, "space has no points");
  if (input.ids.empty()) {
    input.ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) input.ids.push_back("p" + std::to_string(i));
  }
  if (input.ids.size() != n) throw Error(ErrorCode::Parse, "ids and weights differ in length");

  Space s;
  s.ids_ = std::move(input.ids);
  {
    std::vector<std::string> sorted = s.ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::Parse, "duplicate point id");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = input.weights[i];
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::NonPositiveWeight, "weight of '" + s.ids_[i] + "' is not strictly positive");
  }
  s.weights_ = std::move(input.weights);
  s.total_ = std::accumulate(s.weights_.begin(), s.weights_.end(), 0.0);

  s.dist_.assign(n * n, 0.0);
  if (!input.distances.empty()) {
    if (input.distances.size() != n) throw Error(ErrorCode::Parse, "distance matrix has wrong row count");
    for (const auto& row : input.distances)
      if (row.size() != n) throw Error(ErrorCode::Parse, "distance matrix has wrong column count");
    double scale = 1.0;
    for (const auto& row : input.distances)
      for (double d : row) scale = std::max(scale, std::fabs(d));
    for (std::size_t i = 0; i < n; ++i) {
      if (input.distances[i][i] != 0.0)
        throw Error(ErrorCode::AsymmetricMetric, "nonzero diagonal at '" + s.ids_[i] + "'");
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = input.distances[i][j];
        const double b = input.distances[j][i];
        if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0)
          throw Error(ErrorCode::Parse, "distances must be finite and nonnegative");
        if (std::fabs(a - b) > 1e-12 * scale)
          throw Error(ErrorCode::AsymmetricMetric,
                      "d('" + s.ids_[i] + "','" + s.ids_[j] + "') differs from its transpose");
        const double d = 0.5 * (a + b);
        s.dist_[i * n + j] = d;
        s.dist_[j * n + i] = d;
      }
    }
  } else {
    if (input.coords.size() != n) throw Error(ErrorCode::Parse, "coordinates missing for some points");
    const std::size_t dim = input.coords.front().size();
    for (const auto& c : input.coords) {
      if (c.size() != dim || dim == 0) throw Error(ErrorCode::Parse, "inconsistent coordinate dimension");
      for (double v : c)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "coordinate is not finite");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double diff = input.coords[i][k] - input.coords[j][k];
          sq += diff * diff;
        }
        const double d = std::sqrt(sq);
        s.dist_[i * n + j] = d;
        s.dist_[j * n + i] = d;
      }
    }
    s.coords_ = std::move(input.coords);
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s.dist_[i * n + j] == 0.0)
        throw Error(ErrorCode::ZeroDistance, "points '" + s.ids_[i] + "' and '" + s.ids_[j] + "' coincide");
      s.dmax_ = std::max(s.dmax_, s.dist_[i * n + j]);
    }

  const double tol = 1e-9 * s.dmax_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (s.dist_[i * n + k] > s.dist_[i * n + j] + s.dist_[j * n + k] + tol) {
          std::ostringstream msg;
          msg << "d(" << s.ids_[i] << "," << s.ids_[k] << ") > d(" << s.ids_[i] << "," << s.ids_[j]
              << ") + d(" << s.ids_[j] << "," << s.ids_[k] << ")";
          throw Error(ErrorCode::TriangleViolation, msg.str());
        }
      }

  s.order_.resize(n);
  s.shells_.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto& ord = s.order_[c];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), PointIndex{0});
    std::stable_sort(ord.begin(), ord.end(),
                     [&](PointIndex a, PointIndex b) { return s.dist_[c * n + a] < s.dist_[c * n + b]; });
    auto& sh = s.shells_[c];
    for (PointIndex p : ord) {
      const double d = s.dist_[c * n + p];
      if (sh.empty() || d > sh.back()) sh.push_back(d);
    }
  }
  return s;
}

std::optional<PointIndex> Space::find(const std::string& id) const {
  for (PointIndex i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return i;
  return std::nullopt;
}

PointIndex Space::index_of(const std::string& id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorCode::UnknownPoint, "no point with id '" + id + "'");
}

double Space::measure(const PointSet& set) const {
  double m = 0.0;
  for (PointIndex i : set) m += weights_[i];
  return m;
}

std::span<const PointIndex> Space::by_distance(PointIndex center) const { return order_.at(center); }

std::span<const double> Space::shells(PointIndex center) const { return shells_.at(center); }

double Space::full_radius() const noexcept { return dmax_ > 0.0 ? dmax_ * kDoublingFloor : 1.0; }

PointSet Space::all_points() const {
  PointSet all(size());
  std::iota(all.begin(), all.end(), PointIndex{0});
  return all;
}

Ball ball_at(const Space& space, PointIndex center, double radius) {
  if (center >= space.size()) throw Error(ErrorCode::UnknownCenter, "center index out of range");
  if (!(radius > 0.0)) throw Error(ErrorCode::NonPositiveRadius, "ball radius must be positive");
  Ball b;
  b.center = center;
  b.radius = radius;
  for (PointIndex p : space.by_distance(center)) {
    if (!(space.distance(center, p) < radius)) break;
    b.members.push_back(p);
  }
  std::sort(b.members.begin(), b.members.end());
  b.measure = space.measure(b.members);
  return b;
}

Ball dilate(const Space& space, const Ball& ball, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::NonPositiveDilation, "dilation factor must be positive");
  return ball_at(space, ball.center, lambda * ball.radius);
}

std::vector<Ball> center_shells(const Space& space, PointIndex center) {
  const auto sh = space.shells(center);
  const auto ord = space.by_distance(center);
  std::vector<Ball> out;
  out.reserve(sh.size());
  PointSet members;
  double measure = 0.0;
  std::size_t next = 0;
  for (std::size_t j = 0; j < sh.size(); ++j) {
    while (next < ord.size() && space.distance(center, ord[next]) <= sh[j]) {
      members.push_back(ord[next]);
      measure += space.weight(ord[next]);
      ++next;
    }
    Ball b;
    b.center = center;
    b.radius = j + 1 < sh.size() ? sh[j + 1] : space.full_radius();
    b.members = members;
    std::sort(b.members.begin(), b.members.end());
    b.measure = measure;
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Ball> canonical_balls(const Space& space, const std::optional<PointSet>& region) {
  if (region && region->empty()) throw Error(ErrorCode::EmptyRegion, "region is empty");
  std::map<PointSet, Ball> unique;
  const PointSet centers = region ? *region : space.all_points();
  for (PointIndex c : centers) {
    for (Ball& b : center_shells(space, c)) {
      if (region && !is_subset(b.members, *region)) break;  // shells only grow
      auto it = unique.find(b.members);
      if (it == unique.end()) {
        unique.emplace(b.members, std::move(b));
      } else {
        Ball& kept = it->second;
        if (b.center < kept.center || (b.center == kept.center && b.radius > kept.radius)) kept = std::move(b);
      }
    }
  }
  std::vector<Ball> out;
  out.reserve(unique.size());
  for (auto& [_, b] : unique) out.push_back(std::move(b));
  std::sort(out.begin(), out.end(), [](const Ball& a, const Ball& b) {
    return a.center != b.center ? a.center < b.center : a.radius < b.radius;
  });
  return out;
}

DoublingProfile doubling_profile(const Space& space) {
  const std::size_t n = space.size();
  std::vector<std::vector<Ball>> shells(n);
  for (PointIndex c = 0; c < n; ++c) shells[c] = center_shells(space, c);

  // mu(B(x, r)) for arbitrary r via the shell structure of x.
  auto measure_at = [&](PointIndex x, double r) {
    const auto sh = space.shells(x);
    // member set {d < r}: largest shell index j with sh[j] < r
    const auto it = std::lower_bound(sh.begin(), sh.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - sh.begin());
    return j == 0 ? 0.0 : shells[x][j - 1].measure;
  };

  double c_mu = kDoublingFloor;
  for (PointIndex x = 0; x < n; ++x)
    for (const Ball& b : shells[x]) c_mu = std::max(c_mu, measure_at(x, 2.0 * b.radius) / b.measure);

  DoublingProfile profile;
  profile.c_mu = c_mu;
  profile.dimension = std::log2(c_mu);

  RatioCertificate& cert = profile.ratio_certificate;
  double worst = -1.0;
  for (PointIndex x = 0; x < n; ++x) {
    for (const Ball& big : shells[x]) {
      for (PointIndex y : big.members) {
        for (const Ball& small : shells[y]) {
          if (small.radius > big.radius) break;
          const double ratio = big.measure / small.measure;
          const double bound = c_mu * c_mu * std::pow(big.radius / small.radius, profile.dimension);
          ++cert.quadruples_checked;
          const double slack = ratio / bound;
          if (slack > worst) {
            worst = slack;
            cert.x = x;
            cert.big_radius = big.radius;
            cert.y = y;
            cert.small_radius = small.radius;
            cert.ratio = ratio;
            cert.bound = bound;
          }
        }
      }
    }
  }
  cert.holds = worst <= 1.0 + 1e-12;
  return profile;
}

bool is_subset(const PointSet& a, const PointSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

bool intersects(const PointSet& a, const PointSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace medjn

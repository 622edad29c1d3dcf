#include "medjn/boman.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "medjn/error.hpp"
#include "medjn/kernels.hpp"

namespace medjn {

namespace {

std::vector<PointSet> dilated_members(const Space& space, const std::vector<Ball>& balls, double factor) {
  std::vector<PointSet> out;
  out.reserve(balls.size());
  for (const Ball& b : balls) out.push_back(dilate(space, b, factor).members);
  return out;
}

PointSet union_of(const std::vector<PointSet>& sets) {
  PointSet u;
  for (const auto& s : sets) u = set_union(u, s);
  return u;
}

std::string describe(const Space& space, const Ball& b) {
  std::ostringstream os;
  os << "B(" << space.id(b.center) << ", " << b.radius << ")";
  return os.str();
}

std::size_t max_overlap(const std::vector<PointSet>& c2) {
  std::size_t worst = 0;
  for (std::size_t i = 0; i < c2.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < c2.size(); ++j)
      if (intersects(c2[i], c2[j])) ++count;
    worst = std::max(worst, count);
  }
  return worst;
}

void require_verified(const Space& space, const BomanDecomposition& dec) {
  const BomanCertificate cert = verify_boman(space, dec);
  if (cert.pass) return;
  std::string failed;
  for (const auto& c : cert.conditions)
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
  throw Error(ErrorCode::UnverifiedDecomposition, "decomposition fails: " + failed);
}

}  // namespace

const BomanCondition& BomanCertificate::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw Error(ErrorCode::InvalidParams, "no condition named '" + name + "'");
}

BomanCertificate verify_boman(const Space& space, const BomanDecomposition& dec) {
  BomanCertificate cert;
  const auto& F = dec.balls;
  auto fail = [](BomanCondition& c, std::string why) {
    if (c.pass) c.witness = std::move(why);
    c.pass = false;
  };

  BomanCondition disjoint{"disjoint", true, ""};
  for (std::size_t i = 0; i < F.size(); ++i)
    for (std::size_t j = i + 1; j < F.size(); ++j)
      if (intersects(F[i].members, F[j].members))
        fail(disjoint, describe(space, F[i]) + " meets " + describe(space, F[j]));

  const bool constants_ok = dec.C1 > 1.0 && dec.C2 > dec.C1;
  const auto c1 = dilated_members(space, F, std::max(dec.C1, 1e-300));
  const auto c2 = dilated_members(space, F, std::max(dec.C2, 1e-300));

  BomanCondition cover{"cover", true, ""};
  if (F.empty()) fail(cover, "no balls");
  if (!constants_ok) fail(cover, "constants must satisfy C2 > C1 > 1");
  const PointSet u1 = union_of(c1);
  const PointSet u2 = union_of(c2);
  auto compare = [&](const PointSet& u, const char* which) {
    if (u == dec.region) return;
    for (PointIndex x : dec.region)
      if (!std::binary_search(u.begin(), u.end(), x))
        return fail(cover, std::string("point '") + space.id(x) + "' not covered by the " + which + " dilates");
    for (PointIndex x : u)
      if (!std::binary_search(dec.region.begin(), dec.region.end(), x))
        return fail(cover, std::string(which) + " dilates reach '" + space.id(x) + "' outside the region");
  };
  compare(u1, "C1");
  compare(u2, "C2");

  BomanCondition overlap{"overlap", true, ""};
  for (std::size_t i = 0; i < F.size(); ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < F.size(); ++j)
      if (intersects(c2[i], c2[j])) ++count;
    cert.max_overlap = std::max(cert.max_overlap, count);
    if (count > dec.M)
      fail(overlap, "C2 " + describe(space, F[i]) + " meets " + std::to_string(count) + " > M dilates");
  }

  BomanCondition chains{"chains", true, ""};
  if (dec.central >= F.size()) fail(chains, "central ball index out of range");
  if (dec.chains.size() != F.size()) fail(chains, "one chain per ball required");
  for (std::size_t b = 0; b < std::min(F.size(), dec.chains.size()); ++b) {
    const auto& ch = dec.chains[b];
    if (ch.empty() || ch.front() != dec.central || ch.back() != b) {
      fail(chains, "chain of " + describe(space, F[b]) + " does not run from the central ball to it");
      continue;
    }
    for (std::size_t v : ch)
      if (v >= F.size()) fail(chains, "chain of " + describe(space, F[b]) + " has an invalid index");
  }

  BomanCondition links{"links", true, ""};
  if (!(dec.C3 > 1.0)) fail(links, "C3 must exceed 1");
  BomanCondition rho{"rho", true, ""};
  if (!(dec.rho > 1.0)) fail(rho, "rho must exceed 1");
  if (chains.pass) {
    for (std::size_t b = 0; b < F.size(); ++b) {
      const auto& ch = dec.chains[b];
      for (std::size_t k = 1; k < ch.size(); ++k) {
        const std::size_t prev = ch[k - 1];
        const std::size_t next = ch[k];
        const std::string edge = std::to_string(prev) + "-" + std::to_string(next);
        const auto it = dec.links.find({prev, next});
        if (it == dec.links.end()) {
          fail(links, "missing link " + edge);
          continue;
        }
        const PointSet& D = it->second;
        if (!is_subset(D, set_intersection(c1[prev], c1[next]))) {
          fail(links, "link " + edge + " leaves C1 B_i cap C1 B_{i-1}");
          continue;
        }
        const double need = dec.C3 * (F[prev].measure + F[next].measure);
        if (space.measure(D) < need) {
          std::ostringstream os;
          os << "link " << edge << " has measure " << space.measure(D) << " < " << need;
          fail(links, os.str());
        }
      }
      for (std::size_t v : ch)
        if (!is_subset(F[b].members, dilate(space, F[v], std::max(dec.rho, 1e-300)).members))
          fail(rho, describe(space, F[b]) + " is not inside rho " + describe(space, F[v]));
    }
  }

  cert.conditions = {disjoint, cover, overlap, chains, links, rho};
  cert.pass = std::all_of(cert.conditions.begin(), cert.conditions.end(), [](const auto& c) { return c.pass; });
  return cert;
}

BomanDecomposition grid_boman_decomposition(const Space& space, const PointSet& target, std::size_t granularity) {
  if (target.empty()) throw Error(ErrorCode::EmptyRegion, "target is empty");
  for (PointIndex x : target)
    if (x >= space.size()) throw Error(ErrorCode::UnknownPoint, "target point out of range");

  // central point: minimal eccentricity inside the target, smallest index on ties
  PointIndex hub = target.front();
  double best_ecc = std::numeric_limits<double>::infinity();
  for (PointIndex x : target) {
    double ecc = 0.0;
    for (PointIndex y : target) ecc = std::max(ecc, space.distance(x, y));
    if (ecc < best_ecc) {
      best_ecc = ecc;
      hub = x;
    }
  }

  if (target.size() == 1) {
    double gap = space.full_radius();
    for (PointIndex y = 0; y < space.size(); ++y)
      if (y != hub) gap = std::min(gap, space.distance(hub, y));
    BomanDecomposition dec;
    dec.region = target;
    dec.C1 = 2.0;
    dec.C2 = 3.0;
    dec.C3 = 2.0;
    dec.rho = 2.0;
    dec.M = 1;
    dec.balls.push_back(ball_at(space, hub, gap / dec.C2));
    dec.chains = {{0}};
    return dec;
  }

  const auto& coords = space.coords();
  if (coords.empty()) throw Error(ErrorCode::ConstructionFailed, "grid decompositions need coordinates");
  double h = std::numeric_limits<double>::infinity();
  for (PointIndex y = 0; y < space.size(); ++y)
    if (y != hub) h = std::min(h, space.distance(hub, y));
  for (PointIndex x = 0; x < space.size(); ++x)
    for (PointIndex y = x + 1; y < space.size(); ++y) h = std::min(h, space.distance(x, y));

  const auto step = static_cast<long>(2 * granularity + 1);
  auto lattice = [&](PointIndex x) {
    std::vector<long> idx;
    for (std::size_t a = 0; a < coords[x].size(); ++a)
      idx.push_back(std::lround((coords[x][a] - coords[hub][a]) / h));
    return idx;
  };
  auto floor_div = [](long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };

  BomanDecomposition dec;
  dec.region = target;
  std::vector<std::vector<long>> cell;
  const double radius = (static_cast<double>(granularity) + 0.5) * h;
  for (PointIndex x : target) {
    const auto idx = lattice(x);
    if (!std::all_of(idx.begin(), idx.end(), [&](long v) { return v % step == 0; })) continue;
    Ball b = ball_at(space, x, radius);
    if (!is_subset(b.members, target)) b = ball_at(space, x, 0.5 * h);
    std::vector<long> c;
    for (long v : idx) c.push_back(floor_div(v, step));
    if (x == hub) dec.central = dec.balls.size();
    dec.balls.push_back(std::move(b));
    cell.push_back(std::move(c));
  }

  // breadth-first chains through lattice neighbours
  const std::size_t nb = dec.balls.size();
  std::vector<std::optional<std::size_t>> parent(nb);
  std::vector<bool> seen(nb, false);
  std::deque<std::size_t> queue{dec.central};
  seen[dec.central] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < nb; ++v) {
      if (seen[v]) continue;
      long l1 = 0;
      for (std::size_t a = 0; a < cell[u].size(); ++a) l1 += std::labs(cell[u][a] - cell[v][a]);
      if (l1 != 1) continue;
      seen[v] = true;
      parent[v] = u;
      queue.push_back(v);
    }
  }
  dec.chains.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<std::size_t> path{b};
    for (std::size_t v = b; parent[v]; v = *parent[v]) path.push_back(*parent[v]);
    // unreachable balls get a direct hop from the central ball
    if (path.back() != dec.central) path.push_back(dec.central);
    std::reverse(path.begin(), path.end());
    dec.chains[b] = std::move(path);
  }

  const double c1_values[] = {2.0, 3.0, 4.0, 6.0, 8.0};
  const double c2_factors[] = {1.25, 1.5, 2.0};
  const double c3_values[] = {2.0, 1.5, 1.01};
  const double rho_values[] = {2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};

  std::optional<BomanDecomposition> near;
  std::size_t near_failures = std::numeric_limits<std::size_t>::max();
  std::string near_report;
  for (double C1 : c1_values) {
    const auto c1 = dilated_members(space, dec.balls, C1);
    for (double factor : c2_factors) {
      const double C2 = C1 * factor;
      const std::size_t M = max_overlap(dilated_members(space, dec.balls, C2));
      for (double C3 : c3_values) {
        for (double rho : rho_values) {
          BomanDecomposition cand = dec;
          cand.C1 = C1;
          cand.C2 = C2;
          cand.C3 = C3;
          cand.rho = rho;
          cand.M = M;
          cand.links.clear();
          for (const auto& ch : cand.chains)
            for (std::size_t k = 1; k < ch.size(); ++k)
              cand.links[{ch[k - 1], ch[k]}] = set_intersection(c1[ch[k - 1]], c1[ch[k]]);
          const BomanCertificate cert = verify_boman(space, cand);
          if (cert.pass) return cand;
          std::size_t failures = 0;
          std::string report;
          for (const auto& c : cert.conditions)
            if (!c.pass) {
              ++failures;
              report += (report.empty() ? "" : "; ") + c.name + ": " + c.witness;
            }
          if (failures < near_failures) {
            near_failures = failures;
            near_report = report;
            near = std::move(cand);
          }
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "no lattice constants verify; best near-miss C1=" << near->C1 << " C2=" << near->C2 << " C3=" << near->C3
      << " rho=" << near->rho << " fails " << near_report;
  throw Error(ErrorCode::ConstructionFailed, msg.str());
}

ChainRatio chain_ratio(const Space& space, const SampleFunction& f, const BomanDecomposition& dec, double p,
                       double s) {
  require_verified(space, dec);
  validate_function(space, f);
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParams, "p must be positive");
  const auto c1 = dilated_members(space, dec.balls, dec.C1);
  std::vector<double> med(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) med[i] = maximal_median(space, f, c1[i], s);

  ChainRatio r;
  std::vector<double> dev(f.size());
  for (std::size_t i = 0; i < c1.size(); ++i) {
    r.lhs += std::pow(std::fabs(med[i] - med[dec.central]), p) * space.measure(c1[i]);
    kernels::active().abs_deviation(f.values, med[i], dev);
    r.rhs_sum += std::pow(weak_lp_norm(space, dev, c1[i], p), p);
  }
  if (r.rhs_sum > 0.0) {
    r.c0 = r.lhs / r.rhs_sum;
  } else {
    r.c0 = r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

double boman_s0(const Space& space, const BomanDecomposition& dec) {
  const DoublingProfile profile = doubling_profile(space);
  return s0_of(profile, alpha_of(profile, dec.C2 / dec.C1 - 1.0));
}

GlobalJNReport global_jn_verify(const Space& space, const SampleFunction& f, const BomanDecomposition& dec, double p,
                                double s, double r_center, const std::optional<LambdaGrid>& grid,
                                std::optional<double> budget, const PackingOptions& options) {
  require_verified(space, dec);
  validate_function(space, f);
  GlobalJNReport rep;
  const DoublingProfile profile = doubling_profile(space);
  rep.eta = dec.C2 / dec.C1 - 1.0;
  rep.s0 = s0_of(profile, alpha_of(profile, rep.eta));
  if (!(s > 0.0 && s <= rep.s0)) {
    std::ostringstream msg;
    msg << "s = " << s << " is outside (0, s0 = " << rep.s0 << "]";
    throw Error(ErrorCode::InvalidS, msg.str());
  }
  if (!(r_center >= s && r_center <= 0.5))
    throw Error(ErrorCode::InvalidCenterLevel, "centering level r must satisfy s <= r <= 1/2");

  const Ball star = dilate(space, dec.balls[dec.central], dec.C1);
  rep.a = maximal_median(space, f, star.members, r_center);
  const NormResult norm = jn_median_norm(space, f, dec.region, p, s, options);
  rep.norm = norm.norm;
  rep.norm_exact = norm.exact;
  rep.c_local = local_jn_constant(p, profile.c_mu);
  rep.c0 = chain_ratio(space, f, dec, p, s).c0;
  rep.budget = budget ? *budget : std::pow(2.0, p) * rep.c_local * (rep.c0 + 1.0) * static_cast<double>(dec.M);

  const auto sample = WeightedSample::gather(space, f.values, dec.region);
  std::vector<double> dev(sample.values.size());
  kernels::active().abs_deviation(sample.values, rep.a, dev);
  const double dmax = dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());

  LambdaGrid lambdas;
  if (grid) {
    lambdas = *grid;
  } else if (dmax == 0.0) {
    lambdas = LambdaGrid::log_spaced(1e-3, 1.0, 50);
  } else {
    lambdas = LambdaGrid::log_spaced(1e-3 * dmax, 2.0 * dmax, 50);
  }

  const double normp = std::pow(rep.norm, p);
  for (double lambda : lambdas.values) {
    LocalJNEntry e;
    e.lambda = lambda;
    e.lhs = kernels::active().mass_above(dev, sample.weights, lambda);
    e.rhs = rep.budget * normp / std::pow(lambda, p);
    e.margin = e.rhs - e.lhs;
    e.pass = e.lhs <= e.rhs * (1.0 + 1e-12);
    const double measured =
        normp > 0.0 ? e.lhs * std::pow(lambda, p) / normp : (e.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.c_meas = std::max(rep.c_meas, measured);
    rep.entries.push_back(e);
  }
  rep.pass = rep.c_meas <= rep.budget * (1.0 + 1e-12);
  return rep;
}

std::string_view to_string(EquivalenceStatus status) noexcept {
  switch (status) {
    case EquivalenceStatus::Pass: return "pass";
    case EquivalenceStatus::LowerBoundViolated: return "lower_bound_violated";
    case EquivalenceStatus::OverBudget: return "over_budget";
    case EquivalenceStatus::DegenerateNorm: return "degenerate_norm";
  }
  return "pass";
}

EquivalenceReport jn_equivalence_check(const Space& space, const SampleFunction& f, const PointSet& region, double p,
                                       double q, double s, std::optional<double> budget,
                                       const PackingOptions& options) {
  if (!(q < p)) throw Error(ErrorCode::InvalidParams, "q must be smaller than p");
  EquivalenceReport rep;
  rep.median_norm = jn_median_norm(space, f, region, p, s, options).norm;
  rep.integral_norm = jn_integral_norm(space, f, region, p, q, options).norm;
  rep.lower = std::pow(s, 1.0 / q) * rep.median_norm;
  rep.lower_pass = rep.lower <= rep.integral_norm * (1.0 + 1e-12);

  const DoublingProfile profile = doubling_profile(space);
  const double c = budget ? *budget : local_jn_constant(p, profile.c_mu);
  rep.upper_bound = std::pow(c * p / (p - q), 1.0 / q);
  // s0 with eta = 1, the value used when no decomposition fixes eta
  rep.s_below_s0 = s <= s0_of(profile, alpha_of(profile, 1.0));

  if (rep.median_norm == 0.0 && rep.integral_norm == 0.0) {
    rep.status = EquivalenceStatus::DegenerateNorm;
    rep.lower_pass = true;
    rep.within_budget = true;
    return rep;
  }
  rep.ratio = rep.median_norm > 0.0 ? rep.integral_norm / rep.median_norm : std::numeric_limits<double>::infinity();
  rep.within_budget = rep.ratio <= rep.upper_bound;
  if (!rep.lower_pass) {
    rep.status = EquivalenceStatus::LowerBoundViolated;
  } else if (!rep.within_budget) {
    rep.status = EquivalenceStatus::OverBudget;
  }
  return rep;
}

}  // namespace medjn

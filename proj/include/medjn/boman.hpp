#pragma once

// Boman chain decompositions: verification, a constructive helper for
// uniform grids, the chaining ratio, the global John-Nirenberg verifier and
// the JN_{p,q} / JN_{p,0,s} equivalence check.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medjn/czd.hpp"
#include "medjn/norms.hpp"
#include "medjn/space.hpp"

namespace medjn {

struct BomanDecomposition {
  PointSet region;
  std::vector<Ball> balls;  // F
  double C1 = 2.0;
  double C2 = 3.0;
  double C3 = 1.5;
  double rho = 2.0;
  std::size_t M = 1;
  std::size_t central = 0;
  // chains[b]: ball indices from the central ball to ball b
  std::vector<std::vector<std::size_t>> chains;
  // links[{previous, next}] = D for that chain edge
  std::map<std::pair<std::size_t, std::size_t>, PointSet> links;
};

struct BomanCondition {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct BomanCertificate {
  // disjoint, cover, overlap, chains, links, rho (in this order)
  std::vector<BomanCondition> conditions;
  std::size_t max_overlap = 0;
  bool pass = false;

  [[nodiscard]] const BomanCondition& condition(const std::string& name) const;
};

[[nodiscard]] BomanCertificate verify_boman(const Space& space, const BomanDecomposition& dec);

// Disjoint balls of radius (k + 1/2) h centered every 2k+1 grid steps
// (k = granularity) inside `target`, chained through lattice neighbours from
// the ball at the target point of minimal eccentricity, with the first
// constants on a fixed lattice that verify. Throws ConstructionFailed
// with the best near-miss.
[[nodiscard]] BomanDecomposition grid_boman_decomposition(const Space& space, const PointSet& target,
                                                          std::size_t granularity = 1);

struct ChainRatio {
  double lhs = 0.0;
  double rhs_sum = 0.0;
  double c0 = 0.0;  // lhs / rhs_sum; infinity when only rhs_sum vanishes
};

// Throws UnverifiedDecomposition.
[[nodiscard]] ChainRatio chain_ratio(const Space& space, const SampleFunction& f, const BomanDecomposition& dec,
                                     double p, double s);

struct GlobalJNReport {
  double a = 0.0;  // m^r_f(C1 B_*)
  double norm = 0.0;
  bool norm_exact = false;
  double s0 = 0.0;
  double eta = 0.0;
  double c_local = 0.0;
  double c0 = 0.0;
  double budget = 0.0;
  double c_meas = 0.0;
  std::vector<LocalJNEntry> entries;  // rhs = budget * norm^p / lambda^p
  bool pass = false;
};

// s0 of the local John-Nirenberg inequality with 1 + eta = C2/C1.
[[nodiscard]] double boman_s0(const Space& space, const BomanDecomposition& dec);

// Throws UnverifiedDecomposition and InvalidS (s > s0 with 1 + eta = C2/C1).
[[nodiscard]] GlobalJNReport global_jn_verify(const Space& space, const SampleFunction& f,
                                              const BomanDecomposition& dec, double p, double s, double r_center,
                                              const std::optional<LambdaGrid>& grid = std::nullopt,
                                              std::optional<double> budget = std::nullopt,
                                              const PackingOptions& options = {PackingMode::Auto});

enum class EquivalenceStatus { Pass, LowerBoundViolated, OverBudget, DegenerateNorm };

[[nodiscard]] std::string_view to_string(EquivalenceStatus status) noexcept;

struct EquivalenceReport {
  double median_norm = 0.0;    // JN_{p,0,s}
  double integral_norm = 0.0;  // JN_{p,q}
  double lower = 0.0;          // s^{1/q} median_norm
  bool lower_pass = false;
  double ratio = 0.0;  // integral_norm / median_norm
  double upper_bound = 0.0;
  bool within_budget = false;
  bool s_below_s0 = false;
  EquivalenceStatus status = EquivalenceStatus::Pass;
};

// Lower bound s^{1/q}||f||_{JN_{p,0,s}} <= ||f||_{JN_{p,q}} is a hard check;
// the ratio is compared with (budget p/(p-q))^{1/q}, budget defaulting to the
// local John-Nirenberg constant.
[[nodiscard]] EquivalenceReport jn_equivalence_check(const Space& space, const SampleFunction& f,
                                                     const PointSet& region, double p, double q, double s,
                                                     std::optional<double> budget = std::nullopt,
                                                     const PackingOptions& options = {PackingMode::Exact});

}  // namespace medjn

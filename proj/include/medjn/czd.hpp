#pragma once

// Median Calderón-Zygmund machinery around a fixed base ball B0:
//   - the family of balls centered in B0 with radius at most eta * r(B0),
//   - the median maximal function and its sharp variant,
//   - Calderón-Zygmund decompositions with exact certificates,
//   - nested decompositions at two levels,
//   - the good-lambda estimate and the local John-Nirenberg verifier.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medjn/median.hpp"
#include "medjn/norms.hpp"
#include "medjn/space.hpp"

namespace medjn {

// 5^D c^2 (1 + 1/eta)^D
[[nodiscard]] double alpha_of(const DoublingProfile& profile, double eta);
// min{1/(2 alpha), 1/(8 c^3)}
[[nodiscard]] double s0_of(const DoublingProfile& profile, double alpha);
// 2^{p+3} c^6 / (2^{1/p} - 1)^p
[[nodiscard]] double local_jn_constant(double p, double c_mu);

struct CZParams {
  Ball base;      // B0
  Ball base_hat;  // (1 + eta) B0
  double eta = 1.0;
  double t = 0.5;
  double p = 2.0;
  DoublingProfile profile;
  double alpha = 0.0;
  double s0 = 0.0;
  double K = 0.0;     // good-lambda factor, default 2^{1/p}
  double beta = 0.0;  // 2 K^p c^3
};

[[nodiscard]] CZParams make_cz_params(const Space& space, const Ball& base, double eta, double p, double t = 0.5,
                                      std::optional<double> K = std::nullopt,
                                      std::optional<DoublingProfile> profile = std::nullopt);

// Balls B(x, r) with x in B0 and r <= eta r(B0), one per distinct member
// set. Each keeps the largest radius it can have inside the family (the
// upper end of its radius interval clipped at eta r(B0)); ties go to the
// smaller center.
[[nodiscard]] std::vector<Ball> cz_family(const Space& space, const Ball& base, double eta);

// sup over family balls containing x of m^t_{|f|}(B); 0 when uncovered.
[[nodiscard]] double median_maximal(const Space& space, const SampleFunction& f, PointIndex x,
                                    std::span<const Ball> family, double t);

// sup over family balls containing x of m^{t/beta}_{|f - m^t_f(B)|}(B).
[[nodiscard]] double sharp_maximal(const Space& space, const SampleFunction& f, PointIndex x,
                                   std::span<const Ball> family, double t, double beta);

// Precomputed state for decompositions of one nonnegative function |f|.
class CZContext {
 public:
  CZContext(const Space& space, const SampleFunction& f, CZParams params);

  [[nodiscard]] const Space& space() const noexcept { return *space_; }
  [[nodiscard]] const CZParams& params() const noexcept { return params_; }
  [[nodiscard]] const std::vector<Ball>& family() const noexcept { return family_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return abs_values_; }
  [[nodiscard]] double family_median(std::size_t i) const { return medians_[i]; }

  // m^{t/alpha}_{|f|}(B^_0)
  [[nodiscard]] double threshold() const noexcept { return threshold_; }
  [[nodiscard]] double maximal(PointIndex x) const;
  [[nodiscard]] PointSet level_set(double lambda) const;

  // Radius bound for family balls whose median exceeds the threshold.
  [[nodiscard]] bool threshold_radius_holds() const noexcept { return threshold_radius_holds_; }
  [[nodiscard]] std::size_t threshold_radius_checked() const noexcept { return threshold_radius_checked_; }

  // Family indices of balls containing x.
  [[nodiscard]] const std::vector<std::size_t>& containing(PointIndex x) const { return containing_[x]; }

  [[nodiscard]] double median_of(const PointSet& members) const;

 private:
  const Space* space_;
  CZParams params_;
  std::vector<double> abs_values_;
  std::vector<Ball> family_;
  std::vector<double> medians_;
  std::vector<std::vector<std::size_t>> containing_;
  double threshold_ = 0.0;
  bool threshold_radius_holds_ = true;
  std::size_t threshold_radius_checked_ = 0;
};

struct CZCertificate {
  bool sandwich = false;          // union B_i within E_lambda within union 5 B_i
  bool radius_bound = false;      // r(B_i) <= eta/5 r(B0)
  bool exceeds_level = false;     // m^t(B_i) > lambda
  bool stopping = false;          // m^t(sigma B_i) <= lambda for sigma >= 2 inside the family
  bool threshold_radius = false;  // r(B) <= eta/5 r(B0) for every family ball above the threshold
  std::size_t stopping_checks = 0;
  std::string failure;

  [[nodiscard]] bool all() const noexcept {
    return sandwich && radius_bound && exceeds_level && stopping && threshold_radius;
  }
};

struct CZDecomposition {
  double lambda = 0.0;
  double threshold = 0.0;
  PointSet level_set;
  std::vector<Ball> balls;
  CZCertificate certificate;
};

// Throws EmptyLevelSet when E_lambda is empty and ThresholdViolated when
// m^{t/alpha}_{|f|}(B^_0) > lambda.
[[nodiscard]] CZDecomposition cz_decompose(const CZContext& ctx, double lambda);

struct NestedCZ {
  CZDecomposition low;
  CZDecomposition high;
  // containment[i] = index of a low-level ball whose 5-dilate contains
  // high.balls[i]; nullopt when none does.
  std::vector<std::optional<std::size_t>> containment;
  std::size_t fallback_witnesses = 0;  // low witnesses not enclosing the high witness

  [[nodiscard]] bool total() const;
};

// Decomposes at lambda_high, then at lambda_low <= lambda_high choosing each
// low-level witness to enclose the high-level witness of the same point.
[[nodiscard]] NestedCZ cz_nested(const CZContext& ctx, double lambda_low, double lambda_high);

struct GoodLambdaResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double norm = 0.0;
  bool norm_exact = false;
  NestedCZ nested;
};

// Good-lambda estimate for g (already centered; CZ balls are taken for |g|):
//   sum_j mu(B_{j,K lambda}) <= 2^p c^3/(K-1)^p ||g||^p/lambda^p
//                                + 1/(2K^p) sum_i mu(B_{i,lambda}),
// norm over B^_0. Throws PreconditionViolated naming the failed hypothesis.
[[nodiscard]] GoodLambdaResult good_lambda_sides(const Space& space, const SampleFunction& g, const CZParams& params,
                                                 double s, double lambda, const PackingOptions& options = {
                                                     PackingMode::Auto});

struct LambdaGrid {
  std::vector<double> values;

  static LambdaGrid log_spaced(double lo, double hi, std::size_t count);
  static LambdaGrid list(std::vector<double> values);
  // "log:lo:hi:count" or "list:v1,v2,..."
  static LambdaGrid parse(const std::string& spec);
};

struct LocalJNEntry {
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct LocalJNReport {
  double lambda0 = 0.0;
  double constant_c = 0.0;
  double s0 = 0.0;
  double alpha = 0.0;
  double c_mu = 0.0;
  double center = 0.0;  // m^r_f(B0)
  double norm = 0.0;    // ||f||_{JN_{p,0,s}(B^_0)}
  bool norm_exact = false;
  std::vector<LocalJNEntry> entries;
  // mu(B^_0) lambda0^p <= 2^p ||f||^p, the estimate used for lambda <= lambda0
  double trivial_lhs = 0.0;
  double trivial_rhs = 0.0;
  bool trivial_pass = false;
  bool pass = false;
};

// Checks mu{x in B0 : |f - m^r_f(B0)| > lambda} <= c ||f||^p / lambda^p on
// every grid value. Default grid: 50 log-spaced values from 1.01 lambda0 to
// 2 max|f - m^r_f(B0)|. Throws InvalidS (s > s0) and InvalidCenterLevel.
[[nodiscard]] LocalJNReport local_jn_verify(const Space& space, const SampleFunction& f, const CZParams& params,
                                            double s, double r_center,
                                            const std::optional<LambdaGrid>& grid = std::nullopt,
                                            const PackingOptions& options = {PackingMode::Auto});

}  // namespace medjn

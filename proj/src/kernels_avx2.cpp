// Compiled with -mavx2 -mfma; only reached through the runtime dispatch in
// kernels_scalar.cpp after a CPU feature check.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace medjn::kernels {

namespace {

inline double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d x) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, x);
}

template <int Predicate>
double masked_mass(std::span<const double> v, std::span<const double> w, double threshold) {
  const std::size_t n = v.size();
  const __m256d t = _mm256_set1_pd(threshold);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v.data() + i);
    const __m256d m = _mm256_cmp_pd(x, t, Predicate);
    acc = _mm256_add_pd(acc, _mm256_and_pd(m, _mm256_loadu_pd(w.data() + i)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const bool hit = Predicate == _CMP_GT_OQ ? v[i] > threshold : v[i] < threshold;
    if (hit) sum += w[i];
  }
  return sum;
}

double mass_above_avx2(std::span<const double> v, std::span<const double> w, double threshold) {
  return masked_mass<_CMP_GT_OQ>(v, w, threshold);
}

double mass_below_avx2(std::span<const double> v, std::span<const double> w, double threshold) {
  return masked_mass<_CMP_LT_OQ>(v, w, threshold);
}

double weighted_sum_avx2(std::span<const double> v, std::span<const double> w) {
  const std::size_t n = v.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(v.data() + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += w[i] * v[i];
  return sum;
}

double weighted_abs_pow_sum_avx2(std::span<const double> v, std::span<const double> w, double c,
                                 double q) {
  const std::size_t n = v.size();
  if (q != 1.0 && q != 2.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w[i] * std::pow(std::fabs(v[i] - c), q);
    return sum;
  }
  const __m256d cc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v.data() + i), cc));
    if (q == 2.0) d = _mm256_mul_pd(d, d);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), d));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double d = std::fabs(v[i] - c);
    sum += w[i] * (q == 2.0 ? d * d : d);
  }
  return sum;
}

void abs_deviation_avx2(std::span<const double> v, double c, std::span<double> out) {
  const std::size_t n = v.size();
  const __m256d cc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out.data() + i, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v.data() + i), cc)));
  }
  for (; i < n; ++i) out[i] = std::fabs(v[i] - c);
}

constexpr KernelTable kAvx2{
    Backend::Avx2,           mass_above_avx2, mass_below_avx2, weighted_sum_avx2,
    weighted_abs_pow_sum_avx2, abs_deviation_avx2,
};

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace medjn::kernels

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"
#include "medjn/kernels.hpp"

namespace medjn::kernels {

namespace {

double mass_above_scalar(std::span<const double> v, std::span<const double> w, double threshold) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > threshold) sum += w[i];
  }
  return sum;
}

double mass_below_scalar(std::span<const double> v, std::span<const double> w, double threshold) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < threshold) sum += w[i];
  }
  return sum;
}

double weighted_sum_scalar(std::span<const double> v, std::span<const double> w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += w[i] * v[i];
  return sum;
}

double weighted_abs_pow_sum_scalar(std::span<const double> v, std::span<const double> w, double c,
                                   double q) {
  double sum = 0.0;
  if (q == 1.0) {
    for (std::size_t i = 0; i < v.size(); ++i) sum += w[i] * std::fabs(v[i] - c);
  } else if (q == 2.0) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = std::fabs(v[i] - c);
      sum += w[i] * (d * d);
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) sum += w[i] * std::pow(std::fabs(v[i] - c), q);
  }
  return sum;
}

void abs_deviation_scalar(std::span<const double> v, double c, std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::fabs(v[i] - c);
}

constexpr KernelTable kScalar{
    Backend::Scalar,        mass_above_scalar, mass_below_scalar, weighted_sum_scalar,
    weighted_abs_pow_sum_scalar, abs_deviation_scalar,
};

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("MEDJN_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
  const KernelTable* compiled = detail::avx2_table_if_compiled();
  if (compiled == nullptr || !cpu_has_avx2()) return nullptr;
  return compiled;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool set_backend(Backend backend) noexcept {
  const KernelTable* t = backend == Backend::Scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Scalar ? "scalar" : "avx2";
}

}  // namespace medjn::kernels

#pragma once

// Data-parallel inner loops shared by the median, norm and verifier code.
//
// Every kernel has a scalar reference implementation. When the build targets
// x86-64 an AVX2 variant is compiled into a separate translation unit and
// selected at runtime if the CPU supports it. The environment variable
// MEDJN_KERNELS=scalar|avx2 overrides the automatic choice.
//
// Both variants use the same per-element arithmetic; they differ only in the
// summation order of reductions.

#include <cstddef>
#include <span>
#include <string_view>

namespace medjn::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // sum_i w[i] * [v[i] > threshold]
  double (*mass_above)(std::span<const double> v, std::span<const double> w, double threshold);
  // sum_i w[i] * [v[i] < threshold]
  double (*mass_below)(std::span<const double> v, std::span<const double> w, double threshold);
  // sum_i w[i] * v[i]
  double (*weighted_sum)(std::span<const double> v, std::span<const double> w);
  // sum_i w[i] * |v[i] - c|^q ; q == 1 and q == 2 are vectorized, other
  // exponents fall back to std::pow per element.
  double (*weighted_abs_pow_sum)(std::span<const double> v, std::span<const double> w, double c,
                                 double q);
  // out[i] = |v[i] - c|
  void (*abs_deviation)(std::span<const double> v, double c, std::span<double> out);
};

[[nodiscard]] const KernelTable& scalar_table() noexcept;

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
[[nodiscard]] const KernelTable* avx2_table() noexcept;

[[nodiscard]] const KernelTable& active() noexcept;

// Forces a backend for the rest of the process; returns false (and keeps the
// current one) if the requested backend is unavailable.
bool set_backend(Backend backend) noexcept;

[[nodiscard]] std::string_view backend_name(Backend backend) noexcept;

}  // namespace medjn::kernels

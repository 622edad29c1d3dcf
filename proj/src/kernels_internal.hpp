#pragma once

#include "medjn/kernels.hpp"

namespace medjn::kernels::detail {

// Defined in kernels_avx2.cpp when the AVX2 unit is built, otherwise in
// kernels_noavx2.cpp (returns nullptr).
const KernelTable* avx2_table_if_compiled() noexcept;

}  // namespace medjn::kernels::detail

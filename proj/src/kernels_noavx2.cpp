#include "kernels_internal.hpp"

namespace medjn::kernels::detail {

const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }

}  // namespace medjn::kernels::detail

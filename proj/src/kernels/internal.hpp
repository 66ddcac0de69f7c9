#pragma once

#include "ccurv/kernels.hpp"
#include "ccurv/series.hpp"

namespace ccurv::kernels::detail {

const KernelTable& scalar_table();
/// nullptr when the AVX2 variants were not compiled in.
const KernelTable* avx2_table();

/// Laurent expansion of an integrand at the origin.
PowerSeries build_series(Integrand f);

/// Below this argument the series replaces direct evaluation.
constexpr double kSeriesBelow = 0.5;

}  // namespace ccurv::kernels::detail

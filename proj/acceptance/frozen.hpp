#pragma once

// Values measured on the first run of the parameter scan (k = 1, chain
// family, n = 2..6) and frozen here. Later runs must reproduce them.

#include <cstddef>

#include "ctlfrag/reductions.hpp"

namespace frozen {

struct ScanConstants {
    ctlfrag::ReductionVariant variant;
    std::size_t temporal_depth;         // td at n = 2, asserted for all n
    std::size_t pathwidth_growth;       // C: upper width at n = 6 minus n = 2
};

inline constexpr ScanConstants kScan[] = {
    {ctlfrag::ReductionVariant::AxAg, 2, 82},
    {ctlfrag::ReductionVariant::AxEg, 2, 84},
    {ctlfrag::ReductionVariant::AgOnly, 3, 122},
    {ctlfrag::ReductionVariant::AuOnly, 3, 180},
};

} // namespace frozen

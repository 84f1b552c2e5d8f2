#pragma once

#include <cstddef>
#include <vector>

#include "bmf/matrix.hpp"

namespace bmf::detail {

// Linear indices of m's entries sorted ascending by (value, index). The
// index tie-break makes every quantile selection deterministic.
std::vector<std::size_t> ascending_order(const DenseMatrix& m);

// Mask with exactly prune_count zeros: the prune_count smallest entries
// under (value, index) order are dropped, everything else is kept.
BitMatrix keep_all_but_smallest(Index rows, Index cols,
                                const std::vector<std::size_t>& order,
                                std::size_t prune_count);

}  // namespace bmf::detail

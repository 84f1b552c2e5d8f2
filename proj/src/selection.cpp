#include "bmf/detail/selection.hpp"

#include <algorithm>
#include <numeric>

namespace bmf::detail {

std::vector<std::size_t> ascending_order(const DenseMatrix& m) {
  const double* data = m.data();  // row-major, contiguous
  std::vector<std::size_t> order(static_cast<std::size_t>(m.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [data](std::size_t a, std::size_t b) {
    if (data[a] != data[b]) return data[a] < data[b];
    return a < b;
  });
  return order;
}

BitMatrix keep_all_but_smallest(Index rows, Index cols,
                                const std::vector<std::size_t>& order,
                                std::size_t prune_count) {
  BitMatrix mask(rows, cols);
  for (std::size_t r = prune_count; r < order.size(); ++r) {
    const std::size_t idx = order[r];
    mask.set(static_cast<Index>(idx / static_cast<std::size_t>(cols)),
             static_cast<Index>(idx % static_cast<std::size_t>(cols)), true);
  }
  return mask;
}

}  // namespace bmf::detail

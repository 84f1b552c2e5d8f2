#pragma once

// Independent reference implementations the tests check the library
// against. These deliberately use the slowest, most direct formulation and
// never call the code paths they verify.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bmf/matrix.hpp"

namespace oracle {

// Direct OR-of-ANDs triple loop.
inline bmf::BitMatrix naive_boolean_product(const bmf::BitMatrix& ip,
                                            const bmf::BitMatrix& iz) {
  bmf::BitMatrix out(ip.rows(), iz.cols());
  for (bmf::Index i = 0; i < ip.rows(); ++i) {
    for (bmf::Index j = 0; j < iz.cols(); ++j) {
      bool bit = false;
      for (bmf::Index l = 0; l < ip.cols() && !bit; ++l) {
        bit = ip.get(i, l) && iz.get(l, j);
      }
      out.set(i, j, bit);
    }
  }
  return out;
}

// Full sort of all entries, ascending with index tie-break.
inline std::vector<double> sorted_entries(const bmf::DenseMatrix& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::stable_sort(v.begin(), v.end());
  return v;
}

// Mask with the prune_count smallest entries dropped, computed by full sort
// over (value, index) pairs.
inline bmf::BitMatrix brute_force_selection(const bmf::DenseMatrix& m,
                                            std::size_t prune_count) {
  std::vector<std::size_t> order(static_cast<std::size_t>(m.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return m.data()[a] < m.data()[b];
                   });
  bmf::BitMatrix mask(m.rows(), m.cols());
  for (std::size_t r = prune_count; r < order.size(); ++r) {
    const auto idx = order[r];
    mask.set(static_cast<bmf::Index>(idx / static_cast<std::size_t>(m.cols())),
             static_cast<bmf::Index>(idx % static_cast<std::size_t>(m.cols())),
             true);
  }
  return mask;
}

// Direct double loop over mask positions.
inline double naive_unintended_cost(const bmf::DenseMatrix& m,
                                    const bmf::BitMatrix& intended,
                                    const bmf::BitMatrix& actual) {
  double cost = 0.0;
  for (bmf::Index i = 0; i < m.rows(); ++i) {
    for (bmf::Index j = 0; j < m.cols(); ++j) {
      if (intended.get(i, j) && !actual.get(i, j)) cost += m(i, j);
    }
  }
  return cost;
}

struct BruteForceBest {
  bool feasible = false;
  double cost = std::numeric_limits<double>::infinity();
  std::size_t zeros_p = 0;
  std::size_t zeros_z = 0;
};

// Exhaustive search over every threshold pair drawn from the factor
// entries, i.e. every (zeros in ip, zeros in iz) selection pair, admitting
// points whose product sparsity lands within sa_tol of the target.
inline BruteForceBest brute_force_threshold_search(
    const bmf::DenseMatrix& mp, const bmf::DenseMatrix& mz,
    const bmf::DenseMatrix& magnitudes, const bmf::BitMatrix& intended,
    double target_sparsity, double sa_tol) {
  BruteForceBest best;
  const auto total_p = static_cast<std::size_t>(mp.size());
  const auto total_z = static_cast<std::size_t>(mz.size());
  for (std::size_t zp = 0; zp <= total_p; ++zp) {
    const bmf::BitMatrix ip = brute_force_selection(mp, zp);
    for (std::size_t zz = 0; zz <= total_z; ++zz) {
      const bmf::BitMatrix iz = brute_force_selection(mz, zz);
      const bmf::BitMatrix prod = naive_boolean_product(ip, iz);
      const double s_a = 1.0 - bmf::density(prod);
      if (std::abs(s_a - target_sparsity) > sa_tol) continue;
      const double cost = naive_unintended_cost(magnitudes, intended, prod);
      if (cost < best.cost) {
        best = {true, cost, zp, zz};
      }
    }
  }
  return best;
}

}  // namespace oracle

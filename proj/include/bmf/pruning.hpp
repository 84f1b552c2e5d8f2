#pragma once

#include "bmf/matrix.hpp"

namespace bmf {

// How the pruning threshold is chosen: either an explicit magnitude cutoff,
// or a target sparsity resolved to a cutoff by quantile.
struct PruneSpec {
  enum class Mode { kThreshold, kQuantile };

  static PruneSpec threshold(double tau);
  // target_sparsity in [0, 1): the fraction of entries to zero out.
  static PruneSpec quantile(double target_sparsity);

  Mode mode = Mode::kQuantile;
  double value = 0.0;
};

// Pre-factorization transform of the magnitude matrix. Square and Amplify
// bias the factorization toward preserving large weights; the transformed
// magnitudes are never written back into the weights.
struct ManipMethod {
  enum class Kind { kIdentity, kSquare, kAmplify };

  static ManipMethod identity() { return {}; }
  static ManipMethod square() { return {Kind::kSquare, 0.0}; }
  // Entries at or above the sparsity-S pruning threshold are scaled by
  // 1/(1-S); the threshold is computed on the raw magnitude matrix.
  static ManipMethod amplify(double sparsity);

  Kind kind = Kind::kIdentity;
  double sparsity = 0.0;
};

// Elementwise absolute value.
DenseMatrix magnitude(const DenseMatrix& w);

// Binary keep-mask: bit (i, j) = 1 iff |w(i, j)| clears the threshold.
// Quantile mode zeroes exactly round(S*m*n) entries; among equal magnitudes
// the lower (row, col) index is pruned first.
BitMatrix magnitude_mask(const DenseMatrix& w, const PruneSpec& spec);

// Value at sorted position round(S*m*n) under (value, index) order: the
// smallest magnitude that survives quantile-S pruning.
double quantile_threshold(const DenseMatrix& m, double target_sparsity);

// Applies a ManipMethod to a non-negative magnitude matrix.
DenseMatrix manipulate(const DenseMatrix& m, const ManipMethod& method);

}  // namespace bmf

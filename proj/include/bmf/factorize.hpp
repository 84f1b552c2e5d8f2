#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bmf/matrix.hpp"
#include "bmf/nmf.hpp"
#include "bmf/pruning.hpp"

namespace bmf {

// Binary factors ip (m x k) and iz (k x n) whose boolean product
// approximates a pruning mask, together with the binarization thresholds and
// the sparsities actually achieved.
struct BinaryFactorPair {
  BitMatrix ip;
  BitMatrix iz;
  Index rank = 0;
  double threshold_p = 0.0;
  double threshold_z = 0.0;
  double s_p = 0.0;
  double s_z = 0.0;
  double s_a = 0.0;
};

// One point of the sparsity sweep. Infeasible records carry NaN in the
// fields that have no value.
struct SweepRecord {
  double s_p = 0.0;
  double s_z = 0.0;
  double s_a = 0.0;
  double cost = 0.0;
  bool feasible = false;
};

struct BmfConfig {
  // Grid step for the s_p sweep over [0, 1].
  double sp_step = 0.05;
  // Acceptance window |s_a - S| for the s_z adjustment.
  double sa_tol = 0.001;
  // Probe budget of the s_z binary search.
  int max_bisect = 40;
  RngSeed seed;
};

// Solves (1 - (1-s_p)(1-s_z))^k = S for s_z under the independent-bit
// model. Returns nothing when the solution leaves [0, 1].
std::optional<double> s_z_from(double target_sparsity, Index rank, double s_p);

// Threshold binarization at a sparsity target: exactly
// round(target_sparsity * size) entries become 0, ties broken by index
// (lower index pruned first); bit = 1 for every entry at or above the
// resulting threshold.
BitMatrix binarize(const DenseMatrix& m, double target_sparsity);

// Total magnitude of weights the approximation prunes even though the
// intended mask keeps them: sum of m(i, j) over intended = 1, actual = 0.
double unintended_cost(const DenseMatrix& m, const BitMatrix& intended,
                       const BitMatrix& actual);

struct MaskFactorization {
  BinaryFactorPair factors;
  std::vector<SweepRecord> sweep;
  // Unintended-pruning cost at the selected sweep point.
  double cost = 0.0;
};

// End-to-end mask factorization: NMF of the (optionally manipulated)
// magnitude matrix, then a sweep over s_p with a binary search on s_z until
// the decompressed mask's sparsity lands within sa_tol of target_sparsity.
// Returns the minimum-cost sweep point (ties resolved toward smaller s_p)
// plus the full sweep trace. The cost reference mask is always derived from
// the unmanipulated magnitudes at quantile target_sparsity.
MaskFactorization factorize_mask(const DenseMatrix& w, Index rank,
                                 double target_sparsity,
                                 const ManipMethod& manip,
                                 const NmfConfig& nmf_cfg,
                                 const BmfConfig& bmf_cfg);

// CSV trace: header plus one line per record, fixed 6-decimal fields,
// missing values left empty.
std::string sweep_trace_csv(const std::vector<SweepRecord>& records);

}  // namespace bmf

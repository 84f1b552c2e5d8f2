#pragma once

#include <vector>

#include "bmf/matrix.hpp"

namespace bmf {

struct NmfConfig {
  int max_iters = 500;
  // Stop once the relative objective decrease over a 10-iteration window
  // falls below rel_tol.
  double rel_tol = 1e-4;
  // Denominator guard; never added to numerators.
  double epsilon = 1e-12;
  RngSeed seed;
};

// Non-negative factors mp (m x k) and mz (k x n) approximating m, plus the
// squared Frobenius reconstruction error at termination.
struct RealFactorPair {
  DenseMatrix mp;
  DenseMatrix mz;
  Index rank = 0;
  double final_objective = 0.0;
  int iterations_run = 0;
  // Objective after each multiplicative-update iteration; history[0] is the
  // objective of the random initialization.
  std::vector<double> objective_history;
};

// Multiplicative-update NMF minimizing ||m - mp*mz||_F^2. Deterministic
// given cfg.seed; the objective is non-increasing across iterations up to
// epsilon-sized slack. Zero rows or columns of m yield zero factor rows or
// columns.
RealFactorPair nmf(const DenseMatrix& m, Index rank, const NmfConfig& cfg);

}  // namespace bmf

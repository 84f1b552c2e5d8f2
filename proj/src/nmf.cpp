#include "bmf/nmf.hpp"

#include <cmath>
#include <string>

#include "bmf/errors.hpp"

namespace bmf {

namespace {

constexpr int kConvergenceWindow = 10;

// Uniform entries in (0, 1] scaled so the initial product sits near the
// magnitude scale of the target matrix.
DenseMatrix random_factor(Index rows, Index cols, double scale, RngSeed seed) {
  DenseMatrix f(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const std::uint64_t idx =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) + j;
      f(i, j) = scale * rng::unit_open(seed, idx);
    }
  }
  return f;
}

}  // namespace

RealFactorPair nmf(const DenseMatrix& m, Index rank, const NmfConfig& cfg) {
  if (rank < 1) throw argument_error("nmf rank must be >= 1");
  if (m.size() == 0) throw dimension_error("nmf of empty matrix");
  if (m.minCoeff() < 0.0) {
    throw domain_error("nmf input must be non-negative");
  }
  if (cfg.max_iters < 1 || !(cfg.rel_tol > 0.0) || !(cfg.epsilon > 0.0)) {
    throw argument_error("invalid NmfConfig");
  }

  const Index rows = m.rows();
  const Index cols = m.cols();
  const double scale =
      std::sqrt(m.mean() / static_cast<double>(rank));

  RealFactorPair result;
  result.rank = rank;
  result.mp = random_factor(rows, rank, scale, rng::substream(cfg.seed, 0));
  result.mz = random_factor(rank, cols, scale, rng::substream(cfg.seed, 1));

  DenseMatrix& mp = result.mp;
  DenseMatrix& mz = result.mz;

  auto objective = [&] { return (m - mp * mz).squaredNorm(); };

  result.objective_history.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  result.objective_history.push_back(objective());

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // mp <- mp .* (m mz^T) ./ (mp mz mz^T + eps)
    {
      const DenseMatrix numer = m * mz.transpose();
      const DenseMatrix denom = mp * (mz * mz.transpose());
      mp.array() *= numer.array() / (denom.array() + cfg.epsilon);
    }
    // mz <- mz .* (mp^T m) ./ (mp^T mp mz + eps)
    {
      const DenseMatrix numer = mp.transpose() * m;
      const DenseMatrix denom = (mp.transpose() * mp) * mz;
      mz.array() *= numer.array() / (denom.array() + cfg.epsilon);
    }
    result.iterations_run = iter + 1;
    result.objective_history.push_back(objective());

    const auto t = result.objective_history.size() - 1;
    if (t >= static_cast<std::size_t>(kConvergenceWindow)) {
      const double before = result.objective_history[t - kConvergenceWindow];
      const double now = result.objective_history[t];
      if (before <= 0.0 || (before - now) / before < cfg.rel_tol) break;
    }
  }

  result.final_objective = result.objective_history.back();
  return result;
}

}  // namespace bmf

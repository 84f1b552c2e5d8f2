#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmf/factorize.hpp"
#include "bmf/matrix.hpp"

namespace bmf {

struct Histogram {
  std::vector<double> bin_edges;  // strictly increasing, bins are
                                  // [e_i, e_{i+1}), last bin right-closed
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

// Histogram of the weight values the mask keeps. The binning overload uses
// `bins` uniform bins over [-max|w|, max|w|].
Histogram survivor_histogram(const DenseMatrix& w, const BitMatrix& mask,
                             std::span<const double> edges);
Histogram survivor_histogram(const DenseMatrix& w, const BitMatrix& mask,
                             int bins = 64);

// Kept weights with |w| < band.
std::uint64_t near_zero_survivors(const DenseMatrix& w, const BitMatrix& mask,
                                  double band);

// Sparsity of the boolean product of independent random factors under the
// independent-bit model: (1 - (1-s_p)(1-s_z))^k.
double predicted_sparsity(double s_p, double s_z, Index rank);

struct MonteCarloResult {
  double s_p = 0.0;
  double s_z = 0.0;
  Index rank = 0;
  double predicted = 0.0;
  double empirical = 0.0;  // mean over trials
  int trials = 0;
  double standard_error = 0.0;  // sample stddev / sqrt(trials)
};

// Monte Carlo check of predicted_sparsity: `trials` independent factor
// pairs are drawn, their boolean products' sparsities averaged, and the
// spread across trials reported as the standard error.
MonteCarloResult verify_sparsity_model(double s_p, double s_z, Index rank,
                                       Index rows, Index cols, RngSeed seed,
                                       int trials = 8);

struct RankTradeoffRow {
  Index rank = 0;
  double compression = 0.0;
  double cost = 0.0;
  std::uint64_t near_zero_survivors = 0;
  double achieved_sparsity = 0.0;
};

// Runs the full factorization pipeline once per rank on the same weights
// and reports compression, cost and the near-zero survivor count (band =
// the quantile pruning threshold).
std::vector<RankTradeoffRow> rank_tradeoff_table(
    const DenseMatrix& w, double target_sparsity, std::span<const Index> ranks,
    const ManipMethod& manip, const NmfConfig& nmf_cfg,
    const BmfConfig& bmf_cfg);

// CSV emitters; same formatting contract as sweep_trace_csv.
std::string histogram_csv(const Histogram& h);
std::string montecarlo_csv(std::span<const MonteCarloResult> results);
std::string tradeoff_csv(std::span<const RankTradeoffRow> rows);

}  // namespace bmf

#include "bmf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bmf/decompress.hpp"
#include "bmf/errors.hpp"
#include "bmf/sparse_formats.hpp"

namespace bmf {

namespace {

void check_same_shape(const DenseMatrix& w, const BitMatrix& mask,
                      const char* what) {
  if (w.rows() != mask.rows() || w.cols() != mask.cols()) {
    throw dimension_error(std::string(what) +
                          ": weight and mask shapes differ");
  }
}

}  // namespace

Histogram survivor_histogram(const DenseMatrix& w, const BitMatrix& mask,
                             std::span<const double> edges) {
  check_same_shape(w, mask, "survivor_histogram");
  if (edges.size() < 2) {
    throw argument_error("histogram needs at least two bin edges");
  }
  for (std::size_t e = 1; e < edges.size(); ++e) {
    if (!(edges[e] > edges[e - 1])) {
      throw argument_error("bin edges must be strictly increasing");
    }
  }

  Histogram h;
  h.bin_edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (!mask.get(i, j)) continue;
      const double v = w(i, j);
      if (v < h.bin_edges.front() || v > h.bin_edges.back()) continue;
      auto it =
          std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), v);
      std::size_t bin = static_cast<std::size_t>(it - h.bin_edges.begin());
      bin = (bin == 0) ? 0 : bin - 1;              // v == first edge
      bin = std::min(bin, h.counts.size() - 1);    // v == last edge
      ++h.counts[bin];
      ++h.total;
    }
  }
  return h;
}

Histogram survivor_histogram(const DenseMatrix& w, const BitMatrix& mask,
                             int bins) {
  if (bins < 1) throw argument_error("histogram needs at least one bin");
  const double max_abs = w.size() == 0 ? 1.0 : w.cwiseAbs().maxCoeff();
  const double half = max_abs > 0 ? max_abs : 1.0;
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    edges[e] = -half + 2.0 * half * static_cast<double>(e) /
                           static_cast<double>(bins);
  }
  return survivor_histogram(w, mask, edges);
}

std::uint64_t near_zero_survivors(const DenseMatrix& w, const BitMatrix& mask,
                                  double band) {
  check_same_shape(w, mask, "near_zero_survivors");
  if (!(band > 0.0)) throw argument_error("band must be positive");
  std::uint64_t count = 0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (mask.get(i, j) && std::abs(w(i, j)) < band) ++count;
    }
  }
  return count;
}

double predicted_sparsity(double s_p, double s_z, Index rank) {
  return std::pow(1.0 - (1.0 - s_p) * (1.0 - s_z),
                  static_cast<double>(rank));
}

MonteCarloResult verify_sparsity_model(double s_p, double s_z, Index rank,
                                       Index rows, Index cols, RngSeed seed,
                                       int trials) {
  if (!(s_p >= 0.0 && s_p <= 1.0) || !(s_z >= 0.0 && s_z <= 1.0)) {
    throw argument_error("sparsities must lie in [0, 1]");
  }
  if (rank < 1) throw argument_error("rank must be >= 1");
  if (trials < 1) throw argument_error("need at least one trial");

  MonteCarloResult r;
  r.s_p = s_p;
  r.s_z = s_z;
  r.rank = rank;
  r.trials = trials;
  r.predicted = predicted_sparsity(s_p, s_z, rank);

  std::vector<double> samples(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const RngSeed trial_seed =
        rng::substream(seed, static_cast<std::uint64_t>(t));
    const BitMatrix ip = random_bits(rows, rank, s_p,
                                     rng::substream(trial_seed, 0));
    const BitMatrix iz = random_bits(rank, cols, s_z,
                                     rng::substream(trial_seed, 1));
    samples[static_cast<std::size_t>(t)] =
        1.0 - density(boolean_product(ip, iz));
  }

  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= static_cast<double>(trials);
  r.empirical = mean;

  if (trials > 1) {
    double ss = 0.0;
    for (const double s : samples) ss += (s - mean) * (s - mean);
    const double var = ss / static_cast<double>(trials - 1);
    r.standard_error = std::sqrt(var / static_cast<double>(trials));
  }
  return r;
}

std::vector<RankTradeoffRow> rank_tradeoff_table(
    const DenseMatrix& w, double target_sparsity, std::span<const Index> ranks,
    const ManipMethod& manip, const NmfConfig& nmf_cfg,
    const BmfConfig& bmf_cfg) {
  const double band = quantile_threshold(magnitude(w), target_sparsity);
  std::vector<RankTradeoffRow> rows;
  rows.reserve(ranks.size());
  for (const Index k : ranks) {
    const MaskFactorization f =
        factorize_mask(w, k, target_sparsity, manip, nmf_cfg, bmf_cfg);
    const BitMatrix mask = boolean_product(f.factors.ip, f.factors.iz);
    RankTradeoffRow row;
    row.rank = k;
    row.compression = compression_ratio(w.rows(), w.cols(), k);
    row.cost = f.cost;
    row.near_zero_survivors = near_zero_survivors(w, mask, band);
    row.achieved_sparsity = f.factors.s_a;
    rows.push_back(row);
  }
  return rows;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_low,bin_high,count\n";
  char buf[128];
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%llu\n", h.bin_edges[b],
                  h.bin_edges[b + 1],
                  static_cast<unsigned long long>(h.counts[b]));
    out += buf;
  }
  return out;
}

std::string montecarlo_csv(std::span<const MonteCarloResult> results) {
  std::string out =
      "s_p,s_z,rank,predicted,empirical,trials,standard_error\n";
  char buf[192];
  for (const MonteCarloResult& r : results) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%lld,%.6f,%.6f,%d,%.6f\n",
                  r.s_p, r.s_z, static_cast<long long>(r.rank), r.predicted,
                  r.empirical, r.trials, r.standard_error);
    out += buf;
  }
  return out;
}

std::string tradeoff_csv(std::span<const RankTradeoffRow> rows) {
  std::string out =
      "rank,compression,cost,near_zero_survivors,achieved_sparsity\n";
  char buf[192];
  for (const RankTradeoffRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.6f,%.6f,%llu,%.6f\n",
                  static_cast<long long>(r.rank), r.compression, r.cost,
                  static_cast<unsigned long long>(r.near_zero_survivors),
                  r.achieved_sparsity);
    out += buf;
  }
  return out;
}

}  // namespace bmf

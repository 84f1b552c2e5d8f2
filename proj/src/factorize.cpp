#include "bmf/factorize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bmf/decompress.hpp"
#include "bmf/detail/selection.hpp"
#include "bmf/errors.hpp"

namespace bmf {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::size_t prune_count_for(double sparsity, std::size_t total) {
  const auto z = static_cast<std::size_t>(
      std::llround(sparsity * static_cast<double>(total)));
  return std::min(z, total);
}

// Effective threshold of a prune-count selection: the smallest kept value,
// +inf when everything is pruned.
double threshold_at(const DenseMatrix& m, const std::vector<std::size_t>& order,
                    std::size_t prune_count) {
  if (prune_count >= order.size()) {
    return std::numeric_limits<double>::infinity();
  }
  return m.data()[order[prune_count]];
}

}  // namespace

std::optional<double> s_z_from(double target_sparsity, Index rank,
                               double s_p) {
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
    throw argument_error("target sparsity must lie in (0, 1)");
  }
  if (rank < 1) throw argument_error("rank must be >= 1");
  if (!(s_p >= 0.0 && s_p <= 1.0)) {
    throw argument_error("s_p must lie in [0, 1]");
  }
  if (s_p >= 1.0) return std::nullopt;
  const double root =
      std::pow(target_sparsity, 1.0 / static_cast<double>(rank));
  const double s_z = (root - s_p) / (1.0 - s_p);
  if (s_z < 0.0 || s_z > 1.0) return std::nullopt;
  return s_z;
}

BitMatrix binarize(const DenseMatrix& m, double target_sparsity) {
  if (m.size() == 0) throw dimension_error("binarize of empty matrix");
  if (!(target_sparsity >= 0.0 && target_sparsity < 1.0)) {
    throw argument_error("target sparsity must lie in [0, 1)");
  }
  const auto order = detail::ascending_order(m);
  const auto z =
      prune_count_for(target_sparsity, static_cast<std::size_t>(m.size()));
  return detail::keep_all_but_smallest(m.rows(), m.cols(), order, z);
}

double unintended_cost(const DenseMatrix& m, const BitMatrix& intended,
                       const BitMatrix& actual) {
  if (m.rows() != intended.rows() || m.cols() != intended.cols() ||
      intended.rows() != actual.rows() || intended.cols() != actual.cols()) {
    throw dimension_error("unintended_cost: shape mismatch");
  }
  double cost = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    auto ri = intended.row_words(i);
    auto ra = actual.row_words(i);
    for (std::size_t w = 0; w < ri.size(); ++w) {
      std::uint64_t lost = ri[w] & ~ra[w];
      while (lost != 0) {
        const int b = std::countr_zero(lost);
        lost &= lost - 1;
        cost += m(i, static_cast<Index>(w) * 64 + b);
      }
    }
  }
  return cost;
}

MaskFactorization factorize_mask(const DenseMatrix& w, Index rank,
                                 double target_sparsity,
                                 const ManipMethod& manip,
                                 const NmfConfig& nmf_cfg,
                                 const BmfConfig& bmf_cfg) {
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
    throw argument_error("target sparsity must lie in (0, 1)");
  }
  if (rank < 1) throw argument_error("rank must be >= 1");
  if (!(bmf_cfg.sp_step > 0.0 && bmf_cfg.sp_step < 1.0) ||
      !(bmf_cfg.sa_tol > 0.0) || bmf_cfg.max_bisect < 1) {
    throw argument_error("invalid BmfConfig");
  }

  const DenseMatrix magnitudes = magnitude(w);
  const RealFactorPair real =
      nmf(manipulate(magnitudes, manip), rank, nmf_cfg);

  // Cost is always measured against the unmanipulated quantile mask.
  const BitMatrix reference =
      magnitude_mask(w, PruneSpec::quantile(target_sparsity));

  const auto order_p = detail::ascending_order(real.mp);
  const auto order_z = detail::ascending_order(real.mz);
  const auto total_p = static_cast<std::size_t>(real.mp.size());
  const auto total_z = static_cast<std::size_t>(real.mz.size());
  const Index m_rows = w.rows();
  const Index n_cols = w.cols();

  struct Best {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t z_p = 0;
    std::size_t z_z = 0;
    BitMatrix ip, iz;
    double s_a = 0.0;
    bool found = false;
  } best;

  MaskFactorization result;

  for (int gi = 0;; ++gi) {
    const double grid = static_cast<double>(gi) * bmf_cfg.sp_step;
    if (grid > 1.0 + 1e-12) break;
    const double s_p = std::min(grid, 1.0);

    const auto model_s_z = s_z_from(target_sparsity, rank, s_p);
    if (!model_s_z) {
      result.sweep.push_back({s_p, kNan, kNan, kNan, false});
      continue;
    }

    const std::size_t z_p = prune_count_for(s_p, total_p);
    const BitMatrix ip =
        detail::keep_all_but_smallest(m_rows, rank, order_p, z_p);

    auto sparsity_at = [&](std::size_t z_z) {
      const BitMatrix iz =
          detail::keep_all_but_smallest(rank, n_cols, order_z, z_z);
      return 1.0 - density(boolean_product(ip, iz));
    };

    // The map z_z -> s_a is monotone non-decreasing, so the lowest-cost
    // admissible point is the smallest z_z with s_a >= S - sa_tol. Binary
    // search for it, starting from the model-based initializer.
    const double lo_bound = target_sparsity - bmf_cfg.sa_tol;
    std::size_t lo = 0;
    std::size_t hi = total_z;  // all-zero iz gives s_a = 1, always admissible
    int probes = 0;
    bool first = true;
    while (lo < hi && probes < bmf_cfg.max_bisect) {
      std::size_t mid = first ? std::min(prune_count_for(*model_s_z, total_z),
                                         hi - 1)
                              : lo + (hi - lo) / 2;
      mid = std::max(mid, lo);
      first = false;
      if (sparsity_at(mid) >= lo_bound) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
      ++probes;
    }

    const std::size_t z_z = hi;
    const BitMatrix iz =
        detail::keep_all_but_smallest(rank, n_cols, order_z, z_z);
    const BitMatrix actual = boolean_product(ip, iz);
    const double s_a = 1.0 - density(actual);
    const double s_z_achieved =
        static_cast<double>(z_z) / static_cast<double>(total_z);

    if (std::abs(s_a - target_sparsity) > bmf_cfg.sa_tol) {
      result.sweep.push_back({s_p, s_z_achieved, s_a, kNan, false});
      continue;
    }

    const double cost = unintended_cost(magnitudes, reference, actual);
    result.sweep.push_back({s_p, s_z_achieved, s_a, cost, true});

    if (cost < best.cost) {
      best = {cost, z_p, z_z, ip, iz, s_a, true};
    }
  }

  if (!best.found) {
    throw infeasible_error(
        "no sweep point reached the target sparsity within tolerance");
  }

  result.cost = best.cost;
  result.factors.ip = std::move(best.ip);
  result.factors.iz = std::move(best.iz);
  result.factors.rank = rank;
  result.factors.threshold_p = threshold_at(real.mp, order_p, best.z_p);
  result.factors.threshold_z = threshold_at(real.mz, order_z, best.z_z);
  result.factors.s_p =
      static_cast<double>(best.z_p) / static_cast<double>(total_p);
  result.factors.s_z =
      static_cast<double>(best.z_z) / static_cast<double>(total_z);
  result.factors.s_a = best.s_a;
  return result;
}

std::string sweep_trace_csv(const std::vector<SweepRecord>& records) {
  std::string out = "s_p,s_z,s_a,cost,feasible\n";
  char buf[64];
  const auto field = [&buf](double v) -> std::string {
    if (std::isnan(v)) return {};
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
  };
  for (const SweepRecord& r : records) {
    out += field(r.s_p);
    out += ',';
    out += field(r.s_z);
    out += ',';
    out += field(r.s_a);
    out += ',';
    out += field(r.cost);
    out += ',';
    out += r.feasible ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace bmf

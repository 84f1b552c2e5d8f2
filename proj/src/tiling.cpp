#include "bmf/tiling.hpp"

#include <atomic>
#include <string>
#include <thread>

#include "bmf/decompress.hpp"
#include "bmf/errors.hpp"

namespace bmf {

namespace {

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

}  // namespace

Index TilingPlan::rank_at(Index a, Index b) const {
  if (rank_map.empty()) return uniform_rank;
  return rank_map[static_cast<std::size_t>(a * grid_cols + b)];
}

TilingPlan::Extent TilingPlan::extent(Index a, Index b, Index m,
                                      Index n) const {
  const Index bh = ceil_div(m, grid_rows);
  const Index bw = ceil_div(n, grid_cols);
  Extent e;
  e.row0 = a * bh;
  e.col0 = b * bw;
  e.rows = std::min(bh, m - e.row0);
  e.cols = std::min(bw, n - e.col0);
  return e;
}

void TilingPlan::validate(Index m, Index n) const {
  if (grid_rows < 1 || grid_cols < 1) {
    throw argument_error("tiling grid must be at least 1x1");
  }
  if (grid_rows > m || grid_cols > n) {
    throw argument_error("tiling grid " + std::to_string(grid_rows) + "x" +
                         std::to_string(grid_cols) +
                         " exceeds matrix dimensions");
  }
  if (!rank_map.empty() &&
      rank_map.size() != static_cast<std::size_t>(grid_rows * grid_cols)) {
    throw argument_error("rank map size does not match the grid");
  }
  for (Index a = 0; a < grid_rows; ++a) {
    for (Index b = 0; b < grid_cols; ++b) {
      const Extent e = extent(a, b, m, n);
      if (e.rows < 1 || e.cols < 1) {
        throw argument_error("tiling plan leaves block (" + std::to_string(a) +
                             "," + std::to_string(b) + ") empty");
      }
      if (rank_at(a, b) < 1) {
        throw argument_error("block rank must be >= 1");
      }
    }
  }
}

TiledFactorization tiled_factorize(const DenseMatrix& w,
                                   const TilingPlan& plan,
                                   double target_sparsity,
                                   const ManipMethod& manip,
                                   const NmfConfig& nmf_cfg,
                                   const BmfConfig& bmf_cfg) {
  plan.validate(w.rows(), w.cols());

  TiledFactorization out;
  out.plan = plan;
  out.rows = w.rows();
  out.cols = w.cols();

  const Index nblocks = plan.grid_rows * plan.grid_cols;
  std::vector<MaskFactorization> results(static_cast<std::size_t>(nblocks));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(nblocks));
  std::atomic<Index> next{0};

  // Bounded pool; each block's seeds come from its grid position, so the
  // outcome is independent of scheduling.
  auto worker = [&] {
    for (;;) {
      const Index linear = next.fetch_add(1);
      if (linear >= nblocks) return;
      const Index a = linear / plan.grid_cols;
      const Index b = linear % plan.grid_cols;
      const auto e = plan.extent(a, b, w.rows(), w.cols());
      const DenseMatrix block = w.block(e.row0, e.col0, e.rows, e.cols);
      NmfConfig block_nmf = nmf_cfg;
      block_nmf.seed =
          rng::block_seed(nmf_cfg.seed, static_cast<std::uint64_t>(linear));
      BmfConfig block_bmf = bmf_cfg;
      block_bmf.seed =
          rng::block_seed(bmf_cfg.seed, static_cast<std::uint64_t>(linear));
      try {
        results[static_cast<std::size_t>(linear)] =
            factorize_mask(block, plan.rank_at(a, b), target_sparsity, manip,
                           block_nmf, block_bmf);
      } catch (...) {
        failures[static_cast<std::size_t>(linear)] = std::current_exception();
      }
    }
  };

  const unsigned pool = std::min<unsigned>(
      std::max(1u, std::thread::hardware_concurrency()),
      static_cast<unsigned>(nblocks));
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  out.blocks.resize(static_cast<std::size_t>(nblocks));
  out.block_costs.resize(static_cast<std::size_t>(nblocks));
  for (Index linear = 0; linear < nblocks; ++linear) {
    if (failures[static_cast<std::size_t>(linear)]) {
      const std::string where = "block (" +
                                std::to_string(linear / plan.grid_cols) + "," +
                                std::to_string(linear % plan.grid_cols) + ")";
      try {
        std::rethrow_exception(failures[static_cast<std::size_t>(linear)]);
      } catch (const infeasible_error& e) {
        throw infeasible_error(where + ": " + e.what());
      }
    }
    MaskFactorization& f = results[static_cast<std::size_t>(linear)];
    out.blocks[static_cast<std::size_t>(linear)] = std::move(f.factors);
    out.block_costs[static_cast<std::size_t>(linear)] = f.cost;
    out.total_cost += f.cost;
  }

  out.achieved_sparsity = 1.0 - density(assemble_mask(out));
  return out;
}

BitMatrix assemble_mask(const TiledFactorization& t) {
  BitMatrix mask(t.rows, t.cols);
  for (Index a = 0; a < t.plan.grid_rows; ++a) {
    for (Index b = 0; b < t.plan.grid_cols; ++b) {
      const Index linear = a * t.plan.grid_cols + b;
      const auto e = t.plan.extent(a, b, t.rows, t.cols);
      const BinaryFactorPair& f =
          t.blocks[static_cast<std::size_t>(linear)];
      const BitMatrix block = boolean_product(f.ip, f.iz);
      for (Index i = 0; i < e.rows; ++i) {
        for (Index j = 0; j < e.cols; ++j) {
          if (block.get(i, j)) mask.set(e.row0 + i, e.col0 + j, true);
        }
      }
    }
  }
  return mask;
}

std::uint64_t tiled_index_bits(const TilingPlan& plan, Index m, Index n) {
  plan.validate(m, n);
  std::uint64_t bits = 0;
  for (Index a = 0; a < plan.grid_rows; ++a) {
    for (Index b = 0; b < plan.grid_cols; ++b) {
      const auto e = plan.extent(a, b, m, n);
      bits += static_cast<std::uint64_t>(plan.rank_at(a, b)) *
              static_cast<std::uint64_t>(e.rows + e.cols);
    }
  }
  return bits;
}

}  // namespace bmf

#pragma once

#include <cstdint>
#include <vector>

#include "bmf/factorize.hpp"
#include "bmf/matrix.hpp"

namespace bmf {

// Partition of an m x n matrix into a grid_rows x grid_cols block grid.
// Leading blocks take ceil-sized extents; trailing blocks are truncated.
// Every block gets a factorization rank: uniform_rank, unless a per-block
// map (row-major over the grid) is supplied.
struct TilingPlan {
  Index grid_rows = 1;
  Index grid_cols = 1;
  Index uniform_rank = 1;
  std::vector<Index> rank_map;  // empty, or grid_rows * grid_cols entries

  struct Extent {
    Index row0 = 0, rows = 0, col0 = 0, cols = 0;
  };

  Index rank_at(Index a, Index b) const;
  Extent extent(Index a, Index b, Index m, Index n) const;

  // Throws when the grid does not partition an m x n matrix into non-empty
  // blocks or the rank map is malformed.
  void validate(Index m, Index n) const;
};

// Per-block binary factors plus the sparsity of the reassembled mask.
struct TiledFactorization {
  TilingPlan plan;
  Index rows = 0;
  Index cols = 0;
  std::vector<BinaryFactorPair> blocks;  // row-major over the grid
  std::vector<double> block_costs;
  double achieved_sparsity = 0.0;
  double total_cost = 0.0;
};

// Runs factorize_mask on every block independently with the same target
// sparsity. Blocks are processed concurrently; per-block seeds derive from
// the configured seed and the block's grid position, so results do not
// depend on scheduling, and a 1x1 grid reproduces the untiled pipeline
// bit-exactly.
TiledFactorization tiled_factorize(const DenseMatrix& w,
                                   const TilingPlan& plan,
                                   double target_sparsity,
                                   const ManipMethod& manip,
                                   const NmfConfig& nmf_cfg,
                                   const BmfConfig& bmf_cfg);

// Stitches the per-block boolean products back into the full m x n mask.
BitMatrix assemble_mask(const TiledFactorization& t);

// Index storage of the plan in bits: sum over blocks of
// rank * (block_rows + block_cols).
std::uint64_t tiled_index_bits(const TilingPlan& plan, Index m, Index n);

}  // namespace bmf

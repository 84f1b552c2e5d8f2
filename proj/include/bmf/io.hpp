#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bmf/matrix.hpp"
#include "bmf/tiling.hpp"

namespace bmf {

inline constexpr const char* kLibraryVersion = "0.1.0";

// On-disk formats (all little-endian, fixed-width headers):
//
//   WMAT  "WMAT" | u32 version=1 | u32 rows | u32 cols | u32 dtype=1 (f32)
//         | rows*cols f32 payload, row-major.
//   BMSK  "BMSK" | u32 version=1 | u32 rows | u32 cols
//         | per row ceil(cols/8) bytes, bit j at byte j/8, LSB-first;
//         padding bits zero.
//   BIDX  "BIDX" | u32 version=1 | u32 m | u32 n | u32 grid_rows
//         | u32 grid_cols | per block (row-major): u32 rank | u32 block_rows
//         | u32 block_cols | ip payload (block_rows x rank, BMSK packing)
//         | iz payload (rank x block_cols, BMSK packing).

// Weights are widened to 64-bit on load and narrowed to 32-bit on store.
void write_weights(const std::filesystem::path& path, const DenseMatrix& w);
DenseMatrix read_weights(const std::filesystem::path& path);

void write_mask(const std::filesystem::path& path, const BitMatrix& mask);
BitMatrix read_mask(const std::filesystem::path& path);

struct FactorBlock {
  Index rank = 0;
  BitMatrix ip;
  BitMatrix iz;
};

struct FactorBundle {
  Index rows = 0;
  Index cols = 0;
  Index grid_rows = 1;
  Index grid_cols = 1;
  std::vector<FactorBlock> blocks;  // row-major over the grid

  TilingPlan plan() const;
};

void write_factors(const std::filesystem::path& path,
                   const TiledFactorization& t);
FactorBundle read_factors(const std::filesystem::path& path);

// Boolean product of every block stitched into the full mask.
BitMatrix assemble_mask(const FactorBundle& bundle);

}  // namespace bmf

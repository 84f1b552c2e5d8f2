#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmf/matrix.hpp"
#include "bmf/tiling.hpp"

namespace bmf {

// Compressed sparse row index with 16-bit column indices and 32-bit row
// pointers.
struct Csr16Index {
  std::vector<std::uint16_t> col_indices;  // one per kept weight, row-major
  std::vector<std::uint32_t> row_ptr;      // rows + 1 offsets
};

Csr16Index encode_csr16(const BitMatrix& mask);
BitMatrix decode_csr16(const Csr16Index& idx, Index rows, Index cols);

// Relative 5-bit index stream over the row-major flattened mask. A code
// g in [0, 30] places the next kept position g steps after the cursor and
// moves the cursor just past it; code 31 is a filler advancing the cursor
// 31 positions without emitting a kept position. The stream needs no row
// pointers: row boundaries are implicit in the flattened position.
struct RelativeIndex5 {
  std::vector<std::uint8_t> codes;  // values 0..31
};

inline constexpr std::uint8_t kRel5Filler = 31;

RelativeIndex5 encode_csr5(const BitMatrix& mask);
BitMatrix decode_csr5(const RelativeIndex5& idx, Index rows, Index cols);

enum class IndexFormat { kBitmap, kCsr16, kCsr5 };

// Exact index footprint of a mask in the given format:
//   bitmap: m*n; csr16: 16*nnz + 32*(m+1); csr5: 5*codes.
std::uint64_t size_bits(IndexFormat format, const BitMatrix& mask);

// Factor-format footprint, k*(m+n), the untiled special case of
// tiled_index_bits.
std::uint64_t bmf_index_bits(Index m, Index n, Index k);

// Dense-bitmap bits over factor-format bits: m*n / (k*(m+n)).
double compression_ratio(Index m, Index n, Index k);

// Externally supplied size row (e.g. a published decoder scheme we do not
// implement); reported verbatim, never computed.
struct ReferenceConstant {
  std::string name;
  std::uint64_t bits = 0;
  std::string comment;
};

struct FormatRow {
  std::string name;
  std::uint64_t bits = 0;
  double ratio = 0.0;  // bitmap bits / this format's bits
  std::string comment;
};

struct FormatReport {
  Index rows = 0;
  Index cols = 0;
  double sparsity = 0.0;
  std::string factor_config;  // e.g. "1x1 k=16"
  std::vector<FormatRow> entries;
};

// Sizes of every computed format for the mask, plus the factor format for
// the given plan and any injected reference rows.
FormatReport format_report(const BitMatrix& mask, const TilingPlan* plan,
                           std::span<const ReferenceConstant> references);

// CSV: format,bits,kb_decimal,kib,ratio,comment.
std::string format_report_csv(const FormatReport& report);

}  // namespace bmf

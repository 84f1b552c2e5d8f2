#include "bmf/sparse_formats.hpp"

#include <cmath>
#include <cstdio>

#include "bmf/errors.hpp"

namespace bmf {

Csr16Index encode_csr16(const BitMatrix& mask) {
  if (mask.cols() > 65536) {
    throw capacity_error("csr16 holds at most 65536 columns, got " +
                         std::to_string(mask.cols()));
  }
  Csr16Index idx;
  idx.row_ptr.reserve(static_cast<std::size_t>(mask.rows()) + 1);
  idx.row_ptr.push_back(0);
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      if (mask.get(i, j)) {
        idx.col_indices.push_back(static_cast<std::uint16_t>(j));
      }
    }
    idx.row_ptr.push_back(static_cast<std::uint32_t>(idx.col_indices.size()));
  }
  return idx;
}

BitMatrix decode_csr16(const Csr16Index& idx, Index rows, Index cols) {
  if (idx.row_ptr.size() != static_cast<std::size_t>(rows) + 1) {
    throw parse_error("csr16 row pointer length does not match row count");
  }
  BitMatrix mask(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const std::uint32_t begin = idx.row_ptr[static_cast<std::size_t>(i)];
    const std::uint32_t end = idx.row_ptr[static_cast<std::size_t>(i) + 1];
    if (begin > end || end > idx.col_indices.size()) {
      throw parse_error("csr16 row pointers are not monotone");
    }
    for (std::uint32_t r = begin; r < end; ++r) {
      const Index j = idx.col_indices[r];
      if (j >= cols) throw parse_error("csr16 column index out of range");
      mask.set(i, j, true);
    }
  }
  return mask;
}

RelativeIndex5 encode_csr5(const BitMatrix& mask) {
  RelativeIndex5 idx;
  std::uint64_t cursor = 0;
  const auto cols = static_cast<std::uint64_t>(mask.cols());
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      if (!mask.get(i, j)) continue;
      std::uint64_t gap = static_cast<std::uint64_t>(i) * cols +
                          static_cast<std::uint64_t>(j) - cursor;
      while (gap > 30) {
        idx.codes.push_back(kRel5Filler);
        gap -= 31;
      }
      idx.codes.push_back(static_cast<std::uint8_t>(gap));
      cursor = static_cast<std::uint64_t>(i) * cols +
               static_cast<std::uint64_t>(j) + 1;
    }
  }
  return idx;
}

BitMatrix decode_csr5(const RelativeIndex5& idx, Index rows, Index cols) {
  BitMatrix mask(rows, cols);
  const auto total = static_cast<std::uint64_t>(rows) *
                     static_cast<std::uint64_t>(cols);
  std::uint64_t cursor = 0;
  for (const std::uint8_t code : idx.codes) {
    if (code > kRel5Filler) throw parse_error("relative index code > 31");
    if (code == kRel5Filler) {
      cursor += 31;
      continue;
    }
    const std::uint64_t pos = cursor + code;
    if (pos >= total) throw parse_error("relative index past end of matrix");
    mask.set(static_cast<Index>(pos / cols), static_cast<Index>(pos % cols),
             true);
    cursor = pos + 1;
  }
  return mask;
}

std::uint64_t size_bits(IndexFormat format, const BitMatrix& mask) {
  const auto rows = static_cast<std::uint64_t>(mask.rows());
  const auto cols = static_cast<std::uint64_t>(mask.cols());
  switch (format) {
    case IndexFormat::kBitmap:
      return rows * cols;
    case IndexFormat::kCsr16:
      return 16 * mask.count_ones() + 32 * (rows + 1);
    case IndexFormat::kCsr5:
      return 5 * static_cast<std::uint64_t>(encode_csr5(mask).codes.size());
  }
  throw argument_error("unknown index format");
}

std::uint64_t bmf_index_bits(Index m, Index n, Index k) {
  return static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(m + n);
}

double compression_ratio(Index m, Index n, Index k) {
  if (m < 1 || n < 1 || k < 1) {
    throw argument_error("compression_ratio needs positive m, n, k");
  }
  return static_cast<double>(m) * static_cast<double>(n) /
         static_cast<double>(bmf_index_bits(m, n, k));
}

FormatReport format_report(const BitMatrix& mask, const TilingPlan* plan,
                           std::span<const ReferenceConstant> references) {
  FormatReport report;
  report.rows = mask.rows();
  report.cols = mask.cols();
  report.sparsity = 1.0 - density(mask);

  const std::uint64_t bitmap = size_bits(IndexFormat::kBitmap, mask);
  const auto ratio = [bitmap](std::uint64_t bits) {
    return bits == 0 ? 0.0
                     : static_cast<double>(bitmap) / static_cast<double>(bits);
  };

  report.entries.push_back({"bitmap", bitmap, 1.0, "1 bit per weight"});
  if (mask.cols() <= 65536) {
    const std::uint64_t b = size_bits(IndexFormat::kCsr16, mask);
    report.entries.push_back({"csr16", b, ratio(b), ""});
  }
  {
    const std::uint64_t b = size_bits(IndexFormat::kCsr5, mask);
    report.entries.push_back({"csr5", b, ratio(b), "relative indexing"});
  }
  if (plan != nullptr) {
    const std::uint64_t b = tiled_index_bits(*plan, mask.rows(), mask.cols());
    char cfg[64];
    if (plan->rank_map.empty()) {
      std::snprintf(cfg, sizeof cfg, "%lldx%lld k=%lld",
                    static_cast<long long>(plan->grid_rows),
                    static_cast<long long>(plan->grid_cols),
                    static_cast<long long>(plan->uniform_rank));
    } else {
      std::snprintf(cfg, sizeof cfg, "%lldx%lld per-block ranks",
                    static_cast<long long>(plan->grid_rows),
                    static_cast<long long>(plan->grid_cols));
    }
    report.factor_config = cfg;
    report.entries.push_back({"bmf", b, ratio(b), report.factor_config});
  }
  for (const ReferenceConstant& ref : references) {
    report.entries.push_back({ref.name, ref.bits, ratio(ref.bits),
                              ref.comment.empty() ? "reference constant"
                                                  : ref.comment});
  }
  return report;
}

std::string format_report_csv(const FormatReport& report) {
  std::string out = "format,bits,kb_decimal,kib,ratio,comment\n";
  char buf[256];
  for (const FormatRow& row : report.entries) {
    std::snprintf(buf, sizeof buf, "%s,%llu,%.3f,%.3f,%.3f,%s\n",
                  row.name.c_str(),
                  static_cast<unsigned long long>(row.bits),
                  static_cast<double>(row.bits) / 8000.0,
                  static_cast<double>(row.bits) / 8192.0, row.ratio,
                  row.comment.c_str());
    out += buf;
  }
  return out;
}

}  // namespace bmf

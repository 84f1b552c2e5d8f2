#include "bmf/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "bmf/decompress.hpp"
#include "bmf/errors.hpp"

namespace bmf {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kDtypeF32 = 1;

static_assert(std::endian::native == std::endian::little,
              "file codecs assume a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& in, const char* what) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw parse_error(std::string("truncated header field: ") + what);
  return v;
}

void put_magic(std::ofstream& out, const char magic[5]) {
  out.write(magic, 4);
}

void expect_magic(std::ifstream& in, const char magic[5]) {
  char buf[4] = {};
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0) {
    throw parse_error(std::string("bad magic, expected ") + magic);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  return in;
}

Index bytes_per_row(Index cols) { return (cols + 7) / 8; }

// A BitMatrix row's 64-bit words written as little-endian bytes and cut to
// ceil(cols/8) bytes give exactly the LSB-first byte packing.
void write_mask_payload(std::ofstream& out, const BitMatrix& mask) {
  const Index nbytes = bytes_per_row(mask.cols());
  for (Index i = 0; i < mask.rows(); ++i) {
    auto words = mask.row_words(i);
    out.write(reinterpret_cast<const char*>(words.data()), nbytes);
  }
}

BitMatrix read_mask_payload(std::ifstream& in, Index rows, Index cols) {
  BitMatrix mask(rows, cols);
  const Index nbytes = bytes_per_row(cols);
  std::vector<char> buf(static_cast<std::size_t>(nbytes));
  for (Index i = 0; i < rows; ++i) {
    in.read(buf.data(), nbytes);
    if (!in) throw parse_error("truncated mask payload");
    auto words = mask.row_words(i);
    std::memcpy(words.data(), buf.data(), static_cast<std::size_t>(nbytes));
  }
  if (!mask.padding_clear()) {
    throw parse_error("mask payload has nonzero padding bits");
  }
  return mask;
}

void check_u32_range(Index v, const char* what) {
  if (v < 0 || v > 0xFFFFFFFFll) {
    throw argument_error(std::string(what) + " does not fit a u32 header");
  }
}

}  // namespace

void write_weights(const std::filesystem::path& path, const DenseMatrix& w) {
  check_u32_range(w.rows(), "rows");
  check_u32_range(w.cols(), "cols");
  auto out = open_out(path);
  put_magic(out, "WMAT");
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(w.rows()));
  put_u32(out, static_cast<std::uint32_t>(w.cols()));
  put_u32(out, kDtypeF32);
  std::vector<float> row(static_cast<std::size_t>(w.cols()));
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = static_cast<float>(w(i, j));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw io_error("write failed: " + path.string());
}

DenseMatrix read_weights(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "WMAT");
  if (get_u32(in, "version") != kFormatVersion) {
    throw parse_error("unsupported weight file version");
  }
  const std::uint32_t rows = get_u32(in, "rows");
  const std::uint32_t cols = get_u32(in, "cols");
  if (rows == 0 || cols == 0) throw parse_error("empty weight matrix");
  if (get_u32(in, "dtype") != kDtypeF32) {
    throw parse_error("unsupported weight dtype");
  }
  DenseMatrix w(static_cast<Index>(rows), static_cast<Index>(cols));
  std::vector<float> row(cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw parse_error("truncated weight payload");
    for (std::uint32_t j = 0; j < cols; ++j) {
      w(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
    }
  }
  return w;
}

void write_mask(const std::filesystem::path& path, const BitMatrix& mask) {
  check_u32_range(mask.rows(), "rows");
  check_u32_range(mask.cols(), "cols");
  auto out = open_out(path);
  put_magic(out, "BMSK");
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(mask.rows()));
  put_u32(out, static_cast<std::uint32_t>(mask.cols()));
  write_mask_payload(out, mask);
  if (!out) throw io_error("write failed: " + path.string());
}

BitMatrix read_mask(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "BMSK");
  if (get_u32(in, "version") != kFormatVersion) {
    throw parse_error("unsupported mask file version");
  }
  const std::uint32_t rows = get_u32(in, "rows");
  const std::uint32_t cols = get_u32(in, "cols");
  if (rows == 0 || cols == 0) throw parse_error("empty mask");
  return read_mask_payload(in, static_cast<Index>(rows),
                           static_cast<Index>(cols));
}

TilingPlan FactorBundle::plan() const {
  TilingPlan plan;
  plan.grid_rows = grid_rows;
  plan.grid_cols = grid_cols;
  bool uniform = true;
  for (const FactorBlock& b : blocks) uniform &= b.rank == blocks.front().rank;
  if (!blocks.empty()) plan.uniform_rank = blocks.front().rank;
  if (!uniform) {
    plan.rank_map.reserve(blocks.size());
    for (const FactorBlock& b : blocks) plan.rank_map.push_back(b.rank);
  }
  return plan;
}

void write_factors(const std::filesystem::path& path,
                   const TiledFactorization& t) {
  check_u32_range(t.rows, "rows");
  check_u32_range(t.cols, "cols");
  auto out = open_out(path);
  put_magic(out, "BIDX");
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(t.rows));
  put_u32(out, static_cast<std::uint32_t>(t.cols));
  put_u32(out, static_cast<std::uint32_t>(t.plan.grid_rows));
  put_u32(out, static_cast<std::uint32_t>(t.plan.grid_cols));
  for (const BinaryFactorPair& f : t.blocks) {
    put_u32(out, static_cast<std::uint32_t>(f.rank));
    put_u32(out, static_cast<std::uint32_t>(f.ip.rows()));
    put_u32(out, static_cast<std::uint32_t>(f.iz.cols()));
    write_mask_payload(out, f.ip);
    write_mask_payload(out, f.iz);
  }
  if (!out) throw io_error("write failed: " + path.string());
}

FactorBundle read_factors(const std::filesystem::path& path) {
  auto in = open_in(path);
  expect_magic(in, "BIDX");
  if (get_u32(in, "version") != kFormatVersion) {
    throw parse_error("unsupported factor file version");
  }
  FactorBundle bundle;
  bundle.rows = get_u32(in, "rows");
  bundle.cols = get_u32(in, "cols");
  bundle.grid_rows = get_u32(in, "grid_rows");
  bundle.grid_cols = get_u32(in, "grid_cols");
  if (bundle.rows < 1 || bundle.cols < 1 || bundle.grid_rows < 1 ||
      bundle.grid_cols < 1) {
    throw parse_error("factor file header has non-positive dimensions");
  }
  const Index nblocks = bundle.grid_rows * bundle.grid_cols;
  bundle.blocks.reserve(static_cast<std::size_t>(nblocks));
  for (Index b = 0; b < nblocks; ++b) {
    FactorBlock block;
    block.rank = get_u32(in, "rank");
    const std::uint32_t brows = get_u32(in, "block_rows");
    const std::uint32_t bcols = get_u32(in, "block_cols");
    if (block.rank < 1 || brows == 0 || bcols == 0) {
      throw parse_error("factor block header has non-positive dimensions");
    }
    block.ip = read_mask_payload(in, static_cast<Index>(brows), block.rank);
    block.iz = read_mask_payload(in, block.rank, static_cast<Index>(bcols));
    bundle.blocks.push_back(std::move(block));
  }
  // Block extents must reproduce the declared partition.
  const TilingPlan plan = bundle.plan();
  try {
    plan.validate(bundle.rows, bundle.cols);
  } catch (const argument_error& e) {
    throw parse_error(std::string("factor file grid is invalid: ") + e.what());
  }
  for (Index a = 0; a < plan.grid_rows; ++a) {
    for (Index b = 0; b < plan.grid_cols; ++b) {
      const auto e = plan.extent(a, b, bundle.rows, bundle.cols);
      const FactorBlock& block =
          bundle.blocks[static_cast<std::size_t>(a * plan.grid_cols + b)];
      if (block.ip.rows() != e.rows || block.iz.cols() != e.cols) {
        throw parse_error("factor block extents do not partition the matrix");
      }
    }
  }
  return bundle;
}

BitMatrix assemble_mask(const FactorBundle& bundle) {
  const TilingPlan plan = bundle.plan();
  BitMatrix mask(bundle.rows, bundle.cols);
  for (Index a = 0; a < plan.grid_rows; ++a) {
    for (Index b = 0; b < plan.grid_cols; ++b) {
      const auto e = plan.extent(a, b, bundle.rows, bundle.cols);
      const FactorBlock& block =
          bundle.blocks[static_cast<std::size_t>(a * plan.grid_cols + b)];
      const BitMatrix prod = boolean_product(block.ip, block.iz);
      for (Index i = 0; i < e.rows; ++i) {
        for (Index j = 0; j < e.cols; ++j) {
          if (prod.get(i, j)) mask.set(e.row0 + i, e.col0 + j, true);
        }
      }
    }
  }
  return mask;
}

}  // namespace bmf

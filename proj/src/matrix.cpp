#include "bmf/matrix.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "bmf/errors.hpp"

namespace bmf {

namespace {

void check_dims(Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    throw dimension_error("matrix dimensions must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

double rng::standard_normal(RngSeed seed, std::uint64_t index) {
  const double u1 = unit_open(seed, 2 * index);
  const double u2 = unit_halfopen(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

BitMatrix::BitMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64) {
  check_dims(rows, cols);
  words_.assign(static_cast<std::size_t>(rows_) * words_per_row_, 0);
}

BitMatrix BitMatrix::ones(Index rows, Index cols) {
  BitMatrix b(rows, cols);
  const Index tail_bits = cols % 64;
  const std::uint64_t tail_mask =
      tail_bits == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail_bits) - 1;
  for (Index i = 0; i < rows; ++i) {
    auto row = b.row_words(i);
    for (auto& w : row) w = ~std::uint64_t{0};
    row.back() = tail_mask;
  }
  return b;
}

std::uint64_t BitMatrix::count_ones() const {
  std::uint64_t n = 0;
  for (const std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool BitMatrix::padding_clear() const {
  const Index tail_bits = cols_ % 64;
  if (tail_bits == 0) return true;
  const std::uint64_t pad_mask = ~((std::uint64_t{1} << tail_bits) - 1);
  for (Index i = 0; i < rows_; ++i) {
    if (row_words(i).back() & pad_mask) return false;
  }
  return true;
}

double density(const BitMatrix& b) {
  if (b.size() == 0) return 0.0;
  return static_cast<double>(b.count_ones()) / static_cast<double>(b.size());
}

DenseMatrix random_gaussian(Index rows, Index cols, double mean, double stddev,
                            RngSeed seed) {
  check_dims(rows, cols);
  if (stddev < 0 || !std::isfinite(stddev) || !std::isfinite(mean)) {
    throw argument_error("random_gaussian requires finite mean and stddev >= 0");
  }
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const std::uint64_t idx =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) + j;
      out(i, j) = mean + stddev * rng::standard_normal(seed, idx);
    }
  }
  return out;
}

BitMatrix random_bits(Index rows, Index cols, double zero_prob, RngSeed seed) {
  if (!(zero_prob >= 0.0 && zero_prob <= 1.0)) {
    throw argument_error("zero_prob must lie in [0, 1]");
  }
  BitMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    auto row = out.row_words(i);
    for (Index j = 0; j < cols; ++j) {
      const std::uint64_t idx =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) + j;
      if (rng::unit_halfopen(seed, idx) >= zero_prob) {
        row[static_cast<std::size_t>(j / 64)] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
  return out;
}

}  // namespace bmf

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "bmf/random.hpp"

namespace bmf {

using Index = Eigen::Index;

// Dense matrices are row-major so that masks, codecs and file payloads all
// traverse entries in the same order.
template <typename Scalar>
using Matrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Weights and magnitudes are kept in 64-bit precision in memory; 32-bit
// inputs are widened on load.
using DenseMatrix = Matrix<double>;

// Bit-packed binary matrix. Each row occupies ceil(cols/64) 64-bit words;
// bit j of a row lives in word j/64 at bit position j%64. Padding bits past
// column cols-1 are always zero, which makes row-wise OR/AND and popcounts
// word-parallel without masking.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(Index rows, Index cols);

  static BitMatrix ones(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }
  Index words_per_row() const { return words_per_row_; }

  bool get(Index i, Index j) const {
    return (word(i, j / 64) >> (j % 64)) & 1u;
  }

  void set(Index i, Index j, bool value) {
    std::uint64_t& w = words_[static_cast<std::size_t>(i) * words_per_row_ +
                              static_cast<std::size_t>(j / 64)];
    const std::uint64_t bit = std::uint64_t{1} << (j % 64);
    if (value) {
      w |= bit;
    } else {
      w &= ~bit;
    }
  }

  std::span<const std::uint64_t> row_words(Index i) const {
    return {words_.data() + static_cast<std::size_t>(i) * words_per_row_,
            static_cast<std::size_t>(words_per_row_)};
  }
  std::span<std::uint64_t> row_words(Index i) {
    return {words_.data() + static_cast<std::size_t>(i) * words_per_row_,
            static_cast<std::size_t>(words_per_row_)};
  }

  std::uint64_t count_ones() const;

  // True when no padding bit past column cols-1 is set.
  bool padding_clear() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::uint64_t word(Index i, Index w) const {
    return words_[static_cast<std::size_t>(i) * words_per_row_ +
                  static_cast<std::size_t>(w)];
  }

  Index rows_ = 0;
  Index cols_ = 0;
  Index words_per_row_ = 0;
  std::vector<std::uint64_t> words_;
};

// Fraction of one bits, in [0, 1]. Sparsity is 1 - density.
double density(const BitMatrix& b);

// Deterministic Gaussian matrix; entry (i, j) depends only on (seed, i, j).
DenseMatrix random_gaussian(Index rows, Index cols, double mean, double stddev,
                            RngSeed seed);

// Deterministic Bernoulli bit matrix; each bit is 0 with probability
// zero_prob, independently.
BitMatrix random_bits(Index rows, Index cols, double zero_prob, RngSeed seed);

}  // namespace bmf

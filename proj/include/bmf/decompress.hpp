#pragma once

#include <cstdint>

#include "bmf/matrix.hpp"

namespace bmf {

// Boolean matrix product: out(i, j) = OR over l of (ip(i, l) AND iz(l, j)).
// Row i of the output is the word-wise OR of the iz rows selected by the set
// bits of ip's row i; bit-identical to the naive triple loop.
BitMatrix boolean_product(const BitMatrix& ip, const BitMatrix& iz);

// out(i, j) = w(i, j) where the mask bit is set, 0 elsewhere.
DenseMatrix apply_mask(const DenseMatrix& w, const BitMatrix& mask);

struct MismatchCount {
  std::uint64_t ones_lost = 0;    // a = 1, b = 0
  std::uint64_t ones_gained = 0;  // a = 0, b = 1

  friend bool operator==(const MismatchCount&, const MismatchCount&) = default;
};

// Positions where b dropped or added ones relative to a.
MismatchCount mismatch_count(const BitMatrix& a, const BitMatrix& b);

}  // namespace bmf

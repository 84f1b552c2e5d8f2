#include "bmf/decompress.hpp"

#include <bit>
#include <string>

#include "bmf/errors.hpp"

namespace bmf {

namespace {

void check_equal_shape(const BitMatrix& a, const BitMatrix& b,
                       const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error(std::string(what) + ": shape mismatch " +
                          std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

}  // namespace

BitMatrix boolean_product(const BitMatrix& ip, const BitMatrix& iz) {
  if (ip.cols() != iz.rows()) {
    throw dimension_error("boolean_product: inner dimensions " +
                          std::to_string(ip.cols()) + " and " +
                          std::to_string(iz.rows()) + " disagree");
  }
  BitMatrix out(ip.rows(), iz.cols());
  const Index wpr = out.words_per_row();
  for (Index i = 0; i < ip.rows(); ++i) {
    auto out_row = out.row_words(i);
    auto sel = ip.row_words(i);
    for (std::size_t w = 0; w < sel.size(); ++w) {
      std::uint64_t bits = sel[w];
      while (bits != 0) {
        const int b = std::countr_zero(bits);
        bits &= bits - 1;
        const Index l = static_cast<Index>(w) * 64 + b;
        auto src = iz.row_words(l);
        for (Index ww = 0; ww < wpr; ++ww) {
          out_row[static_cast<std::size_t>(ww)] |=
              src[static_cast<std::size_t>(ww)];
        }
      }
    }
  }
  return out;
}

DenseMatrix apply_mask(const DenseMatrix& w, const BitMatrix& mask) {
  if (w.rows() != mask.rows() || w.cols() != mask.cols()) {
    throw dimension_error("apply_mask: weight and mask shapes differ");
  }
  DenseMatrix out = DenseMatrix::Zero(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (mask.get(i, j)) out(i, j) = w(i, j);
    }
  }
  return out;
}

MismatchCount mismatch_count(const BitMatrix& a, const BitMatrix& b) {
  check_equal_shape(a, b, "mismatch_count");
  MismatchCount counts;
  for (Index i = 0; i < a.rows(); ++i) {
    auto ra = a.row_words(i);
    auto rb = b.row_words(i);
    for (std::size_t w = 0; w < ra.size(); ++w) {
      counts.ones_lost += std::popcount(ra[w] & ~rb[w]);
      counts.ones_gained += std::popcount(~ra[w] & rb[w]);
    }
  }
  return counts;
}

}  // namespace bmf

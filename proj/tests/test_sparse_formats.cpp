#include <doctest.h>

#include <cmath>

#include "bmf/errors.hpp"
#include "bmf/pruning.hpp"
#include "bmf/sparse_formats.hpp"
#include "worked_example.hpp"

using namespace bmf;

namespace {

TilingPlan untiled(Index k) {
  TilingPlan plan;
  plan.uniform_rank = k;
  return plan;
}

}  // namespace

TEST_SUITE("sparse_formats") {
  TEST_CASE("csr16 of the worked example mask") {
    const Csr16Index idx = encode_csr16(testdata::example_mask());
    CHECK(idx.col_indices ==
          std::vector<std::uint16_t>{1, 2, 0, 2, 3, 1, 4, 1, 2, 4, 0, 2, 3});
    CHECK(idx.row_ptr == std::vector<std::uint32_t>{0, 2, 5, 7, 10, 13});
    CHECK(decode_csr16(idx, 5, 5) == testdata::example_mask());
  }

  TEST_CASE("csr16 edge masks") {
    const BitMatrix empty(4, 6);
    const Csr16Index idx = encode_csr16(empty);
    CHECK(idx.col_indices.empty());
    CHECK(idx.row_ptr == std::vector<std::uint32_t>{0, 0, 0, 0, 0});

    const Csr16Index full = encode_csr16(BitMatrix::ones(2, 3));
    CHECK(full.col_indices ==
          std::vector<std::uint16_t>{0, 1, 2, 0, 1, 2});

    CHECK_THROWS_AS(encode_csr16(BitMatrix(1, 65537)), capacity_error);
  }

  TEST_CASE("relative 5-bit codes for a long gap") {
    BitMatrix row(1, 64);
    row.set(0, 0, true);
    row.set(0, 40, true);
    const RelativeIndex5 idx = encode_csr5(row);
    CHECK(idx.codes == std::vector<std::uint8_t>{0, 31, 8});
    CHECK(decode_csr5(idx, 1, 64) == row);
  }

  TEST_CASE("relative codes of dense and empty rows") {
    const RelativeIndex5 dense = encode_csr5(BitMatrix::ones(1, 7));
    CHECK(dense.codes == std::vector<std::uint8_t>(7, 0));
    CHECK(encode_csr5(BitMatrix(3, 9)).codes.empty());
  }

  TEST_CASE("fillers appear only when the gap demands them") {
    BitMatrix m(1, 100);
    m.set(0, 30, true);  // gap 30: single code
    RelativeIndex5 idx = encode_csr5(m);
    CHECK(idx.codes == std::vector<std::uint8_t>{30});

    BitMatrix m2(1, 100);
    m2.set(0, 31, true);  // gap 31: one filler then 0
    idx = encode_csr5(m2);
    CHECK(idx.codes == std::vector<std::uint8_t>{31, 0});
  }

  TEST_CASE("codec round trips across sparsities") {
    std::uint64_t salt = 0;
    for (const double sparsity : {0.5, 0.9, 0.95, 0.99}) {
      for (int t = 0; t < 25; ++t) {
        const Index rows = 1 + (t * 7) % 40;
        const Index cols = 1 + (t * 13) % 90;
        const BitMatrix mask =
            random_bits(rows, cols, sparsity, {9000 + salt++});
        CHECK(decode_csr16(encode_csr16(mask), rows, cols) == mask);
        CHECK(decode_csr5(encode_csr5(mask), rows, cols) == mask);
      }
    }
  }

  TEST_CASE("size accounting formulas") {
    const DenseMatrix w = random_gaussian(800, 500, 0.0, 1.0, {77});
    const BitMatrix mask = magnitude_mask(w, PruneSpec::quantile(0.95));
    REQUIRE(mask.count_ones() == 20000);

    CHECK(size_bits(IndexFormat::kBitmap, mask) == 400000);
    CHECK(size_bits(IndexFormat::kCsr16, mask) ==
          16 * 20000 + 32 * 801);
    const std::uint64_t csr5 = size_bits(IndexFormat::kCsr5, mask);
    CHECK(csr5 == 5 * encode_csr5(mask).codes.size());
    // At this sparsity the average gap is far below the 5-bit ceiling, so
    // the relative stream must beat csr16.
    CHECK(csr5 < size_bits(IndexFormat::kCsr16, mask));

    CHECK(bmf_index_bits(800, 500, 16) == 20800);
  }

  TEST_CASE("bitmap size ignores sparsity") {
    for (const double p : {0.0, 0.5, 1.0}) {
      CHECK(size_bits(IndexFormat::kBitmap, random_bits(31, 41, p, {4})) ==
            31u * 41u);
    }
  }

  TEST_CASE("published compression ratios at 800x500") {
    const struct {
      Index k;
      double ratio;
    } expected[] = {{4, 76.9},  {8, 38.5},  {16, 19.2}, {32, 9.6},
                    {64, 4.8},  {128, 2.4}, {256, 1.2}};
    for (const auto& e : expected) {
      const double r = compression_ratio(800, 500, e.k);
      CHECK(std::round(r * 10.0) / 10.0 == doctest::Approx(e.ratio));
    }
  }

  TEST_CASE("format report ranks the factor format first at high sparsity") {
    const DenseMatrix w = random_gaussian(800, 500, 0.0, 1.0, {78});
    const BitMatrix mask = magnitude_mask(w, PruneSpec::quantile(0.95));
    const TilingPlan plan = untiled(16);
    const ReferenceConstant viterbi{"viterbi", 80000, "5X encoder"};
    const FormatReport report =
        format_report(mask, &plan, std::span(&viterbi, 1));

    CHECK(report.rows == 800);
    CHECK(report.cols == 500);
    CHECK(report.sparsity == doctest::Approx(0.95));
    REQUIRE(report.entries.size() == 5);

    std::uint64_t bmf_bits = 0, min_computed = ~std::uint64_t{0};
    for (const FormatRow& row : report.entries) {
      if (row.name == "bitmap") CHECK(row.bits == 400000);
      if (row.name == "viterbi") CHECK(row.bits == 80000);
      if (row.name == "bmf") {
        bmf_bits = row.bits;
        CHECK(row.ratio == doctest::Approx(400000.0 / 20800.0));
      }
      if (row.name != "viterbi") {
        min_computed = std::min(min_computed, row.bits);
      }
    }
    CHECK(bmf_bits == 20800);
    CHECK(min_computed == bmf_bits);
  }

  TEST_CASE("report of a single-cell mask") {
    const FormatReport report =
        format_report(BitMatrix::ones(1, 1), nullptr, {});
    REQUIRE(!report.entries.empty());
    CHECK(report.entries.front().name == "bitmap");
    CHECK(report.entries.front().bits == 1);
  }

  TEST_CASE("csv emitter shape") {
    const FormatReport report =
        format_report(BitMatrix::ones(2, 2), nullptr, {});
    const std::string csv = format_report_csv(report);
    CHECK(csv.starts_with("format,bits,kb_decimal,kib,ratio,comment\n"));
    CHECK(csv.find("bitmap,4,") != std::string::npos);
  }
}

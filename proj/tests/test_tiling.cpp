#include <doctest.h>

#include <cmath>
#include <set>

#include "bmf/decompress.hpp"
#include "bmf/errors.hpp"
#include "bmf/nmf.hpp"
#include "bmf/tiling.hpp"

using namespace bmf;

namespace {

TilingPlan uniform_plan(Index p, Index q, Index rank) {
  TilingPlan plan;
  plan.grid_rows = p;
  plan.grid_cols = q;
  plan.uniform_rank = rank;
  return plan;
}

}  // namespace

TEST_SUITE("tiling") {
  TEST_CASE("index bits are invariant across rank-equivalent plans") {
    CHECK(tiled_index_bits(uniform_plan(1, 1, 128), 500, 800) == 166400);
    CHECK(tiled_index_bits(uniform_plan(2, 2, 64), 500, 800) == 166400);
    CHECK(tiled_index_bits(uniform_plan(4, 4, 32), 500, 800) == 166400);
  }

  TEST_CASE("non-divisible extents truncate the trailing blocks") {
    const TilingPlan plan = uniform_plan(3, 3, 1);
    std::set<Index> row_sizes, col_sizes;
    for (Index a = 0; a < 3; ++a) {
      for (Index b = 0; b < 3; ++b) {
        const auto e = plan.extent(a, b, 10, 10);
        row_sizes.insert(e.rows);
        col_sizes.insert(e.cols);
      }
    }
    CHECK(row_sizes == std::set<Index>{2, 4});
    CHECK(col_sizes == std::set<Index>{2, 4});
  }

  TEST_CASE("blocks partition the index set exactly") {
    const Index shapes[][4] = {
        {10, 10, 3, 3}, {17, 5, 4, 2}, {64, 64, 8, 8}, {9, 31, 2, 7}};
    for (const auto& s : shapes) {
      const TilingPlan plan = uniform_plan(s[2], s[3], 1);
      plan.validate(s[0], s[1]);
      std::vector<int> covered(static_cast<std::size_t>(s[0] * s[1]), 0);
      for (Index a = 0; a < plan.grid_rows; ++a) {
        for (Index b = 0; b < plan.grid_cols; ++b) {
          const auto e = plan.extent(a, b, s[0], s[1]);
          for (Index i = e.row0; i < e.row0 + e.rows; ++i) {
            for (Index j = e.col0; j < e.col0 + e.cols; ++j) {
              ++covered[static_cast<std::size_t>(i * s[1] + j)];
            }
          }
        }
      }
      for (const int c : covered) CHECK(c == 1);
    }
  }

  TEST_CASE("plans that leave empty blocks are rejected") {
    // ceil(5/4)=2 wide leading blocks exhaust the rows early
    CHECK_THROWS_AS(uniform_plan(4, 1, 1).validate(5, 8), argument_error);
    CHECK_THROWS_AS(uniform_plan(1, 9, 1).validate(5, 8), argument_error);
    CHECK_NOTHROW(uniform_plan(3, 2, 1).validate(5, 8));
    TilingPlan bad = uniform_plan(2, 2, 1);
    bad.rank_map = {1, 2, 3};
    CHECK_THROWS_AS(bad.validate(8, 8), argument_error);
  }

  TEST_CASE("single tile reduces to the untiled pipeline bit-exactly") {
    const DenseMatrix w = random_gaussian(40, 50, 0.0, 1.0, {61});
    const NmfConfig nmf_cfg{.max_iters = 150, .seed = {11}};
    const BmfConfig bmf_cfg{.sa_tol = 0.01, .seed = {12}};

    const MaskFactorization direct =
        factorize_mask(w, 4, 0.9, ManipMethod::identity(), nmf_cfg, bmf_cfg);
    const TiledFactorization tiled = tiled_factorize(
        w, uniform_plan(1, 1, 4), 0.9, ManipMethod::identity(), nmf_cfg,
        bmf_cfg);

    REQUIRE(tiled.blocks.size() == 1);
    CHECK(tiled.blocks[0].ip == direct.factors.ip);
    CHECK(tiled.blocks[0].iz == direct.factors.iz);
    CHECK(tiled.total_cost == direct.cost);
    CHECK(assemble_mask(tiled) ==
          boolean_product(direct.factors.ip, direct.factors.iz));
  }

  TEST_CASE("tiled run hits the target sparsity per block and globally") {
    const DenseMatrix w = random_gaussian(60, 80, 0.0, 1.0, {62});
    const BmfConfig bmf_cfg{.sa_tol = 0.01, .seed = {13}};
    const TiledFactorization tiled = tiled_factorize(
        w, uniform_plan(2, 2, 4), 0.9, ManipMethod::identity(),
        {.max_iters = 150, .seed = {14}}, bmf_cfg);
    CHECK(std::abs(tiled.achieved_sparsity - 0.9) <= bmf_cfg.sa_tol);
    for (const BinaryFactorPair& f : tiled.blocks) {
      CHECK(std::abs(f.s_a - 0.9) <= bmf_cfg.sa_tol);
    }
    const BitMatrix mask = assemble_mask(tiled);
    CHECK(mask.rows() == 60);
    CHECK(mask.cols() == 80);
    CHECK(1.0 - density(mask) == doctest::Approx(tiled.achieved_sparsity));
  }

  TEST_CASE("4x4 grid lands on the target sparsity") {
    const DenseMatrix w = random_gaussian(100, 120, 0.0, 1.0, {64});
    const BmfConfig bmf_cfg{.sa_tol = 0.01, .seed = {19}};
    const TiledFactorization tiled = tiled_factorize(
        w, uniform_plan(4, 4, 2), 0.9, ManipMethod::identity(),
        {.max_iters = 120, .seed = {20}}, bmf_cfg);
    const BitMatrix mask = assemble_mask(tiled);
    CHECK(std::abs(1.0 - density(mask) - 0.9) <= bmf_cfg.sa_tol);
  }

  TEST_CASE("tiled runs are deterministic") {
    const DenseMatrix w = random_gaussian(30, 30, 0.0, 1.0, {63});
    const NmfConfig nmf_cfg{.max_iters = 80, .seed = {15}};
    const BmfConfig bmf_cfg{.sa_tol = 0.02, .seed = {16}};
    const TiledFactorization a = tiled_factorize(
        w, uniform_plan(2, 3, 2), 0.8, ManipMethod::identity(), nmf_cfg,
        bmf_cfg);
    const TiledFactorization b = tiled_factorize(
        w, uniform_plan(2, 3, 2), 0.8, ManipMethod::identity(), nmf_cfg,
        bmf_cfg);
    CHECK(assemble_mask(a) == assemble_mask(b));
    CHECK(a.total_cost == b.total_cost);
  }

  TEST_CASE("all-ones blocks assemble to an all-ones mask") {
    TiledFactorization t;
    t.plan = uniform_plan(2, 2, 1);
    t.rows = 6;
    t.cols = 6;
    for (int b = 0; b < 4; ++b) {
      BinaryFactorPair f;
      f.rank = 1;
      f.ip = BitMatrix::ones(3, 1);
      f.iz = BitMatrix::ones(1, 3);
      t.blocks.push_back(std::move(f));
    }
    CHECK(assemble_mask(t) == BitMatrix::ones(6, 6));
  }

  TEST_CASE("factor spread grows as blocks shrink at equal index bits") {
    // Pooled standard deviation of NMF factor entries, compared across
    // rank-equivalent plans on the same matrix; smaller blocks get smaller
    // ranks and larger per-entry scales, so the spread widens. Checked as a
    // majority trend over seeds.
    const struct {
      Index grid;
      Index rank;
    } configs[] = {{1, 64}, {2, 32}, {4, 16}};
    int trend_holds = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
      const DenseMatrix w = random_gaussian(
          256, 256, 0.0, 1.0, {7000 + static_cast<std::uint64_t>(s)});
      const DenseMatrix m = w.cwiseAbs();
      double previous = -1.0;
      bool ok = true;
      for (const auto& c : configs) {
        const TilingPlan plan = uniform_plan(c.grid, c.grid, c.rank);
        double sum = 0.0, sum_sq = 0.0;
        std::size_t count = 0;
        for (Index a = 0; a < c.grid; ++a) {
          for (Index b = 0; b < c.grid; ++b) {
            const auto e = plan.extent(a, b, 256, 256);
            const DenseMatrix block = m.block(e.row0, e.col0, e.rows, e.cols);
            const RealFactorPair f = nmf(
                block, c.rank,
                {.max_iters = 60,
                 .seed = rng::block_seed({static_cast<std::uint64_t>(s)},
                                         static_cast<std::uint64_t>(
                                             a * c.grid + b))});
            for (const DenseMatrix* fm : {&f.mp, &f.mz}) {
              sum += fm->sum();
              sum_sq += fm->squaredNorm();
              count += static_cast<std::size_t>(fm->size());
            }
          }
        }
        const double mean = sum / static_cast<double>(count);
        const double sd = std::sqrt(
            std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean));
        if (sd < previous) ok = false;
        previous = sd;
      }
      if (ok) ++trend_holds;
    }
    CHECK(trend_holds > seeds / 2);
  }
}

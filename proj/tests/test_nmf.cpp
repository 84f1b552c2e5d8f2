#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "bmf/errors.hpp"
#include "bmf/nmf.hpp"
#include "worked_example.hpp"

using namespace bmf;

namespace {

DenseMatrix random_nonneg(Index rows, Index cols, RngSeed seed) {
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = rng::unit_halfopen(
          seed, static_cast<std::uint64_t>(i * cols + j));
    }
  }
  return m;
}

// Squared Frobenius error of the best unconstrained rank-k approximation.
double svd_truncation_error(const DenseMatrix& m, Index k) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double err = 0.0;
  for (Index i = k; i < svd.singularValues().size(); ++i) {
    err += svd.singularValues()(i) * svd.singularValues()(i);
  }
  return err;
}

}  // namespace

TEST_SUITE("nmf") {
  TEST_CASE("rank-1 outer product is recovered almost exactly") {
    DenseMatrix u(6, 1), v(1, 9);
    for (Index i = 0; i < 6; ++i) u(i, 0) = 0.5 + 0.3 * static_cast<double>(i);
    for (Index j = 0; j < 9; ++j) v(0, j) = 1.0 + 0.2 * static_cast<double>(j);
    const DenseMatrix m = u * v;
    const RealFactorPair f = nmf(m, 1, {.max_iters = 2000, .seed = {3}});
    CHECK(f.final_objective < 1e-6 * m.squaredNorm());
  }

  TEST_CASE("worked example magnitudes at rank 2 beat the printed factors") {
    const DenseMatrix m = testdata::example_weights().cwiseAbs();
    const double printed_error =
        (m - testdata::example_factor_p() * testdata::example_factor_z())
            .squaredNorm();
    const RealFactorPair f = nmf(m, 2, {.max_iters = 2000, .seed = {5}});
    // The printed factors are rounded to one decimal; our solver must match
    // their reconstruction error within 10%.
    CHECK(f.final_objective <= 1.1 * printed_error);
  }

  TEST_CASE("full rank approximates closely") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const DenseMatrix m = random_nonneg(20, 20, {s});
      const RealFactorPair f = nmf(m, 20, {.max_iters = 2000, .seed = {s}});
      CHECK(f.final_objective <= 0.01 * m.squaredNorm());
    }
  }

  TEST_CASE("objective is non-increasing and factors stay non-negative") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const DenseMatrix m = random_nonneg(23, 31, {100 + s});
      const RealFactorPair f = nmf(m, 4, {.seed = {s}});
      REQUIRE(f.objective_history.size() >= 2);
      for (std::size_t t = 1; t < f.objective_history.size(); ++t) {
        CHECK(f.objective_history[t] <=
              f.objective_history[t - 1] * (1.0 + 1e-9));
      }
      CHECK(f.mp.minCoeff() >= 0.0);
      CHECK(f.mz.minCoeff() >= 0.0);
      CHECK(f.mp.allFinite());
      CHECK(f.mz.allFinite());
      CHECK(f.mp.rows() == 23);
      CHECK(f.mp.cols() == 4);
      CHECK(f.mz.rows() == 4);
      CHECK(f.mz.cols() == 31);
    }
  }

  TEST_CASE("reconstruction is sane against the SVD baseline") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const DenseMatrix m = random_nonneg(50, 50, {200 + s});
      const RealFactorPair f = nmf(m, 5, {.max_iters = 1000, .seed = {s}});
      const double baseline = svd_truncation_error(m, 5);
      CHECK(f.final_objective >= baseline * (1.0 - 1e-9));
      CHECK(f.final_objective <= 10.0 * baseline);
    }
  }

  TEST_CASE("zero rows yield zero factor rows") {
    DenseMatrix m = random_nonneg(8, 8, {9});
    m.row(3).setZero();
    const RealFactorPair f = nmf(m, 3, {.seed = {9}});
    CHECK(f.mp.row(3).isZero());
  }

  TEST_CASE("determinism and validation") {
    const DenseMatrix m = random_nonneg(12, 14, {44});
    const RealFactorPair a = nmf(m, 3, {.max_iters = 50, .seed = {1}});
    const RealFactorPair b = nmf(m, 3, {.max_iters = 50, .seed = {1}});
    CHECK(a.mp == b.mp);
    CHECK(a.mz == b.mz);
    CHECK(a.final_objective == b.final_objective);

    CHECK_THROWS_AS(nmf(m, 0, {}), argument_error);
    CHECK_THROWS_AS(nmf(DenseMatrix::Constant(3, 3, -1.0), 2, {}),
                    domain_error);
  }
}

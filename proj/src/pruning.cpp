#include "bmf/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bmf/detail/selection.hpp"
#include "bmf/errors.hpp"

namespace bmf {

PruneSpec PruneSpec::threshold(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw argument_error("explicit prune threshold must be finite and >= 0");
  }
  return {Mode::kThreshold, tau};
}

PruneSpec PruneSpec::quantile(double target_sparsity) {
  if (!(target_sparsity >= 0.0 && target_sparsity < 1.0)) {
    throw argument_error("target sparsity must lie in [0, 1)");
  }
  return {Mode::kQuantile, target_sparsity};
}

ManipMethod ManipMethod::amplify(double sparsity) {
  if (!(sparsity >= 0.0 && sparsity < 1.0)) {
    throw argument_error("amplify sparsity must lie in [0, 1)");
  }
  return {Kind::kAmplify, sparsity};
}

DenseMatrix magnitude(const DenseMatrix& w) { return w.cwiseAbs(); }

BitMatrix magnitude_mask(const DenseMatrix& w, const PruneSpec& spec) {
  if (w.size() == 0) throw dimension_error("magnitude_mask of empty matrix");
  if (spec.mode == PruneSpec::Mode::kThreshold) {
    BitMatrix mask(w.rows(), w.cols());
    for (Index i = 0; i < w.rows(); ++i) {
      for (Index j = 0; j < w.cols(); ++j) {
        if (std::abs(w(i, j)) >= spec.value) mask.set(i, j, true);
      }
    }
    return mask;
  }
  const DenseMatrix m = magnitude(w);
  const auto order = detail::ascending_order(m);
  const auto prune_count = static_cast<std::size_t>(
      std::llround(spec.value * static_cast<double>(m.size())));
  return detail::keep_all_but_smallest(m.rows(), m.cols(), order, prune_count);
}

double quantile_threshold(const DenseMatrix& m, double target_sparsity) {
  if (m.size() == 0) throw dimension_error("quantile of empty matrix");
  if (!(target_sparsity >= 0.0 && target_sparsity < 1.0)) {
    throw argument_error("target sparsity must lie in [0, 1)");
  }
  const std::size_t total = static_cast<std::size_t>(m.size());
  std::size_t pos = static_cast<std::size_t>(
      std::llround(target_sparsity * static_cast<double>(total)));
  pos = std::min(pos, total - 1);

  const double* data = m.data();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pos),
                   order.end(), [data](std::size_t a, std::size_t b) {
                     if (data[a] != data[b]) return data[a] < data[b];
                     return a < b;
                   });
  return data[order[pos]];
}

DenseMatrix manipulate(const DenseMatrix& m, const ManipMethod& method) {
  if (m.size() > 0 && m.minCoeff() < 0.0) {
    throw domain_error("manipulate expects a non-negative magnitude matrix");
  }
  switch (method.kind) {
    case ManipMethod::Kind::kIdentity:
      return m;
    case ManipMethod::Kind::kSquare:
      return m.array().square();
    case ManipMethod::Kind::kAmplify: {
      const double tau = quantile_threshold(m, method.sparsity);
      const double gain = 1.0 / (1.0 - method.sparsity);
      DenseMatrix out = m;
      for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
          if (out(i, j) >= tau) out(i, j) *= gain;
        }
      }
      return out;
    }
  }
  throw argument_error("unknown manipulation method");
}

}  // namespace bmf

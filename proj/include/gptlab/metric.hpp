#pragma once

#include <string>
#include <vector>

#include "gptlab/linalg.hpp"

namespace gptlab {

/// Outcome labels with a metric. Validated on construction: symmetric, zero exactly on the
/// diagonal, triangle inequality.
template <Field S>
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> labels, Matrix<S> dist, Tolerance tol = {});

  /// d(a, b) = 1 for a != b. The binary case is the default outcome metric.
  static FiniteMetricSpace discrete(std::size_t k);
  /// Points 0..k-1 on a line, d(a, b) = |a - b|.
  static FiniteMetricSpace line(std::size_t k);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix<S>& matrix() const { return dist_; }
  const S& operator()(std::size_t a, std::size_t b) const { return dist_(a, b); }

 private:
  std::vector<std::string> labels_;
  Matrix<S> dist_;
};

}  // namespace gptlab

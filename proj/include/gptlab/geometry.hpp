#pragma once

#include <vector>

#include "gptlab/linalg.hpp"

namespace gptlab {

/// Gram matrix of a real inner product; symmetric positive definite by construction.
template <Field S>
class InnerProduct {
 public:
  InnerProduct() = default;
  /// Throws std::invalid_argument unless `gram` is symmetric with positive leading minors.
  explicit InnerProduct(Matrix<S> gram, Tolerance tol = {});
  static InnerProduct euclidean(std::size_t dim) { return InnerProduct(Matrix<S>::identity(dim)); }

  const Matrix<S>& gram() const { return gram_; }
  std::size_t dim() const { return gram_.rows(); }
  S operator()(const Vec<S>& x, const Vec<S>& y) const;
  /// G x, the covector that pairs with x.
  Vec<S> lower(const Vec<S>& x) const { return gram_ * x; }

 private:
  Matrix<S> gram_;
};

template <Field S>
bool is_positive_definite(const Matrix<S>& m, Tolerance tol = {});

template <Field S>
S gram_inner(const Matrix<S>& gram, const Vec<S>& x, const Vec<S>& y);

/// Polyhedral cone as the conic hull of finitely many generators.
/// `lineality_dim` counts lineality directions; each appears as a +/- pair among the generators.
template <Field S>
struct ConeV {
  std::vector<Vec<S>> generators;
  std::size_t lineality_dim = 0;

  std::size_t dim() const { return generators.empty() ? 0 : generators.front().size(); }
};

/// Dual cone {y : <y, g>_G >= 0 for all generators g} by the double description method.
/// Constraints are added in generator order. Float rays are scaled so their largest-magnitude
/// coordinate is +/-1; exact rays are primitive integer vectors.
template <Field S>
ConeV<S> dual_cone(const ConeV<S>& c, const InnerProduct<S>& g, Tolerance tol = {});

/// x in cone(c) via LP feasibility of x = sum theta_i g_i, theta >= 0.
template <Field S>
bool cone_member(const ConeV<S>& c, const Vec<S>& x, Tolerance tol = {});

template <Field S>
bool cones_equal(const ConeV<S>& a, const ConeV<S>& b, Tolerance tol = {});

struct AffineHullInfo {
  std::size_t affine_dim = 0;
  bool origin_outside = false;
};

template <Field S>
AffineHullInfo affine_hull_check(const std::vector<Vec<S>>& points, Tolerance tol = {});

/// Scales a ray to the canonical representative used by dual_cone.
template <Field S>
Vec<S> normalize_ray(Vec<S> v);

}  // namespace gptlab

#include "gptlab/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "gptlab/lp.hpp"

namespace gptlab {

template <Field S>
bool is_positive_definite(const Matrix<S>& m, Tolerance tol) {
  if (!m.square() || !is_symmetric(m, tol)) return false;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    Matrix<S> lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = m(i, j);
    if (sign<S>(determinant(lead), tol) <= 0) return false;
  }
  return true;
}

template <Field S>
InnerProduct<S>::InnerProduct(Matrix<S> gram, Tolerance tol) : gram_(std::move(gram)) {
  if (!gram_.square()) throw std::invalid_argument("inner product: Gram matrix is not square");
  if (!is_symmetric(gram_, tol)) throw std::invalid_argument("inner product: Gram matrix is not symmetric");
  if (!is_positive_definite(gram_, tol))
    throw std::invalid_argument("inner product: Gram matrix is not positive definite");
}

template <Field S>
S InnerProduct<S>::operator()(const Vec<S>& x, const Vec<S>& y) const {
  return gram_inner(gram_, x, y);
}

template <Field S>
S gram_inner(const Matrix<S>& gram, const Vec<S>& x, const Vec<S>& y) {
  if (gram.rows() != x.size() || gram.cols() != y.size())
    throw std::invalid_argument("gram_inner: dimension mismatch");
  S s(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    S row(0);
    for (std::size_t j = 0; j < y.size(); ++j) row += gram(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

template <Field S>
Vec<S> normalize_ray(Vec<S> v) {
  if constexpr (is_exact_v<S>) {
    mpz_class l(1), g(0);
    for (const auto& x : v) {
      if (x == 0) continue;
      l = lcm(l, mpz_class(x.get_den()));
    }
    for (auto& x : v) {
      x *= Rational(l);
      x.canonicalize();
      g = gcd(g, mpz_class(x.get_num()));
    }
    if (g != 0 && g != 1)
      for (auto& x : v) {
        x /= Rational(g);
        x.canonicalize();
      }
  } else {
    double m = max_abs(v);
    if (m > 0)
      for (auto& x : v) x /= m;
  }
  return v;
}

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) {
    if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r;
    r.words_.resize(std::min(words_.size(), o.words_.size()));
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }
  bool subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t ow = k < o.words_.size() ? o.words_[k] : 0;
      if (words_[k] & ~ow) return false;
    }
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

template <Field S>
struct Ray {
  Vec<S> v;
  Bitset zero;  // processed constraints tight at v
};

}  // namespace

template <Field S>
ConeV<S> dual_cone(const ConeV<S>& c, const InnerProduct<S>& g, Tolerance tol) {
  if (c.generators.empty()) throw std::invalid_argument("dual_cone: cone has no generators");
  const std::size_t d = c.dim();
  if (g.dim() != d) throw std::invalid_argument("dual_cone: inner product dimension mismatch");

  std::vector<Vec<S>> lineality;
  for (std::size_t i = 0; i < d; ++i) {
    Vec<S> e = zeros<S>(d);
    e[i] = S(1);
    lineality.push_back(std::move(e));
  }
  std::vector<Ray<S>> rays;

  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    if (c.generators[k].size() != d) throw std::invalid_argument("dual_cone: generator dimension mismatch");
    const Vec<S> a = g.lower(c.generators[k]);

    std::size_t pick = lineality.size();
    for (std::size_t i = 0; i < lineality.size(); ++i)
      if (sign<S>(dot(a, lineality[i]), tol) != 0) { pick = i; break; }

    if (pick != lineality.size()) {
      Vec<S> lstar = lineality[pick];
      S al = dot(a, lstar);
      if (al < 0) {
        lstar = S(-1) * lstar;
        al = -al;
      }
      lineality.erase(lineality.begin() + static_cast<std::ptrdiff_t>(pick));
      for (auto& l : lineality) {
        S f = dot(a, l) / al;
        if (f != 0) l = normalize_ray(l - f * lstar);
      }
      for (auto& r : rays) {
        S f = dot(a, r.v) / al;
        if (f != 0) r.v = normalize_ray(r.v - f * lstar);
        r.zero.set(k);
      }
      Ray<S> nr{normalize_ray(lstar), Bitset{}};
      for (std::size_t j = 0; j < k; ++j) nr.zero.set(j);
      rays.push_back(std::move(nr));
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<Ray<S>> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      int s = sign<S>(dot(a, rays[i].v), tol);
      if (s > 0) pos.push_back(i);
      if (s < 0) neg.push_back(i);
      if (s >= 0) {
        Ray<S> r = rays[i];
        if (s == 0) r.zero.set(k);
        next.push_back(std::move(r));
      }
    }
    // Two rays are adjacent when no third ray is tight on all their common constraints.
    const std::size_t min_common = d >= lineality.size() + 2 ? d - lineality.size() - 2 : 0;
    for (auto p : pos) {
      for (auto n : neg) {
        Bitset common = rays[p].zero & rays[n].zero;
        if (common.count() < min_common) continue;
        bool adjacent = true;
        for (std::size_t q = 0; q < rays.size() && adjacent; ++q) {
          if (q == p || q == n) continue;
          if (common.subset_of(rays[q].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        S ap = dot(a, rays[p].v);
        S an = dot(a, rays[n].v);
        Vec<S> v = ap * rays[n].v - an * rays[p].v;
        common.set(k);
        next.push_back({normalize_ray(std::move(v)), common});
      }
    }
    rays = std::move(next);
  }

  ConeV<S> out;
  out.lineality_dim = lineality.size();
  for (auto& r : rays) {
    bool dup = false;
    for (const auto& e : out.generators)
      if (approx_eq(e, r.v, tol)) { dup = true; break; }
    if (!dup) out.generators.push_back(std::move(r.v));
  }
  for (auto& l : lineality) {
    Vec<S> n = normalize_ray(l);
    out.generators.push_back(n);
    out.generators.push_back(S(-1) * n);
  }
  if (out.generators.empty()) out.generators.push_back(zeros<S>(d));
  return out;
}

template <Field S>
bool cone_member(const ConeV<S>& c, const Vec<S>& x, Tolerance tol) {
  const std::size_t m = c.generators.size();
  const std::size_t d = x.size();
  if (m == 0) throw std::invalid_argument("cone_member: cone has no generators");
  if (c.dim() != d) throw std::invalid_argument("cone_member: dimension mismatch");
  LinearProgram<S> lp(m);
  lp.all_nonnegative();
  for (std::size_t i = 0; i < d; ++i) {
    Vec<S> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = c.generators[j][i];
    lp.add(std::move(row), Relation::eq, x[i]);
  }
  return lp_feasible(lp, tol).has_value();
}

template <Field S>
bool cones_equal(const ConeV<S>& a, const ConeV<S>& b, Tolerance tol) {
  if (a.dim() != b.dim()) return false;
  for (const auto& v : a.generators)
    if (!cone_member(b, v, tol)) return false;
  for (const auto& v : b.generators)
    if (!cone_member(a, v, tol)) return false;
  return true;
}

template <Field S>
AffineHullInfo affine_hull_check(const std::vector<Vec<S>>& points, Tolerance tol) {
  if (points.empty()) throw std::invalid_argument("affine_hull_check: no points");
  std::vector<Vec<S>> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(points[i] - points[0]);
  AffineHullInfo info;
  info.affine_dim = rank_of(diffs, tol);
  // The origin lies off the affine hull iff the linear span is one dimension larger.
  info.origin_outside = rank_of(points, tol) == info.affine_dim + 1;
  return info;
}

#define GPTLAB_INSTANTIATE(S)                                                         \
  template class InnerProduct<S>;                                                     \
  template bool is_positive_definite(const Matrix<S>&, Tolerance);                    \
  template S gram_inner(const Matrix<S>&, const Vec<S>&, const Vec<S>&);              \
  template Vec<S> normalize_ray(Vec<S>);                                              \
  template ConeV<S> dual_cone(const ConeV<S>&, const InnerProduct<S>&, Tolerance);    \
  template bool cone_member(const ConeV<S>&, const Vec<S>&, Tolerance);               \
  template bool cones_equal(const ConeV<S>&, const ConeV<S>&, Tolerance);             \
  template AffineHullInfo affine_hull_check(const std::vector<Vec<S>>&, Tolerance);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab

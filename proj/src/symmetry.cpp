#include "gptlab/symmetry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace gptlab {

namespace {

// Slack for matching T v_i against the vertex list after a float solve.
constexpr double kMatchSlack = 1e-7;

template <Field S>
Tolerance match_tol(const Theory<S>& t) {
  if constexpr (is_exact_v<S>) {
    return t.tol;
  } else {
    return Tolerance{std::max(t.tol.abs, kMatchSlack)};
  }
}

template <Field S>
void sort_elements(SymmetryGroup<S>& g) {
  std::sort(g.elements.begin(), g.elements.end(),
            [](const GroupElement<S>& a, const GroupElement<S>& b) { return a.perm < b.perm; });
}

template <Field S>
SymmetryGroup<S> symmetric_group(std::size_t d) {
  SymmetryGroup<S> g;
  std::vector<std::size_t> sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    Matrix<S> p(d, d);
    for (std::size_t i = 0; i < d; ++i) p(sigma[i], i) = S(1);
    g.elements.push_back({std::move(p), sigma});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return g;
}

SymmetryGroup<double> dihedral_group(int n) {
  SymmetryGroup<double> g;
  const auto un = static_cast<std::size_t>(n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    const double c = std::cos(a), s = std::sin(a);
    Matrix<double> rot = Matrix<double>::identity(3);
    rot(0, 0) = c;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = c;
    Matrix<double> ref = Matrix<double>::identity(3);
    ref(0, 0) = c;
    ref(0, 1) = s;
    ref(1, 0) = s;
    ref(1, 1) = -c;
    std::vector<std::size_t> prot(un), pref(un);
    for (int i = 0; i < n; ++i) {
      prot[static_cast<std::size_t>(i)] = static_cast<std::size_t>((i + k) % n);
      pref[static_cast<std::size_t>(i)] = static_cast<std::size_t>(((k - i) % n + n) % n);
    }
    g.elements.push_back({rot, prot});
    g.elements.push_back({ref, pref});
  }
  sort_elements(g);
  return g;
}

template <Field S>
class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const Theory<S>& t) : t_(t), n_(t.num_vertices()), d_(t.dim()), tol_(match_tol(t)) {
    Matrix<S> q(d_, d_);
    for (const auto& v : t.vertices)
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) q(i, j) += v[i] * v[j];
    auto qinv = inverse(q, t.tol);
    if (!qinv) throw TheoryError("automorphism search: vertices do not span V");
    gram_ = Matrix<S>(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Vec<S> qi = *qinv * t.vertices[i];
      for (std::size_t j = 0; j < n_; ++j) gram_(i, j) = dot(t.vertices[j], qi);
    }
    // Greedy spanning subset in vertex order.
    std::vector<Vec<S>> chosen;
    for (std::size_t i = 0; i < n_ && basis_.size() < d_; ++i) {
      chosen.push_back(t.vertices[i]);
      if (rank_of(chosen, t.tol) == chosen.size()) {
        basis_.push_back(i);
      } else {
        chosen.pop_back();
      }
    }
    auto binv = inverse(Matrix<S>::from_columns(chosen), t.tol);
    if (!binv) throw TheoryError("automorphism search: vertices do not span V");
    basis_inv_ = *binv;
  }

  std::vector<std::size_t> first_level() const {
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < n_; ++j)
      if (approx_eq<S>(gram_(j, j), gram_(basis_[0], basis_[0]), tol_)) c.push_back(j);
    return c;
  }

  std::vector<GroupElement<S>> run_from(std::size_t first) const {
    std::vector<GroupElement<S>> out;
    std::vector<std::size_t> images{first};
    std::vector<bool> used(n_, false);
    used[first] = true;
    extend(images, used, out);
    return out;
  }

 private:
  void extend(std::vector<std::size_t>& images, std::vector<bool>& used, std::vector<GroupElement<S>>& out) const {
    const std::size_t k = images.size();
    if (k == basis_.size()) {
      complete(images, out);
      return;
    }
    const std::size_t bk = basis_[k];
    for (std::size_t j = 0; j < n_; ++j) {
      if (used[j] || !approx_eq<S>(gram_(j, j), gram_(bk, bk), tol_)) continue;
      bool ok = true;
      for (std::size_t l = 0; l < k && ok; ++l)
        ok = approx_eq<S>(gram_(j, images[l]), gram_(bk, basis_[l]), tol_);
      if (!ok) continue;
      used[j] = true;
      images.push_back(j);
      extend(images, used, out);
      images.pop_back();
      used[j] = false;
    }
  }

  void complete(const std::vector<std::size_t>& images, std::vector<GroupElement<S>>& out) const {
    std::vector<Vec<S>> targets;
    for (auto j : images) targets.push_back(t_.vertices[j]);
    Matrix<S> tm = Matrix<S>::from_columns(targets) * basis_inv_;
    std::vector<std::size_t> perm(n_);
    std::vector<bool> hit(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      Vec<S> img = tm * t_.vertices[i];
      std::size_t found = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (!hit[j] && approx_eq(img, t_.vertices[j], tol_)) { found = j; break; }
      if (found == n_) return;
      hit[found] = true;
      perm[i] = found;
    }
    out.push_back({std::move(tm), std::move(perm)});
  }

  const Theory<S>& t_;
  std::size_t n_, d_;
  Tolerance tol_;
  Matrix<S> gram_;
  std::vector<std::size_t> basis_;
  Matrix<S> basis_inv_;
};

}  // namespace

template <Field S>
SymmetryGroup<S> automorphism_group_search(const Theory<S>& t, Exec exec) {
  AutomorphismSearch<S> search(t);
  const auto first = search.first_level();
  std::vector<std::vector<GroupElement<S>>> parts(first.size());
  parallel_for(first.size(), exec, [&](std::size_t i) { parts[i] = search.run_from(first[i]); });
  SymmetryGroup<S> g;
  for (auto& p : parts)
    for (auto& e : p) g.elements.push_back(std::move(e));
  sort_elements(g);
  return g;
}

template <Field S>
SymmetryGroup<S> automorphism_group(const Theory<S>& t, Exec exec) {
  if (t.kind == TheoryKind::classical) return symmetric_group<S>(t.dim());
  if constexpr (!is_exact_v<S>) {
    if (t.kind == TheoryKind::polygon || t.kind == TheoryKind::disc_approx || t.kind == TheoryKind::psi_polygon)
      return dihedral_group(t.param);
  }
  return automorphism_group_search(t, exec);
}

template <Field S>
bool is_closed(const SymmetryGroup<S>& g) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < g.elements.size(); ++i) index[g.elements[i].perm] = i;
  if (index.size() != g.elements.size()) return false;
  for (const auto& a : g.elements)
    for (const auto& b : g.elements) {
      std::vector<std::size_t> c(b.perm.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.perm[b.perm[i]];
      auto it = index.find(c);
      if (it == index.end()) return false;
      if (!approx_eq(a.matrix * b.matrix, g.elements[it->second].matrix, Tolerance{kMatchSlack})) return false;
    }
  return true;
}

template <Field S>
bool is_transitive(const SymmetryGroup<S>& g, std::size_t num_vertices) {
  std::vector<bool> seen(num_vertices, false);
  std::size_t count = 0;
  for (const auto& e : g.elements) {
    const auto img = e.perm.at(0);
    if (!seen[img]) {
      seen[img] = true;
      ++count;
    }
  }
  return count == num_vertices;
}

template <Field S>
Vec<S> maximally_mixed(const Theory<S>& t, const SymmetryGroup<S>& g) {
  if (!is_transitive(g, t.num_vertices())) throw TheoryError("maximally mixed state needs a transitive group");
  Vec<S> m = zeros<S>(t.dim());
  for (const auto& v : t.vertices) m = m + v;
  return (S(1) / from_int<S>(static_cast<long>(t.num_vertices()))) * m;
}

template <Field S>
Matrix<S> averaged_inner_product(const SymmetryGroup<S>& g) {
  if (g.elements.empty()) throw std::invalid_argument("empty group");
  const std::size_t d = g.elements.front().matrix.rows();
  Matrix<S> sum(d, d);
  for (const auto& e : g.elements) sum += e.matrix.transpose() * e.matrix;
  return sum * (S(1) / from_int<S>(static_cast<long>(g.order())));
}

template <Field S>
Matrix<S> projector_pm(const SymmetryGroup<S>& g) {
  if (g.elements.empty()) throw std::invalid_argument("empty group");
  const std::size_t d = g.elements.front().matrix.rows();
  Matrix<S> sum(d, d);
  for (const auto& e : g.elements) sum += e.matrix;
  return sum * (S(1) / from_int<S>(static_cast<long>(g.order())));
}

Theory<double> rescale_unit_norm(const Theory<double>& t, const SymmetryGroup<double>& g) {
  const Vec<double> wm = maximally_mixed(t, g);
  const double s = std::sqrt(dot(wm, wm));
  std::vector<Vec<double>> verts;
  for (const auto& v : t.vertices) verts.push_back((1.0 / s) * v);
  auto r = make_theory<double>(t.name, std::move(verts), s * t.unit, t.inner, t.tol);
  r.kind = t.kind;
  r.param = t.param;
  return r;
}

CanonicalForm canonicalize(const Theory<double>& t) {
  const auto g = automorphism_group(t);
  if (!is_transitive(g, t.num_vertices())) throw TheoryError("canonicalize: theory is not transitive");
  const double s = std::sqrt(dot(maximally_mixed(t, g), maximally_mixed(t, g)));
  const Theory<double> rt = rescale_unit_norm(t, g);
  const InnerProduct<double> avg(averaged_inner_product(g));
  const Vec<double> wm = maximally_mixed(rt, g);
  const std::size_t d = t.dim();

  // Gram-Schmidt on v_i - w_M under the averaged product, vertex 0 first.
  std::vector<Vec<double>> basis;
  const double scale_tol = 1e-9;
  for (const auto& v : rt.vertices) {
    if (basis.size() + 1 == d) break;
    Vec<double> w = v - wm;
    for (int pass = 0; pass < 2; ++pass) {
      w = w - avg(wm, w) * wm;
      for (const auto& b : basis) w = w - avg(b, w) * b;
    }
    const double nw = std::sqrt(avg(w, w));
    if (nw <= scale_tol) continue;
    basis.push_back((1.0 / nw) * w);
  }
  if (basis.size() + 1 != d) throw TheoryError("canonicalize: affine hull has the wrong dimension");
  basis.push_back(wm);

  CanonicalForm c;
  c.basis = Matrix<double>::from_columns(basis);
  c.scale = s;
  // The basis is orthonormal under the averaged product, so B^{-1} = B^T A.
  c.state_map = (c.basis.transpose() * avg.gram()) * (1.0 / s);
  c.effect_map = (c.basis.transpose() * t.inner.gram()) * s;
  std::vector<Vec<double>> verts;
  for (const auto& v : t.vertices) verts.push_back(c.state_map * v);
  c.theory = make_theory<double>(t.name + "-canonical", std::move(verts), c.effect_map * t.unit, std::nullopt, t.tol);
  c.theory.canonicalized = true;
  c.theory.param = t.param;
  return c;
}

Vec<double> to_canonical_effect(const CanonicalForm& c, const Vec<double>& e) { return c.effect_map * e; }

Measurement<double> to_canonical(const CanonicalForm& c, const Measurement<double>& m) {
  Measurement<double> out = m;
  for (auto& e : out.effects) e = to_canonical_effect(c, e);
  return out;
}

template <Field S>
bool is_self_dual(const Theory<S>& t, const Matrix<S>& gram) {
  const InnerProduct<S> ip(gram, t.tol);
  return cones_equal(t.cone, dual_cone(t.cone, ip, t.tol), t.tol);
}

template <Field S>
bool is_self_dual(const Theory<S>& t) {
  return is_self_dual(t, t.inner.gram());
}

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

constexpr double kSpreadLimit = 1e-7;

}  // namespace

XiResult xi_canonicalize(const Theory<double>& t, const Matrix<double>& j) {
  const std::size_t d = t.dim();
  if (j.rows() != d || j.cols() != d) throw std::invalid_argument("xi_canonicalize: J has the wrong shape");
  const auto g = automorphism_group(t);
  if (!is_transitive(g, t.num_vertices())) throw TheoryError("xi_canonicalize: theory is not transitive");
  const Matrix<double> a = averaged_inner_product(g);
  const InnerProduct<double> avg(a);
  const Tolerance tol = t.tol;

  // Strict positivity: A J symmetric positive definite and J(V_+) = dual cone.
  const Matrix<double> aj = a * j;
  const double sym_tol = tol.abs * std::max(1.0, max_abs(aj));
  if (!is_symmetric(aj, Tolerance{sym_tol})) throw TheoryError("xi_canonicalize: J is not self-adjoint under the averaged product");
  if (!is_positive_definite(aj, Tolerance{sym_tol})) throw TheoryError("xi_canonicalize: J is not positive definite");
  for (const auto& v : t.vertices) {
    const Vec<double> jv = j * v;
    for (const auto& w : t.vertices)
      if (sign(avg(jv, w), Tolerance{sym_tol}) < 0) throw TheoryError("xi_canonicalize: J does not map V_+ into its dual");
  }
  const auto jinv = inverse(j);
  if (!jinv) throw TheoryError("xi_canonicalize: J is singular");
  const auto dual = dual_cone(t.cone, avg, tol);
  for (const auto& dg : dual.generators)
    if (!cone_member(t.cone, *jinv * dg, tol)) throw TheoryError("xi_canonicalize: J does not map V_+ onto its dual");

  Matrix<double> jav(d, d);
  for (const auto& e : g.elements) {
    const auto tinv = inverse(e.matrix);
    jav += *tinv * j * e.matrix;
  }
  jav *= 1.0 / static_cast<double>(g.order());

  const Vec<double> wm = maximally_mixed(t, g);
  jav *= avg(wm, wm) / avg(wm, jav * wm);

  // Eigenvalues of J_av on the complement of w_M, through the symmetric form L^T J L^{-T}.
  const Eigen::MatrixXd ea = to_eigen(a);
  const Eigen::LLT<Eigen::MatrixXd> llt(ea);
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd sym = l.transpose() * to_eigen(jav) * l.transpose().inverse();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  Eigen::VectorXd ym(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) ym(static_cast<Eigen::Index>(i)) = wm[i];
  ym = l.transpose() * ym;
  ym.normalize();
  Eigen::Index skip = 0;
  double best = -1;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double overlap = std::abs(es.eigenvectors().col(k).dot(ym));
    if (overlap > best) {
      best = overlap;
      skip = k;
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    if (k == skip) continue;
    const double ev = es.eigenvalues()(k);
    lo = std::min(lo, ev);
    hi = std::max(hi, ev);
    sum += ev;
  }
  XiResult res;
  res.xi = sum / static_cast<double>(d - 1);
  res.eigen_spread = (hi - lo) / std::abs(res.xi);
  if (res.eigen_spread > kSpreadLimit)
    throw TheoryError("xi_canonicalize: symmetrized J is not a multiple of the identity off w_M");
  if (res.xi <= 0) throw TheoryError("xi_canonicalize: non-positive xi");

  const Matrix<double> p = projector_pm(g);
  const Matrix<double> perp = Matrix<double>::identity(d) - p;
  res.xi_map = p + perp * std::sqrt(res.xi);
  std::vector<Vec<double>> verts;
  for (const auto& v : t.vertices) verts.push_back(res.xi_map * v);
  res.theory = make_theory<double>(t.name + "-xi", std::move(verts), t.unit, t.inner, tol);
  if (!is_self_dual(res.theory, a)) throw TheoryError("xi_canonicalize: result is not self-dual");
  return res;
}

#define GPTLAB_INSTANTIATE(S)                                                      \
  template SymmetryGroup<S> automorphism_group(const Theory<S>&, Exec);            \
  template SymmetryGroup<S> automorphism_group_search(const Theory<S>&, Exec);     \
  template bool is_closed(const SymmetryGroup<S>&);                                \
  template bool is_transitive(const SymmetryGroup<S>&, std::size_t);               \
  template Vec<S> maximally_mixed(const Theory<S>&, const SymmetryGroup<S>&);      \
  template Matrix<S> averaged_inner_product(const SymmetryGroup<S>&);              \
  template Matrix<S> projector_pm(const SymmetryGroup<S>&);                        \
  template bool is_self_dual(const Theory<S>&, const Matrix<S>&);                  \
  template bool is_self_dual(const Theory<S>&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab

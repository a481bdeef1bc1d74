#pragma once

#include <vector>

#include "gptlab/model.hpp"
#include "gptlab/parallel.hpp"

namespace gptlab {

/// Linear map T preserving the vertex set, with T v_i = v_{perm[i]}.
template <Field S>
struct GroupElement {
  Matrix<S> matrix;
  std::vector<std::size_t> perm;
};

/// Elements sorted by permutation; the identity comes first.
template <Field S>
struct SymmetryGroup {
  std::vector<GroupElement<S>> elements;
  std::size_t order() const { return elements.size(); }
};

/// GL(Omega). Built-in families use their closed-form groups; everything else goes through
/// automorphism_group_search.
template <Field S>
SymmetryGroup<S> automorphism_group(const Theory<S>& t, Exec exec = Exec::parallel);

/// Backtracking over vertex permutations pruned by the invariant Gram matrix v_i^T Q^{-1} v_j,
/// Q = sum v v^T. Once a spanning subset is placed, T is solved and checked on every vertex.
/// Throws TheoryError when the vertices do not span V.
template <Field S>
SymmetryGroup<S> automorphism_group_search(const Theory<S>& t, Exec exec = Exec::parallel);

/// Closed under composition, via permutation lookup.
template <Field S>
bool is_closed(const SymmetryGroup<S>& g);

template <Field S>
bool is_transitive(const SymmetryGroup<S>& g, std::size_t num_vertices);

/// Vertex barycentre; throws TheoryError unless the group acts transitively.
template <Field S>
Vec<S> maximally_mixed(const Theory<S>& t, const SymmetryGroup<S>& g);

/// (1/|g|) sum T^T T.
template <Field S>
Matrix<S> averaged_inner_product(const SymmetryGroup<S>& g);

/// (1/|g|) sum T, the projector onto the invariant subspace.
template <Field S>
Matrix<S> projector_pm(const SymmetryGroup<S>& g);

/// Scales vertices by 1/|w_M| and the unit effect by |w_M| (Euclidean norm).
Theory<double> rescale_unit_norm(const Theory<double>& t, const SymmetryGroup<double>& g);

struct CanonicalForm {
  Theory<double> theory;        // inner = identity, unit = w_M = (0, ..., 0, 1)
  Matrix<double> basis;         // columns: orthonormal basis of aff(Omega) - w_M, then w_M
  Matrix<double> state_map;     // raw coordinates -> canonical coordinates
  Matrix<double> effect_map;    // raw covector -> canonical covector
  double scale = 1;             // rescaling factor applied to states before state_map
};

CanonicalForm canonicalize(const Theory<double>& t);

/// Maps a raw effect or measurement into the canonical coordinates of `c`.
Vec<double> to_canonical_effect(const CanonicalForm& c, const Vec<double>& e);
Measurement<double> to_canonical(const CanonicalForm& c, const Measurement<double>& m);

/// V_+ equals its dual under `gram`.
template <Field S>
bool is_self_dual(const Theory<S>& t, const Matrix<S>& gram);

/// Self-duality under the theory's own pairing.
template <Field S>
bool is_self_dual(const Theory<S>& t);

struct XiResult {
  Theory<double> theory;
  Matrix<double> xi_map;       // P_M + sqrt(xi) P_M-perp
  double xi = 1;
  double eigen_spread = 0;     // relative spread of the complement eigenvalues
};

/// Symmetrizes a strictly positive J, extracts xi, and returns the self-dual image.
XiResult xi_canonicalize(const Theory<double>& t, const Matrix<double>& j);

}  // namespace gptlab

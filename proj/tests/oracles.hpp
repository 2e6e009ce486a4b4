// Test-only brute-force oracles.  Everything here is deliberately naive and
// independent of the closed-form implementation paths it checks.
#pragma once

#include <functional>
#include <set>
#include <vector>

#include "qgeom/field.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/qcount.hpp"
#include "qgeom/spaces.hpp"

namespace oracles {

using qgeom::Code;
using qgeom::Count;
using qgeom::FieldSpec;
using qgeom::Matrix;
using qgeom::Shape;
using qgeom::Subspace;
using qgeom::TypeVector;

/// Every m x n matrix over f, ascending odometer order.
inline void for_all_matrices(const FieldSpec& f, int m, int n,
                             const std::function<void(const Matrix&)>& fn) {
  Matrix mat(f, m, n);
  for (;;) {
    fn(mat);
    bool wrapped = true;
    for (std::size_t pos = mat.entries.size(); pos > 0;) {
      --pos;
      if (++mat.entries[pos] < f.q) {
        wrapped = false;
        break;
      }
      mat.entries[pos] = 0;
    }
    if (wrapped) break;
  }
}

/// Rank histogram of all m x n matrices, scanned exhaustively.
inline std::vector<Count> rank_histogram(const FieldSpec& f, int m, int n) {
  std::vector<Count> hist(static_cast<std::size_t>(std::min(m, n)) + 1, 0);
  for_all_matrices(f, m, n, [&](const Matrix& mat) {
    ++hist[static_cast<std::size_t>(qgeom::rank_of(mat))];
  });
  return hist;
}

/// All q^k member vectors of a subspace, as row vectors.
inline std::set<std::vector<Code>> vectors_of(const Subspace& s) {
  const FieldSpec& f = s.field();
  const int k = s.dim(), n = s.ambient();
  std::set<std::vector<Code>> out;
  std::vector<Code> coeff(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::vector<Code> v(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < k; ++i) {
      if (coeff[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 0; j < n; ++j)
        v[static_cast<std::size_t>(j)] =
            f.add(v[static_cast<std::size_t>(j)],
                  f.mul(coeff[static_cast<std::size_t>(i)], s.basis.at(i, j)));
    }
    out.insert(std::move(v));
    bool wrapped = true;
    for (std::size_t pos = coeff.size(); pos > 0;) {
      --pos;
      if (++coeff[pos] < f.q) {
        wrapped = false;
        break;
      }
      coeff[pos] = 0;
    }
    if (wrapped) break;
  }
  return out;
}

/// Membership-based intersection dimension: log_q of the common vector count.
inline int intersect_dim_by_membership(const Subspace& a, const Subspace& b) {
  const auto va = vectors_of(a), vb = vectors_of(b);
  std::size_t common = 0;
  for (const auto& v : va)
    if (vb.count(v)) ++common;
  int d = 0;
  std::size_t p = 1;
  while (p < common) {
    p *= a.field().q;
    ++d;
  }
  return d;
}

/// Type computed the definitional way, through explicit intersections with
/// the filtration subspaces.  Cross-checks the rank-of-leading-columns route.
inline TypeVector type_via_intersect(const Shape& shape, const Subspace& s) {
  TypeVector k(static_cast<std::size_t>(shape.t()));
  k[0] = s.dim();
  for (int i = 2; i <= shape.t(); ++i)
    k[static_cast<std::size_t>(i - 1)] =
        qgeom::intersect(s, qgeom::e_subspace(shape, i, s.field())).dim();
  return k;
}

/// All subspaces of every dimension of GF(q)^n.
inline std::vector<Subspace> all_subspaces(int n, const FieldSpec& f) {
  std::vector<Subspace> out;
  for (int k = 0; k <= n; ++k)
    for (const Subspace& s : qgeom::collect_subspaces(n, k, f)) out.push_back(s);
  return out;
}

}  // namespace oracles

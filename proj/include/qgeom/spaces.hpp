#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/field.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/qcount.hpp"

namespace qgeom {

/// Member of the block upper-triangular invertible group attached to a shape.
struct GroupElement {
  Shape shape;
  Matrix mat;  // N x N, invertible, zero below the block diagonal
};

inline bool is_block_upper_triangular(const Shape& shape, const Matrix& m) {
  const int n = shape.total();
  if (m.rows != n || m.cols != n) return false;
  for (int bi = 0; bi < shape.t(); ++bi) {
    const int lo = shape.offset(bi);
    const int hi = lo + shape.blocks[static_cast<std::size_t>(bi)];
    for (int i = lo; i < hi; ++i)
      for (int j = 0; j < lo; ++j)
        if (m.at(i, j) != 0) return false;
  }
  return true;
}

inline constexpr std::uint64_t kDefaultGroupGuard = 1'000'000;
inline constexpr std::uint64_t kDefaultSubspaceGuard = 100'000;

/// The filtration subspace E_i: the span of the last n_i + ... + n_t standard
/// basis vectors.  E_1 is the full space by convention.
inline Subspace e_subspace(const Shape& shape, int i, const FieldSpec& f) {
  check_shape(shape);
  if (i < 1 || i > shape.t())
    throw std::invalid_argument("e_subspace: index " + std::to_string(i) + " outside [1, t]");
  const int n = shape.total();
  const int start = shape.offset(i - 1);
  Matrix m(f, n - start, n);
  for (int r = 0; r < m.rows; ++r) m.at(r, start + r) = 1;
  return Subspace::from_rref(std::move(m));
}

/// Type of a subspace: k_1 = dim s, k_i = dim(s ∩ E_i).  Computed as
/// k_i = k_1 - rank(leading-block columns of the basis), one rank per prefix;
/// the intersect()-based route is the cross-check in tests.
inline TypeVector type_of(const Shape& shape, const Subspace& s) {
  check_shape(shape);
  if (s.ambient() != shape.total())
    throw std::invalid_argument("type_of: subspace ambient does not match the shape");
  const int t = shape.t();
  const int k1 = s.dim();
  TypeVector k(static_cast<std::size_t>(t));
  k[0] = k1;
  for (int i = 1; i < t; ++i) {
    const int prefix = shape.offset(i);
    Matrix lead(s.field(), k1, prefix);
    for (int r = 0; r < k1; ++r)
      for (int c = 0; c < prefix; ++c) lead.at(r, c) = s.basis.at(r, c);
    k[static_cast<std::size_t>(i)] = k1 - rank_of(lead);
  }
  return k;
}

/// Canonical representative of a type class: the block form with an (I 0)
/// block of height k_i - k_{i+1} in diagonal position i.
inline Subspace orbit_representative(const Shape& shape, const TypeVector& k,
                                     const FieldSpec& f) {
  if (!is_valid_type(shape, k))
    throw std::invalid_argument("orbit_representative: invalid type for the shape");
  const int t = shape.t();
  const int n = shape.total();
  Matrix m(f, k[0], n);
  int row = 0;
  for (int i = 0; i < t; ++i) {
    const int next = i + 1 < t ? k[static_cast<std::size_t>(i + 1)] : 0;
    const int h = k[static_cast<std::size_t>(i)] - next;
    const int off = shape.offset(i);
    for (int r = 0; r < h; ++r, ++row) m.at(row, off + r) = 1;
  }
  return Subspace::from_rref(std::move(m));
}

/// Stream every subspace of the given type exactly once: the full
/// k_1-dimensional enumeration filtered by type_of.  The filter is the oracle
/// of record; structured generators must reproduce this set exactly.
inline void enumerate_by_type(const Shape& shape, const TypeVector& k,
                              const FieldSpec& f,
                              const std::function<void(const Subspace&)>& fn) {
  check_type_length(shape, k);
  if (!is_valid_type(shape, k)) return;
  enumerate_subspaces(shape.total(), k[0], f, [&](const Subspace& s) {
    if (type_of(shape, s) == k) fn(s);
  });
}

inline std::vector<Subspace> collect_by_type(const Shape& shape,
                                             const TypeVector& k,
                                             const FieldSpec& f) {
  std::vector<Subspace> out;
  enumerate_by_type(shape, k, f, [&](const Subspace& s) { out.push_back(s); });
  return out;
}

namespace detail {

/// All invertible n x n matrices over f, as flat entry blobs in ascending
/// odometer order.  Used for the diagonal blocks of the group enumeration.
inline std::vector<std::vector<Code>> gl_members(int n, const FieldSpec& f) {
  std::vector<std::vector<Code>> out;
  if (n == 0) {
    out.emplace_back();  // the empty matrix is the identity of GL_0
    return out;
  }
  Matrix m(f, n, n);
  for (;;) {
    if (rank_of(m) == n) out.push_back(m.entries);
    bool wrapped = true;
    for (std::size_t pos = m.entries.size(); pos > 0;) {
      --pos;
      if (++m.entries[pos] < f.q) {
        wrapped = false;
        break;
      }
      m.entries[pos] = 0;
    }
    if (wrapped) break;
  }
  return out;
}

}  // namespace detail

/// Stream each block upper-triangular invertible matrix exactly once.
/// Diagonal blocks run over pre-enumerated GL_{n_i}(q) member lists; the
/// strictly-upper blocks are filled freely.  The callback receives a reused
/// buffer; copy to keep.
inline void enumerate_group(const Shape& shape, const FieldSpec& f,
                            const std::function<void(const Matrix&)>& fn,
                            std::uint64_t guard = kDefaultGroupGuard) {
  check_shape(shape);
  const Count order = group_order(shape, f.q);
  if (order > guard)
    throw std::runtime_error("enumerate_group: group order " + order.str() +
                             " exceeds the guard " + std::to_string(guard));
  const int t = shape.t();
  const int n = shape.total();
  std::vector<std::vector<std::vector<Code>>> gl(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i)
    gl[static_cast<std::size_t>(i)] =
        detail::gl_members(shape.blocks[static_cast<std::size_t>(i)], f);

  std::vector<std::pair<int, int>> upper_cells;
  for (int bi = 0; bi < t; ++bi)
    for (int bj = bi + 1; bj < t; ++bj) {
      const int rlo = shape.offset(bi), rhi = rlo + shape.blocks[static_cast<std::size_t>(bi)];
      const int clo = shape.offset(bj), chi = clo + shape.blocks[static_cast<std::size_t>(bj)];
      for (int r = rlo; r < rhi; ++r)
        for (int c = clo; c < chi; ++c) upper_cells.emplace_back(r, c);
    }

  Matrix m(f, n, n);
  std::vector<std::size_t> diag_idx(static_cast<std::size_t>(t), 0);
  std::vector<Code> fill(upper_cells.size(), 0);
  const auto place_diag = [&](int bi) {
    const int off = shape.offset(bi);
    const int b = shape.blocks[static_cast<std::size_t>(bi)];
    const auto& blob = gl[static_cast<std::size_t>(bi)][diag_idx[static_cast<std::size_t>(bi)]];
    for (int r = 0; r < b; ++r)
      for (int c = 0; c < b; ++c)
        m.at(off + r, off + c) = blob[static_cast<std::size_t>(r) * b + c];
  };
  for (int bi = 0; bi < t; ++bi) place_diag(bi);
  for (;;) {
    for (std::size_t ci = 0; ci < upper_cells.size(); ++ci)
      m.at(upper_cells[ci].first, upper_cells[ci].second) = fill[ci];
    fn(m);
    // Advance: upper fill fastest, then diagonal choices right-to-left.
    bool wrapped = true;
    for (std::size_t pos = fill.size(); pos > 0;) {
      --pos;
      if (++fill[pos] < f.q) {
        wrapped = false;
        break;
      }
      fill[pos] = 0;
    }
    if (!wrapped) continue;
    int bi = t - 1;
    while (bi >= 0) {
      auto& di = diag_idx[static_cast<std::size_t>(bi)];
      if (++di < gl[static_cast<std::size_t>(bi)].size()) {
        place_diag(bi);
        break;
      }
      di = 0;
      place_diag(bi);
      --bi;
    }
    if (bi < 0) break;
  }
}

inline std::vector<GroupElement> collect_group(const Shape& shape, const FieldSpec& f,
                                               std::uint64_t guard = kDefaultGroupGuard) {
  std::vector<GroupElement> out;
  enumerate_group(shape, f, [&](const Matrix& m) { out.push_back({shape, m}); }, guard);
  return out;
}

/// Right action: the subspace spanned by basis * mat, in canonical form.
inline Subspace act(const Subspace& s, const Matrix& mat) {
  if (mat.rows != s.ambient() || mat.cols != s.ambient())
    throw std::invalid_argument("act: matrix does not match the ambient dimension");
  return Subspace::row_space(mat_mul(s.basis, mat));
}

inline Subspace act(const Subspace& s, const GroupElement& g) { return act(s, g.mat); }

}  // namespace qgeom

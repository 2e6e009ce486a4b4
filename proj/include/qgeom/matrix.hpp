#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/field.hpp"

namespace qgeom {

/// Dense row-major matrix over GF(q).  Zero-row and zero-column matrices are
/// first-class values; every operation must accept them.
struct Matrix {
  FieldSpec field;
  int rows = 0;
  int cols = 0;
  std::vector<Code> entries;  // rows * cols, row-major

  Matrix() = default;
  Matrix(FieldSpec f, int r, int c)
      : field(std::move(f)), rows(r), cols(c) {
    if (r < 0 || c < 0) throw std::invalid_argument("matrix: negative dimension");
    entries.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0);
  }

  Code& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
  Code at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }

  static Matrix identity(const FieldSpec& f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const FieldSpec& f,
                          const std::vector<std::vector<Code>>& rows_in,
                          int cols_hint = -1) {
    const int r = static_cast<int>(rows_in.size());
    const int c = r > 0 ? static_cast<int>(rows_in.front().size()) : std::max(cols_hint, 0);
    Matrix m(f, r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows_in[static_cast<std::size_t>(i)].size()) != c)
        throw std::invalid_argument("matrix: ragged rows");
      for (int j = 0; j < c; ++j) {
        const Code v = rows_in[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        f.check_code(v);
        m.at(i, j) = v;
      }
    }
    return m;
  }

  bool operator==(const Matrix& o) const {
    return field == o.field && rows == o.rows && cols == o.cols && entries == o.entries;
  }
  // Deterministic total order; used for canonical report/orbit listings.
  bool operator<(const Matrix& o) const {
    if (rows != o.rows) return rows < o.rows;
    if (cols != o.cols) return cols < o.cols;
    return entries < o.entries;
  }
};

inline void check_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) throw std::invalid_argument("matrix: field mismatch");
}

struct RrefResult {
  Matrix mat;
  int rank = 0;
  std::vector<int> pivots;
};

/// Unique reduced row-echelon form.  Row space is preserved; zero rows sink
/// to the bottom.
inline RrefResult rref(Matrix m) {
  const FieldSpec& F = m.field;
  RrefResult out;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int pivot_row = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    if (pivot_row != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pivot_row, j));
    const Code scale = F.inv(m.at(r, c));
    if (scale != 1)
      for (int j = 0; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), scale);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      const Code f = m.at(i, c);
      if (f == 0) continue;
      for (int j = 0; j < m.cols; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.mat = std::move(m);
  return out;
}

inline int rank_of(const Matrix& m) { return rref(m).rank; }

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.field, m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

inline Matrix stack_rows(const Matrix& a, const Matrix& b) {
  check_same_field(a.field, b.field);
  if (a.cols != b.cols) throw std::invalid_argument("matrix: stack with mismatched widths");
  Matrix s(a.field, a.rows + b.rows, a.cols);
  std::copy(a.entries.begin(), a.entries.end(), s.entries.begin());
  std::copy(b.entries.begin(), b.entries.end(),
            s.entries.begin() + static_cast<std::ptrdiff_t>(a.entries.size()));
  return s;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  check_same_field(a.field, b.field);
  if (a.cols != b.rows) throw std::invalid_argument("matrix: product dimension mismatch");
  const FieldSpec& F = a.field;
  Matrix c(a.field, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Code aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols; ++j) {
        const Code v = b.at(k, j);
        if (v != 0) c.at(i, j) = F.add(c.at(i, j), F.mul(aik, v));
      }
    }
  return c;
}

inline bool is_invertible(const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("matrix: invertibility needs a square matrix");
  return rank_of(m) == m.rows;
}

/// Rows span { x in F^rows : x * m = 0 }.
inline Matrix left_kernel(const Matrix& m) {
  const FieldSpec& F = m.field;
  RrefResult r = rref(transpose(m));  // solves m^T y = 0 with y = x^T
  std::vector<char> is_pivot(static_cast<std::size_t>(m.rows), 0);
  for (int p : r.pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
  std::vector<int> free_cols;
  for (int j = 0; j < m.rows; ++j)
    if (!is_pivot[static_cast<std::size_t>(j)]) free_cols.push_back(j);
  Matrix k(m.field, static_cast<int>(free_cols.size()), m.rows);
  for (int fi = 0; fi < k.rows; ++fi) {
    const int fc = free_cols[static_cast<std::size_t>(fi)];
    k.at(fi, fc) = 1;
    for (int pi = 0; pi < r.rank; ++pi)
      k.at(fi, r.pivots[static_cast<std::size_t>(pi)]) = F.neg(r.mat.at(pi, fc));
  }
  return k;
}

/// Subspace of GF(q)^n held as its unique RREF basis with no zero rows.
/// RREF uniqueness makes entry-wise equality the subspace equality.
struct Subspace {
  Matrix basis;

  int ambient() const { return basis.cols; }
  int dim() const { return basis.rows; }
  const FieldSpec& field() const { return basis.field; }

  static Subspace zero(const FieldSpec& f, int ambient) {
    return Subspace{Matrix(f, 0, ambient)};
  }
  static Subspace full(const FieldSpec& f, int ambient) {
    return Subspace{Matrix::identity(f, ambient)};
  }

  /// Canonicalize arbitrary spanning rows.
  static Subspace row_space(const Matrix& m) {
    RrefResult r = rref(m);
    Matrix b(m.field, r.rank, m.cols);
    std::copy(r.mat.entries.begin(),
              r.mat.entries.begin() + static_cast<std::ptrdiff_t>(b.entries.size()),
              b.entries.begin());
    return Subspace{std::move(b)};
  }

  /// Wrap a matrix that is already a zero-row-free RREF; validated.
  static Subspace from_rref(Matrix m) {
    int prev = -1;
    for (int i = 0; i < m.rows; ++i) {
      int p = -1;
      for (int j = 0; j < m.cols; ++j)
        if (m.at(i, j) != 0) {
          p = j;
          break;
        }
      if (p < 0 || p <= prev || m.at(i, p) != 1)
        throw std::invalid_argument("subspace: basis is not in reduced row-echelon form");
      for (int i2 = 0; i2 < m.rows; ++i2)
        if (i2 != i && m.at(i2, p) != 0)
          throw std::invalid_argument("subspace: basis is not in reduced row-echelon form");
      prev = p;
    }
    return Subspace{std::move(m)};
  }

  bool operator==(const Subspace& o) const { return basis == o.basis; }
  bool operator<(const Subspace& o) const { return basis < o.basis; }
};

inline void check_same_ambient(const Subspace& a, const Subspace& b) {
  check_same_field(a.field(), b.field());
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("subspace: ambient dimension mismatch");
}

inline Subspace sum_space(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  return Subspace::row_space(stack_rows(a.basis, b.basis));
}

/// a ∩ b via the kernel of the stacked coefficient system: solutions of
/// x·A = y·B are the left kernel rows of [A; -B].
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  check_same_ambient(a, b);
  const FieldSpec& F = a.field();
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(F, a.ambient());
  Matrix neg_b = b.basis;
  for (auto& v : neg_b.entries) v = F.neg(v);
  const Matrix k = left_kernel(stack_rows(a.basis, neg_b));
  Matrix gens(F, k.rows, a.ambient());
  for (int i = 0; i < k.rows; ++i)
    for (int r = 0; r < a.dim(); ++r) {
      const Code x = k.at(i, r);
      if (x == 0) continue;
      for (int j = 0; j < a.ambient(); ++j)
        gens.at(i, j) = F.add(gens.at(i, j), F.mul(x, a.basis.at(r, j)));
    }
  return Subspace::row_space(gens);
}

/// Image of s under deletion of the coordinates outside [lo, hi).
inline Subspace project(const Subspace& s, int lo, int hi) {
  if (lo < 0 || lo > hi || hi > s.ambient())
    throw std::invalid_argument("subspace: bad projection range");
  Matrix m(s.field(), s.dim(), hi - lo);
  for (int i = 0; i < s.dim(); ++i)
    for (int j = lo; j < hi; ++j) m.at(i, j - lo) = s.basis.at(i, j);
  return Subspace::row_space(m);
}

inline bool contains(const Subspace& outer, const Subspace& inner) {
  check_same_ambient(outer, inner);
  return rank_of(stack_rows(outer.basis, inner.basis)) == outer.dim();
}

/// Stream every k-dimensional subspace of GF(q)^n exactly once, by direct
/// RREF-pattern enumeration: choose pivot columns, fill the free entries.
/// Order is deterministic (pivot sets lexicographic, fills ascending).
inline void enumerate_subspaces(int n, int k, const FieldSpec& f,
                                const std::function<void(const Subspace&)>& fn) {
  if (n < 0 || k < 0 || k > n)
    throw std::invalid_argument("enumerate_subspaces: need 0 <= k <= n");
  if (k == 0) {
    fn(Subspace::zero(f, n));
    return;
  }
  std::vector<int> piv(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) piv[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int p : piv) is_pivot[static_cast<std::size_t>(p)] = 1;
    // Free cells: to the right of each row's pivot, outside pivot columns.
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < k; ++i)
      for (int c = piv[static_cast<std::size_t>(i)] + 1; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) cells.emplace_back(i, c);
    Matrix m(f, k, n);
    for (int i = 0; i < k; ++i) m.at(i, piv[static_cast<std::size_t>(i)]) = 1;
    std::vector<Code> fill(cells.size(), 0);
    for (;;) {
      for (std::size_t ci = 0; ci < cells.size(); ++ci)
        m.at(cells[ci].first, cells[ci].second) = fill[ci];
      fn(Subspace{m});
      // Odometer on the fill values, last cell fastest.
      bool wrapped = true;
      for (std::size_t pos = cells.size(); pos > 0;) {
        --pos;
        if (++fill[pos] < f.q) {
          wrapped = false;
          break;
        }
        fill[pos] = 0;
      }
      if (wrapped) break;
    }
    // Next pivot combination, lexicographic.
    int i = k - 1;
    while (i >= 0 && piv[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++piv[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      piv[static_cast<std::size_t>(j)] = piv[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline std::vector<Subspace> collect_subspaces(int n, int k, const FieldSpec& f) {
  std::vector<Subspace> out;
  enumerate_subspaces(n, k, f, [&](const Subspace& s) { out.push_back(s); });
  return out;
}

// --- matrix text format: one row per line, integer codes separated by single
// spaces; a blank text is the 0 x n matrix with n given by context. ---

inline std::string format_matrix(const Matrix& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) os << ' ';
      os << m.at(i, j);
    }
    os << '\n';
  }
  return os.str();
}

inline Matrix parse_matrix(const std::string& text, const FieldSpec& f,
                           int cols_hint = -1) {
  std::vector<std::vector<Code>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<Code> row;
    long long v;
    while (ls >> v) {
      if (v < 0 || static_cast<std::uint64_t>(v) >= f.q)
        throw std::invalid_argument("matrix text: entry " + std::to_string(v) + " out of range for q = " + std::to_string(f.q));
      row.push_back(static_cast<Code>(v));
    }
    if (!ls.eof())
      throw std::invalid_argument("matrix text: non-numeric entry in line '" + line + "'");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    if (cols_hint < 0)
      throw std::invalid_argument("matrix text: blank input needs a column count from context");
    return Matrix(f, 0, cols_hint);
  }
  Matrix m = Matrix::from_rows(f, rows);
  if (cols_hint >= 0 && m.cols != cols_hint)
    throw std::invalid_argument("matrix text: expected " + std::to_string(cols_hint) + " columns, got " + std::to_string(m.cols));
  return m;
}

}  // namespace qgeom

#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qgeom {

/// All counting results are exact arbitrary-precision nonnegative integers;
/// the q-power factors overflow 64 bits already at modest parameters.
using Count = boost::multiprecision::cpp_int;

/// Block sizes (n_1, ..., n_t) of the coordinate filtration.
struct Shape {
  std::vector<int> blocks;

  int t() const { return static_cast<int>(blocks.size()); }
  int total() const { return std::accumulate(blocks.begin(), blocks.end(), 0); }
  /// n_{i+1} + ... + n_t for 0-based block index i (sum of the blocks after i).
  int suffix(int i) const {
    return std::accumulate(blocks.begin() + i + 1, blocks.end(), 0);
  }
  /// n_1 + ... + n_i (0-based: sum of the first i blocks).
  int offset(int i) const {
    return std::accumulate(blocks.begin(), blocks.begin() + i, 0);
  }
  bool operator==(const Shape&) const = default;
};

/// Subspace type (k_1, ..., k_t): the ambient dimension and the dimensions of
/// the intersections with the filtration subspaces.
using TypeVector = std::vector<int>;

inline std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

inline void check_shape(const Shape& s) {
  if (s.t() < 1) throw std::invalid_argument("shape: needs at least one block");
  for (int b : s.blocks)
    if (b < 0) throw std::invalid_argument("shape: negative block size");
}

inline void check_q(long long q) {
  if (q < 2) throw std::invalid_argument("count: q must be >= 2");
}

inline Count qpow(long long q, long long exp) {
  if (exp < 0) throw std::domain_error("count: negative q-power exponent");
  Count r = 1, base = q;
  while (exp != 0) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

/// Gaussian binomial coefficient: the number of k-dimensional subspaces of
/// GF(q)^n.  Zero outside 0 <= k <= n.  Exact division of the accumulated
/// products; an inexact division is a hard logic failure.
inline Count gauss(long long n, long long k, long long q) {
  check_q(q);
  if (k < 0 || k > n) return 0;
  Count num = 1, den = 1;
  for (long long i = 0; i < k; ++i) {
    num *= qpow(q, n - i) - 1;
    den *= qpow(q, i + 1) - 1;
  }
  Count quot, rem;
  boost::multiprecision::divide_qr(num, den, quot, rem);
  if (rem != 0) throw std::logic_error("gauss: inexact division");
  return quot;
}

/// N(i; m x n): the number of m x n matrices of rank i over GF(q).
/// Negative or impossible arguments give the empty count 0; i = 0 gives 1.
inline Count count_rank_matrices(long long i, long long m, long long n, long long q) {
  check_q(q);
  if (i < 0 || i > std::min(m, n)) return 0;
  if (i == 0) return 1;
  Count r = qpow(q, i * (i - 1) / 2) * gauss(m, i, q);
  for (long long t = n - i + 1; t <= n; ++t) r *= qpow(q, t) - 1;
  return r;
}

/// Number of m-dimensional subspaces meeting a fixed m-dimensional P of
/// GF(q)^n in an (m-i)-dimensional subspace.
inline Count count_intersecting_subspaces(long long m, long long n, long long i,
                                          long long q) {
  check_q(q);
  if (m < 1 || m > n)
    throw std::invalid_argument("count_intersecting_subspaces: need 1 <= m <= n");
  if (i < 0 || i > std::min(m, n - m))
    throw std::invalid_argument("count_intersecting_subspaces: i = " + std::to_string(i) + " outside [0, min(m, n-m)]");
  return qpow(q, i * i) * gauss(n - m, i, q) * gauss(m, i, q);
}

/// Number of m2 x n blocks A2 with stacked rank(A1; A2) = t2, given any fixed
/// m1 x n base A1 of rank t1.
inline Count count_row_extension(long long t1, long long t2, long long m2,
                                 long long n, long long q) {
  check_q(q);
  if (t1 < 0 || t2 < t1) throw std::invalid_argument("count_row_extension: need 0 <= t1 <= t2");
  if (m2 < 0 || n < 0) throw std::invalid_argument("count_row_extension: negative dimension");
  return qpow(q, m2 * t1) * count_rank_matrices(t2 - t1, m2, n - t1, q);
}

/// Number of m x n2 blocks A2 with rank(A1 A2) = t2, given any fixed m x n1
/// base A1 of rank t1.
inline Count count_col_extension(long long t1, long long t2, long long m,
                                 long long n2, long long q) {
  check_q(q);
  if (t1 < 0 || t2 < t1) throw std::invalid_argument("count_col_extension: need 0 <= t1 <= t2");
  if (m < 0 || n2 < 0) throw std::invalid_argument("count_col_extension: negative dimension");
  return qpow(q, t1 * n2) * count_rank_matrices(t2 - t1, m - t1, n2, q);
}

/// Number of (m1+m2) x (n1+n2) block matrices (A B; C D) with
/// rank(C D) = alpha and rank(B; D) = alpha.
inline Count count_block_rank(long long m1, long long m2, long long n1,
                              long long n2, long long alpha, long long q) {
  check_q(q);
  if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0)
    throw std::invalid_argument("count_block_rank: negative dimension");
  if (alpha < 0) throw std::invalid_argument("count_block_rank: alpha must be >= 0");
  Count total = 0;
  for (long long l = std::max({0LL, alpha - n1, alpha - m1}); l <= alpha; ++l) {
    total += qpow(q, (m1 + n1) * l + m1 * n1) * count_rank_matrices(l, m2, n2, q) *
             count_rank_matrices(alpha - l, m1, n2 - l, q) *
             count_rank_matrices(alpha - l, m2 - l, n1, q);
  }
  return total;
}

/// |GL_n(q)| = prod_{s=0}^{n-1} (q^n - q^s).
inline Count gl_order(long long n, long long q) {
  check_q(q);
  if (n < 0) throw std::invalid_argument("gl_order: negative dimension");
  Count r = 1;
  const Count qn = qpow(q, n);
  for (long long s = 0; s < n; ++s) r *= qn - qpow(q, s);
  return r;
}

/// Order of the block upper-triangular invertible group for the shape:
/// prod_i |GL_{n_i}(q)| * q^{sum_{i<j} n_i n_j}.
inline Count group_order(const Shape& shape, long long q) {
  check_shape(shape);
  check_q(q);
  Count r = 1;
  long long upper = 0;
  for (int i = 0; i < shape.t(); ++i) {
    r *= gl_order(shape.blocks[static_cast<std::size_t>(i)], q);
    for (int j = i + 1; j < shape.t(); ++j)
      upper += static_cast<long long>(shape.blocks[static_cast<std::size_t>(i)]) *
               shape.blocks[static_cast<std::size_t>(j)];
  }
  return r * qpow(q, upper);
}

inline void check_type_length(const Shape& shape, const TypeVector& k) {
  check_shape(shape);
  if (static_cast<int>(k.size()) != shape.t())
    throw std::invalid_argument("type: length does not match the shape");
}

/// A type is realizable iff 0 <= k_i - k_{i+1} <= n_i for i < t and
/// 0 <= k_t <= n_t.
inline bool is_valid_type(const Shape& shape, const TypeVector& k) {
  check_type_length(shape, k);
  const int t = shape.t();
  for (int i = 0; i + 1 < t; ++i) {
    const int d = k[static_cast<std::size_t>(i)] - k[static_cast<std::size_t>(i + 1)];
    if (d < 0 || d > shape.blocks[static_cast<std::size_t>(i)]) return false;
  }
  const int kt = k[static_cast<std::size_t>(t - 1)];
  return kt >= 0 && kt <= shape.blocks[static_cast<std::size_t>(t - 1)];
}

/// Number of subspaces of the given type (the anzahl theorem); 0 for an
/// unrealizable type.
inline Count anzahl(const Shape& shape, const TypeVector& k, long long q) {
  check_q(q);
  if (!is_valid_type(shape, k)) return 0;
  const int t = shape.t();
  Count r = gauss(shape.blocks[static_cast<std::size_t>(t - 1)],
                  k[static_cast<std::size_t>(t - 1)], q);
  for (int j = 0; j + 1 < t; ++j) {
    const long long d = k[static_cast<std::size_t>(j)] - k[static_cast<std::size_t>(j + 1)];
    r *= qpow(q, d * (shape.suffix(j) - k[static_cast<std::size_t>(j + 1)]));
    r *= gauss(shape.blocks[static_cast<std::size_t>(j)], d, q);
  }
  return r;
}

/// Non-emptiness condition for type-l subspaces inside a type-k subspace:
/// 0 <= l_i - l_{i+1} <= k_i - k_{i+1} <= n_i and 0 <= l_t <= k_t <= n_t.
inline bool is_valid_type_pair(const Shape& shape, const TypeVector& k,
                               const TypeVector& l) {
  check_type_length(shape, k);
  check_type_length(shape, l);
  const int t = shape.t();
  for (int i = 0; i + 1 < t; ++i) {
    const int dk = k[static_cast<std::size_t>(i)] - k[static_cast<std::size_t>(i + 1)];
    const int dl = l[static_cast<std::size_t>(i)] - l[static_cast<std::size_t>(i + 1)];
    if (dl < 0 || dl > dk || dk > shape.blocks[static_cast<std::size_t>(i)]) return false;
  }
  const int kt = k[static_cast<std::size_t>(t - 1)];
  const int lt = l[static_cast<std::size_t>(t - 1)];
  return lt >= 0 && lt <= kt && kt <= shape.blocks[static_cast<std::size_t>(t - 1)];
}

/// Number of type-l subspaces contained in a fixed type-k subspace.
inline Count count_contained(const Shape& shape, const TypeVector& k,
                             const TypeVector& l, long long q) {
  check_q(q);
  if (!is_valid_type_pair(shape, k, l)) return 0;
  const int t = shape.t();
  Count r = gauss(k[static_cast<std::size_t>(t - 1)], l[static_cast<std::size_t>(t - 1)], q);
  for (int j = 0; j + 1 < t; ++j) {
    const long long dk = k[static_cast<std::size_t>(j)] - k[static_cast<std::size_t>(j + 1)];
    const long long dl = l[static_cast<std::size_t>(j)] - l[static_cast<std::size_t>(j + 1)];
    r *= qpow(q, dl * (k[static_cast<std::size_t>(j + 1)] - l[static_cast<std::size_t>(j + 1)]));
    r *= gauss(dk, dl, q);
  }
  return r;
}

/// Number of type-k subspaces containing a fixed type-l subspace.  Satisfies
/// the double-counting identity
///   count_containing(l,k) * anzahl(l) = count_contained(k,l) * anzahl(k).
inline Count count_containing(const Shape& shape, const TypeVector& l,
                              const TypeVector& k, long long q) {
  check_q(q);
  if (!is_valid_type_pair(shape, k, l)) return 0;
  const int t = shape.t();
  long long exp = 0;
  for (int j = 0; j + 1 < t; ++j) {
    const long long dk = k[static_cast<std::size_t>(j)] - k[static_cast<std::size_t>(j + 1)];
    const long long dl = l[static_cast<std::size_t>(j)] - l[static_cast<std::size_t>(j + 1)];
    exp += (dk - dl) * (shape.suffix(j) - k[static_cast<std::size_t>(j + 1)]);
  }
  Count r = qpow(q, exp);
  r *= gauss(shape.blocks[static_cast<std::size_t>(t - 1)] - l[static_cast<std::size_t>(t - 1)],
             k[static_cast<std::size_t>(t - 1)] - l[static_cast<std::size_t>(t - 1)], q);
  for (int j = 0; j + 1 < t; ++j) {
    const long long dk = k[static_cast<std::size_t>(j)] - k[static_cast<std::size_t>(j + 1)];
    const long long dl = l[static_cast<std::size_t>(j)] - l[static_cast<std::size_t>(j + 1)];
    r *= gauss(shape.blocks[static_cast<std::size_t>(j)] - l[static_cast<std::size_t>(j)] +
                   l[static_cast<std::size_t>(j + 1)],
               dk - dl, q);
  }
  return r;
}

}  // namespace qgeom

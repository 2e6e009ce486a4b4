#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/field.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/qcount.hpp"
#include "qgeom/spaces.hpp"

namespace qgeom {

/// Violation of an identity the underlying theory proves (orbit separation,
/// partition identities, orbit-stabilizer divisibility).  These are hard
/// failures everywhere; printed-formula mismatches are not.
struct hard_check_error : std::runtime_error {
  std::string check;
  hard_check_error(std::string c, const std::string& msg)
      : std::runtime_error(msg), check(std::move(c)) {}
};

struct separation_error : hard_check_error {
  explicit separation_error(const std::string& msg)
      : hard_check_error("separation", msg) {}
};

/// The six intersection dimensions that classify a pair (U, Q) of same-type
/// subspaces for t = 3, computed coordinate-free from projections and
/// intersections.
struct RawDims {
  int meet = 0;  // dim(U ∩ Q)
  int d11 = 0;   // dim(proj_1 U ∩ proj_1 Q)
  int d22 = 0;   // dim(proj_2(U ∩ E_2) ∩ proj_2(Q ∩ E_2))
  int d33 = 0;   // dim((U ∩ E_3) ∩ (Q ∩ E_3))
  int d12 = 0;   // dim(proj_12 U ∩ proj_12 Q)
  int d23 = 0;   // dim((U ∩ E_2) ∩ (Q ∩ E_2))
};

inline RawDims raw_dims(const Subspace& U, const Subspace& Q, const Shape& shape) {
  check_shape(shape);
  if (shape.t() != 3)
    throw std::invalid_argument("raw_dims: defined for t = 3 shapes only");
  if (type_of(shape, U) != type_of(shape, Q))
    throw std::invalid_argument("raw_dims: subspaces have different types");
  const FieldSpec& f = U.field();
  const int n1 = shape.blocks[0], n2 = shape.blocks[1];
  const Subspace e2 = e_subspace(shape, 2, f);
  const Subspace e3 = e_subspace(shape, 3, f);
  const Subspace ue2 = intersect(U, e2), qe2 = intersect(Q, e2);
  const Subspace ue3 = intersect(U, e3), qe3 = intersect(Q, e3);
  RawDims d;
  d.meet = intersect(U, Q).dim();
  d.d11 = intersect(project(U, 0, n1), project(Q, 0, n1)).dim();
  d.d22 = intersect(project(ue2, n1, n1 + n2), project(qe2, n1, n1 + n2)).dim();
  d.d33 = intersect(ue3, qe3).dim();
  d.d12 = intersect(project(U, 0, n1 + n2), project(Q, 0, n1 + n2)).dim();
  d.d23 = intersect(ue2, qe2).dim();
  return d;
}

/// The printed six-component suborbit label
/// (i1, i2, i3, j3-i2-i3, j2-i1-i2, i2+j1-j2-j3).  The last three components
/// can come out negative for pairs outside the printed constraint system;
/// such tuples are reported, not rejected.
struct InvariantTuple {
  std::array<int, 6> a{};

  bool operator==(const InvariantTuple&) const = default;
  bool operator<(const InvariantTuple& o) const { return a < o.a; }
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(a[i]);
    }
    return s;
  }
};

/// The underlying (i1, i2, i3, j1, j2, j3) coordinates of the theorems.
struct SuborbitIndices {
  int i1 = 0, i2 = 0, i3 = 0, j1 = 0, j2 = 0, j3 = 0;
};

inline SuborbitIndices tuple_to_indices(const InvariantTuple& t) {
  SuborbitIndices x;
  x.i1 = t.a[0];
  x.i2 = t.a[1];
  x.i3 = t.a[2];
  x.j3 = t.a[3] + x.i2 + x.i3;
  x.j2 = t.a[4] + x.i1 + x.i2;
  x.j1 = t.a[5] + x.j2 + x.j3 - x.i2;
  return x;
}

inline InvariantTuple indices_to_tuple(const SuborbitIndices& x) {
  return InvariantTuple{{x.i1, x.i2, x.i3, x.j3 - x.i2 - x.i3,
                         x.j2 - x.i1 - x.i2, x.i2 + x.j1 - x.j2 - x.j3}};
}

inline InvariantTuple invariant_tuple(const Subspace& U, const Subspace& Q,
                                      const Shape& shape, const TypeVector& k) {
  check_type_length(shape, k);
  if (type_of(shape, U) != k)
    throw std::invalid_argument("invariant_tuple: type vector does not match the subspaces");
  const RawDims d = raw_dims(U, Q, shape);
  const int k1 = k[0], k2 = k[1], k3 = k[2];
  SuborbitIndices x;
  x.i1 = (k1 - k2) - d.d11;
  x.i2 = (k2 - k3) - d.d22;
  x.i3 = k3 - d.d33;
  x.j1 = k1 - d.meet;
  x.j2 = (k1 - k3) - d.d12;
  x.j3 = k2 - d.d23;
  return indices_to_tuple(x);
}

/// The printed constraint system on the label, all six lines verbatim.
inline bool is_valid_tuple_printed(const Shape& shape, const TypeVector& k,
                                   const InvariantTuple& t) {
  check_type_length(shape, k);
  if (shape.t() != 3)
    throw std::invalid_argument("is_valid_tuple_printed: defined for t = 3 shapes only");
  const int n1 = shape.blocks[0], n2 = shape.blocks[1], n3 = shape.blocks[2];
  const int k1 = k[0], k2 = k[1], k3 = k[2];
  const SuborbitIndices x = tuple_to_indices(t);
  const int i1 = x.i1, i2 = x.i2, i3 = x.i3, j1 = x.j1, j2 = x.j2, j3 = x.j3;
  return 0 <= i1 && i1 <= std::min(k1 - k2, n1 + k2 - k1) &&
         0 <= i2 && i2 <= std::min(k2 - k3, n2 + k3 - k2) &&
         0 <= i3 && i3 <= std::min(k3, n3 - k3) &&
         0 <= j3 - i2 - i3 && j3 - i2 - i3 <= std::min(k3 - i3, k2 - k3 - i2) &&
         0 <= j2 - i1 - i2 &&
         j2 - i1 - i2 <= std::min({k2 - k3 - i2, k1 - k2 - i1, n2 + k3 - k2 - i2}) &&
         0 <= i2 + j1 - j2 - j3 &&
         i2 + j1 - j2 - j3 <= std::min(k1 - k2 + i2 - j2, n3 - k3 + i2 - j3);
}

/// The printed suborbit-count sum, bounds and innermost factor verbatim,
/// with no correction applied.  Mismatches against the oracle are reported
/// by cross_validate, never patched here.
inline Count suborbit_count_printed(const Shape& shape, const TypeVector& k,
                                    long long q) {
  check_q(q);
  if (shape.t() != 3)
    throw std::invalid_argument("suborbit_count_printed: defined for t = 3 shapes only");
  if (!is_valid_type(shape, k))
    throw std::invalid_argument("suborbit_count_printed: invalid type for the shape");
  const long long n1 = shape.blocks[0], n2 = shape.blocks[1], n3 = shape.blocks[2];
  const long long k1 = k[0], k2 = k[1], k3 = k[2];
  Count total = 0;
  for (long long i1 = 0; i1 <= std::min(k1 - k2, n1 + k2 - k1); ++i1)
    for (long long i2 = 0; i2 <= std::min(k2 - k3, n2 + k3 - k2); ++i2)
      for (long long i3 = 0; i3 <= std::min(k3, n3 - k3); ++i3)
        for (long long j3 = i2 + i3; j3 <= std::min(k3 + i2, k2 - k3 + i3); ++j3)
          for (long long j2 = i1 + i2;
               j2 <= std::min({k2 - k3 + i1, k1 - k2 + i2, n2 + k3 - k2 + i1}); ++j2)
            total += 1 + std::min(k1 - k2 + i2 - j2, n3 - k3 + i2 - j3);
  return total;
}

/// The printed suborbit-length product, verbatim.  Undefined evaluations
/// (negative q-power exponents, reachable only outside the printed
/// constraints) come back as nullopt.
inline std::optional<Count> suborbit_length_printed(const Shape& shape,
                                                    const TypeVector& k,
                                                    const InvariantTuple& t,
                                                    long long q) {
  check_q(q);
  if (shape.t() != 3)
    throw std::invalid_argument("suborbit_length_printed: defined for t = 3 shapes only");
  if (!is_valid_type(shape, k))
    throw std::invalid_argument("suborbit_length_printed: invalid type for the shape");
  const long long n1 = shape.blocks[0], n2 = shape.blocks[1], n3 = shape.blocks[2];
  const long long k1 = k[0], k2 = k[1], k3 = k[2];
  const SuborbitIndices x = tuple_to_indices(t);
  const long long i1 = x.i1, i2 = x.i2, i3 = x.i3, j1 = x.j1, j2 = x.j2, j3 = x.j3;

  const long long head_exp = (n2 + n3 - k2) * i1 + (n3 + k1 - k2 - k3 - i1) * i2 +
                             (k1 - k3 - i1 - i2) * i3 + i1 * i1 + i2 * i2 + i3 * i3;
  if (head_exp < 0) return std::nullopt;
  Count val = qpow(q, head_exp);
  val *= gauss(n1 + k2 - k1, i1, q) * gauss(k1 - k2, i1, q);
  val *= gauss(n2 + k3 - k2, i2, q) * gauss(k2 - k3, i2, q);
  val *= gauss(n3 - k3, i3, q) * gauss(k3, i3, q);
  val *= count_rank_matrices(j3 - i2 - i3, k2 - k3 - i2, n3 - k3 - i3, q);
  val *= count_rank_matrices(j2 - i1 - i2, k1 - k2 - i1, n2 + k3 - k2 - i2, q);

  Count tail = 0;
  const long long lo = std::max({0LL, 2 * i2 + j1 - j2 - 2 * j3 + i3,
                                 2 * i2 + j1 - 2 * j2 - j3 + i1});
  const long long hi = i2 + j1 - j2 - j3;
  for (long long l = lo; l <= hi; ++l) {
    const long long e = (j2 + j3 - i1 - i3) * l + (j2 - i1 - i2) * (j3 - i2 - i3);
    if (e < 0) return std::nullopt;
    tail += qpow(q, e) *
            count_rank_matrices(l, k1 - k2 - j2 + i2, n3 - k3 - j3 + i2, q) *
            count_rank_matrices(i2 + j1 - j2 - j3 - l, j2 - i1 - i2,
                                n3 - k3 - j3 + i2 - l, q) *
            count_rank_matrices(i2 + j1 - j2 - j3 - l, k1 - k2 - j2 + i2 - l,
                                j3 - i2 - i3, q);
  }
  return val * tail;
}

/// Disjoint orbits of the stabilizer G_U on the full type class, U the
/// canonical representative.  Works for any t.
struct OrbitPartition {
  Subspace base;                              // U
  std::vector<std::vector<Subspace>> orbits;  // each ascending; sorted by first member
  Count stabilizer_order = 0;                 // |G_U|, counted while streaming
};

namespace detail {

/// In-place RREF on a flat rows x cols buffer.  Returns the rank.
inline int rref_raw(std::vector<Code>& a, int rows, int cols, const FieldSpec& f) {
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (a[static_cast<std::size_t>(i) * cols + c] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < cols; ++j)
        std::swap(a[static_cast<std::size_t>(r) * cols + j],
                  a[static_cast<std::size_t>(pr) * cols + j]);
    const Code s = f.inv(a[static_cast<std::size_t>(r) * cols + c]);
    if (s != 1)
      for (int j = 0; j < cols; ++j) {
        auto& v = a[static_cast<std::size_t>(r) * cols + j];
        v = f.mul(v, s);
      }
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Code fac = a[static_cast<std::size_t>(i) * cols + c];
      if (fac == 0) continue;
      for (int j = 0; j < cols; ++j) {
        auto& v = a[static_cast<std::size_t>(i) * cols + j];
        v = f.sub(v, f.mul(fac, a[static_cast<std::size_t>(r) * cols + j]));
      }
    }
    ++r;
  }
  return r;
}

/// out = in (k x n) times g (n x n), flat buffers.
inline void act_raw(const std::vector<Code>& in, int k, int n, const Matrix& g,
                    std::vector<Code>& out, const FieldSpec& f) {
  out.assign(static_cast<std::size_t>(k) * n, 0);
  for (int i = 0; i < k; ++i)
    for (int s = 0; s < n; ++s) {
      const Code v = in[static_cast<std::size_t>(i) * n + s];
      if (v == 0) continue;
      for (int j = 0; j < n; ++j) {
        const Code w = g.at(s, j);
        if (w != 0) {
          auto& o = out[static_cast<std::size_t>(i) * n + j];
          o = f.add(o, f.mul(v, w));
        }
      }
    }
}

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)), size(static_cast<std::size_t>(n), 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[static_cast<std::size_t>(a)] < size[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
  }
};

}  // namespace detail

/// Brute-force suborbit oracle: filter the full group for the stabilizer of
/// U = orbit_representative and apply every stabilizer element to every
/// member of the type class.  This is the ground truth the printed formulas
/// are judged against.
inline OrbitPartition orbits_oracle(const Shape& shape, const TypeVector& k,
                                    const FieldSpec& f,
                                    std::uint64_t group_guard = kDefaultGroupGuard,
                                    std::uint64_t subspace_guard = kDefaultSubspaceGuard) {
  check_type_length(shape, k);
  const Count order = group_order(shape, f.q);
  const Count anz = anzahl(shape, k, f.q);
  if (order > group_guard || anz > subspace_guard)
    throw std::runtime_error("orbits_oracle: group order " + order.str() +
                             " / member count " + anz.str() +
                             " against guards (group " + std::to_string(group_guard) +
                             ", subspaces " + std::to_string(subspace_guard) + ")");
  const int n = shape.total();
  const int k1 = k.empty() ? 0 : k[0];

  OrbitPartition part;
  part.base = orbit_representative(shape, k, f);

  std::vector<Subspace> members = collect_by_type(shape, k, f);
  std::sort(members.begin(), members.end());
  if (Count(members.size()) != anz)
    throw hard_check_error("partition",
                           "orbits_oracle: enumerated " + std::to_string(members.size()) +
                               " members but the anzahl formula gives " + anz.str());

  std::vector<std::vector<Code>> blobs;
  blobs.reserve(members.size());
  for (const auto& m : members) blobs.push_back(m.basis.entries);
  const auto lookup = [&](const std::vector<Code>& b) {
    const auto it = std::lower_bound(blobs.begin(), blobs.end(), b);
    if (it == blobs.end() || *it != b)
      throw hard_check_error("type_preservation",
                             "orbits_oracle: group action left the type class");
    return static_cast<int>(it - blobs.begin());
  };

  detail::UnionFind uf(static_cast<int>(members.size()));
  const std::vector<Code>& ublob = part.base.basis.entries;
  std::vector<Code> scratch;
  std::uint64_t stab = 0;
  enumerate_group(shape, f, [&](const Matrix& g) {
    detail::act_raw(ublob, k1, n, g, scratch, f);
    detail::rref_raw(scratch, k1, n, f);
    if (scratch != ublob) return;
    ++stab;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      detail::act_raw(blobs[i], k1, n, g, scratch, f);
      detail::rref_raw(scratch, k1, n, f);
      uf.unite(static_cast<int>(i), lookup(scratch));
    }
  }, group_guard);
  part.stabilizer_order = stab;

  std::map<int, std::vector<int>> groups;  // root -> member indices, ascending
  for (int i = 0; i < static_cast<int>(members.size()); ++i)
    groups[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> orbit_idx;
  for (auto& [root, idx] : groups) orbit_idx.push_back(std::move(idx));
  std::sort(orbit_idx.begin(), orbit_idx.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Count covered = 0;
  for (const auto& idx : orbit_idx) {
    if (Count(idx.size()) != 0 && part.stabilizer_order % Count(idx.size()) != 0)
      throw hard_check_error("orbit_stabilizer",
                             "orbits_oracle: orbit size " + std::to_string(idx.size()) +
                                 " does not divide the stabilizer order " +
                                 part.stabilizer_order.str());
    covered += static_cast<std::uint64_t>(idx.size());
    std::vector<Subspace> orbit;
    orbit.reserve(idx.size());
    for (int i : idx) orbit.push_back(members[static_cast<std::size_t>(i)]);
    part.orbits.push_back(std::move(orbit));
  }
  if (covered != anz)
    throw hard_check_error("partition",
                           "orbits_oracle: orbit sizes sum to " + covered.str() +
                               " but the anzahl formula gives " + anz.str());
  return part;
}

/// One realized label with everything both routes say about it.
struct TupleRecord {
  InvariantTuple tuple;
  bool printed_valid = false;
  std::optional<Count> printed_length;  // absent when the evaluation is undefined
  Count oracle_length = 0;
  long long member_count = 0;
};

/// A printed-formula-vs-oracle mismatch.  Recorded, never fatal.
struct Discrepancy {
  std::string kind;  // "suborbit_count" | "tuple_constraints" | "suborbit_length"
  std::optional<InvariantTuple> tuple;
  std::string printed;
  std::string oracle;
  std::string note;
};

/// Structured formula-vs-oracle comparison for one (shape, type, q) case.
struct OrbitReport {
  Shape shape;
  TypeVector type;
  std::uint32_t q = 2;
  Count anzahl_value = 0;
  Count printed_count = 0;
  Count oracle_count = 0;
  Count stabilizer_order = 0;
  std::vector<TupleRecord> tuples;  // sorted by tuple
  std::vector<Discrepancy> discrepancies;
};

/// Run the oracle, group members by invariant tuple, and compare against the
/// printed formulas.  Tuple-vs-orbit separation failure is a hard error
/// (it would falsify the classification theorem); printed-formula mismatches
/// go to the discrepancy list.
inline OrbitReport cross_validate(const Shape& shape, const TypeVector& k,
                                  const FieldSpec& f,
                                  std::uint64_t group_guard = kDefaultGroupGuard,
                                  std::uint64_t subspace_guard = kDefaultSubspaceGuard) {
  if (shape.t() != 3)
    throw std::invalid_argument("cross_validate: defined for t = 3 shapes only");
  const std::string where = "shape (" + join_ints(shape.blocks) + "), type (" +
                            join_ints(k) + "), q = " + std::to_string(f.q);

  OrbitPartition part = orbits_oracle(shape, k, f, group_guard, subspace_guard);

  OrbitReport rep;
  rep.shape = shape;
  rep.type = k;
  rep.q = f.q;
  rep.anzahl_value = anzahl(shape, k, f.q);
  rep.stabilizer_order = part.stabilizer_order;
  rep.oracle_count = part.orbits.size();
  rep.printed_count = suborbit_count_printed(shape, k, f.q);

  // Theorem separation: the tuple grouping must coincide with the orbit
  // partition in both directions.
  std::map<InvariantTuple, std::size_t> tuple_orbit;
  std::map<InvariantTuple, long long> tuple_members;
  for (std::size_t oi = 0; oi < part.orbits.size(); ++oi) {
    const InvariantTuple first = invariant_tuple(part.base, part.orbits[oi].front(), shape, k);
    for (const Subspace& m : part.orbits[oi]) {
      const InvariantTuple t = invariant_tuple(part.base, m, shape, k);
      ++tuple_members[t];
      if (!(t == first))
        throw separation_error("cross_validate: members of one orbit carry labels " +
                               first.str() + " and " + t.str() + " at " + where);
    }
    const auto [it, fresh] = tuple_orbit.emplace(first, oi);
    if (!fresh)
      throw separation_error("cross_validate: label " + first.str() +
                             " is realized by two distinct orbits at " + where);
  }

  for (const auto& [t, oi] : tuple_orbit) {
    TupleRecord rec;
    rec.tuple = t;
    rec.printed_valid = is_valid_tuple_printed(shape, k, t);
    rec.printed_length = suborbit_length_printed(shape, k, t, f.q);
    rec.oracle_length = part.orbits[oi].size();
    rec.member_count = tuple_members[t];
    rep.tuples.push_back(std::move(rec));
  }

  if (rep.printed_count != rep.oracle_count)
    rep.discrepancies.push_back({"suborbit_count", std::nullopt,
                                 rep.printed_count.str(), rep.oracle_count.str(),
                                 "printed suborbit count disagrees with the oracle orbit count"});
  for (const TupleRecord& rec : rep.tuples) {
    const std::string printed =
        rec.printed_length ? rec.printed_length->str() : std::string("absent");
    if (!rec.printed_valid) {
      rep.discrepancies.push_back({"tuple_constraints", rec.tuple, printed,
                                   rec.oracle_length.str(),
                                   "realized label fails the printed constraint system"});
    } else if (!rec.printed_length || *rec.printed_length != rec.oracle_length) {
      rep.discrepancies.push_back({"suborbit_length", rec.tuple, printed,
                                   rec.oracle_length.str(),
                                   "printed length disagrees with the oracle orbit length"});
    }
  }
  return rep;
}

}  // namespace qgeom

#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>

#include "oracles.hpp"
#include "qgeom/suborbits.hpp"

using namespace qgeom;

namespace {
const FieldSpec F2 = FieldSpec::make(std::uint64_t{2});
const FieldSpec F3 = FieldSpec::make(std::uint64_t{3});
const Shape S111{{1, 1, 1}};

Subspace line2(std::vector<Code> v) {
  return Subspace::row_space(Matrix::from_rows(F2, {std::move(v)}));
}

std::vector<std::size_t> orbit_sizes(const OrbitPartition& p) {
  std::vector<std::size_t> sizes;
  for (const auto& o : p.orbits) sizes.push_back(o.size());
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}
}  // namespace

TEST(RawDims, SelfIntersectionsAreFull) {
  const TypeVector k{2, 1, 1};
  const Subspace u = orbit_representative(S111, k, F2);
  const RawDims d = raw_dims(u, u, S111);
  EXPECT_EQ(d.meet, 2);      // k1
  EXPECT_EQ(d.d11, 1);       // k1 - k2
  EXPECT_EQ(d.d22, 0);       // k2 - k3
  EXPECT_EQ(d.d33, 1);       // k3
  EXPECT_EQ(d.d12, 1);       // k1 - k3
  EXPECT_EQ(d.d23, 1);       // k2
}

TEST(RawDims, HeadlineExamples) {
  const Subspace u = orbit_representative(S111, {1, 0, 0}, F2);
  {
    const RawDims d = raw_dims(u, line2({1, 0, 1}), S111);
    EXPECT_EQ(d.meet, 0);
    EXPECT_EQ(d.d11, 1);
    EXPECT_EQ(d.d12, 1);
    EXPECT_EQ(d.d22, 0);
    EXPECT_EQ(d.d33, 0);
    EXPECT_EQ(d.d23, 0);
  }
  {
    const RawDims d = raw_dims(u, line2({1, 1, 0}), S111);
    EXPECT_EQ(d.meet, 0);
    EXPECT_EQ(d.d11, 1);
    EXPECT_EQ(d.d12, 0);  // proj_12 spans <(1,0)> vs <(1,1)>
    EXPECT_EQ(d.d22, 0);
    EXPECT_EQ(d.d33, 0);
    EXPECT_EQ(d.d23, 0);
  }
  EXPECT_THROW(raw_dims(u, line2({0, 0, 1}), S111), std::invalid_argument);  // type mismatch
  EXPECT_THROW(raw_dims(u, u, Shape{{2, 1}}), std::invalid_argument);        // t != 3
}

TEST(InvariantTuple, Examples) {
  const TypeVector k{1, 0, 0};
  const Subspace u = orbit_representative(S111, k, F2);
  EXPECT_EQ(invariant_tuple(u, u, S111, k), (InvariantTuple{{0, 0, 0, 0, 0, 0}}));
  EXPECT_EQ(invariant_tuple(u, line2({1, 0, 1}), S111, k),
            (InvariantTuple{{0, 0, 0, 0, 0, 1}}));
  EXPECT_EQ(invariant_tuple(u, line2({1, 1, 0}), S111, k),
            (InvariantTuple{{0, 0, 0, 0, 1, 0}}));
}

TEST(InvariantTuple, IndexInversionRoundTrip) {
  for (int i1 = 0; i1 <= 2; ++i1)
    for (int i2 = 0; i2 <= 2; ++i2)
      for (int i3 = 0; i3 <= 2; ++i3)
        for (int j1 = 0; j1 <= 3; ++j1)
          for (int j2 = 0; j2 <= 3; ++j2)
            for (int j3 = 0; j3 <= 3; ++j3) {
              const SuborbitIndices x{i1, i2, i3, j1, j2, j3};
              const SuborbitIndices back = tuple_to_indices(indices_to_tuple(x));
              EXPECT_EQ(back.i1, x.i1);
              EXPECT_EQ(back.i2, x.i2);
              EXPECT_EQ(back.i3, x.i3);
              EXPECT_EQ(back.j1, x.j1);
              EXPECT_EQ(back.j2, x.j2);
              EXPECT_EQ(back.j3, x.j3);
            }
}

TEST(PrintedConstraints, Examples) {
  const TypeVector k{1, 0, 0};
  EXPECT_TRUE(is_valid_tuple_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 0, 0}}));
  EXPECT_TRUE(is_valid_tuple_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 0, 1}}));
  // Line 5 caps j2 - i1 - i2 by k2 - k3 - i2 = 0.
  EXPECT_FALSE(is_valid_tuple_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 1, 0}}));
  EXPECT_TRUE(is_valid_tuple_printed(S111, {1, 1, 1}, InvariantTuple{{0, 0, 0, 0, 0, 0}}));
}

TEST(PrintedCount, Examples) {
  EXPECT_EQ(suborbit_count_printed(S111, {0, 0, 0}, 2), 1);
  EXPECT_EQ(suborbit_count_printed(S111, {1, 1, 1}, 2), 1);
  EXPECT_EQ(suborbit_count_printed(S111, {1, 0, 0}, 2), 2);  // oracle finds 3
  EXPECT_THROW(suborbit_count_printed(S111, {2, 0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(suborbit_count_printed(Shape{{1, 1}}, {0, 0}, 2), std::invalid_argument);
}

TEST(PrintedLength, Examples) {
  const TypeVector k{1, 0, 0};
  const auto zero = suborbit_length_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 0, 0}}, 2);
  ASSERT_TRUE(zero.has_value());
  EXPECT_EQ(*zero, 1);

  const auto a = suborbit_length_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 0, 1}}, 2);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(*a, 1);

  // Printed evaluation gives 1 although the oracle orbit has size 2; the
  // tuple also fails the printed constraints, so it lands in discrepancies.
  const auto b = suborbit_length_printed(S111, k, InvariantTuple{{0, 0, 0, 0, 1, 0}}, 2);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(*b, 1);
}

TEST(OrbitsOracle, HeadlineCase) {
  const OrbitPartition p = orbits_oracle(S111, {1, 0, 0}, F2);
  EXPECT_EQ(p.orbits.size(), 3u);
  EXPECT_EQ(orbit_sizes(p), (std::vector<std::size_t>{1, 1, 2}));
  // Orbit-stabilizer with |G| = 8 and |M| = 4 forces |G_U| = 2.
  EXPECT_EQ(p.stabilizer_order, 2);
  EXPECT_EQ(p.base, line2({1, 0, 0}));
  // The fixed points are U and <(1,0,1)>; the 2-orbit is {<(1,1,0)>, <(1,1,1)>}.
  EXPECT_EQ(p.orbits[0].front(), line2({1, 0, 0}));
  std::vector<Subspace> two = {line2({1, 1, 0}), line2({1, 1, 1})};
  bool found = false;
  for (const auto& o : p.orbits)
    if (o.size() == 2) {
      EXPECT_EQ(o, two);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(OrbitsOracle, SingletonAndPartition) {
  const OrbitPartition p = orbits_oracle(S111, {1, 1, 1}, F2);
  EXPECT_EQ(p.orbits.size(), 1u);
  EXPECT_EQ(p.orbits.front().size(), 1u);
  // Partition property across a few cases: sizes sum to the anzahl count.
  for (const TypeVector& k : {TypeVector{1, 0, 0}, TypeVector{2, 1, 0}, TypeVector{2, 2, 1}}) {
    const OrbitPartition q = orbits_oracle(S111, k, F2);
    Count sum = 0;
    for (const auto& o : q.orbits) sum += o.size();
    EXPECT_EQ(sum, anzahl(S111, k, 2));
  }
}

TEST(OrbitsOracle, GeneralTAndGuards) {
  // General t: the oracle is not restricted to t = 3.
  const OrbitPartition p = orbits_oracle(Shape{{1, 1}}, {1, 0}, F2);
  EXPECT_EQ(p.orbits.size(), 2u);  // <(1,0)> is fixed, <(1,1)> ... let the sizes say
  Count sum = 0;
  for (const auto& o : p.orbits) sum += o.size();
  EXPECT_EQ(sum, anzahl(Shape{{1, 1}}, {1, 0}, 2));

  try {
    orbits_oracle(Shape{{4}}, {2}, F3, 1000, 1000);
    FAIL() << "guard should have tripped";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("24261120"), std::string::npos);  // group order named
    EXPECT_NE(msg.find(anzahl(Shape{{4}}, {2}, 3).str()), std::string::npos);  // member count named
  }
}

TEST(CrossValidate, ForcedCaseClean) {
  const OrbitReport r = cross_validate(S111, {1, 1, 1}, F2);
  EXPECT_EQ(r.printed_count, 1);
  EXPECT_EQ(r.oracle_count, 1);
  EXPECT_TRUE(r.discrepancies.empty());
  ASSERT_EQ(r.tuples.size(), 1u);
  EXPECT_EQ(r.tuples.front().tuple, (InvariantTuple{{0, 0, 0, 0, 0, 0}}));
  EXPECT_TRUE(r.tuples.front().printed_valid);
  ASSERT_TRUE(r.tuples.front().printed_length.has_value());
  EXPECT_EQ(*r.tuples.front().printed_length, 1);
  EXPECT_EQ(r.tuples.front().oracle_length, 1);
}

TEST(CrossValidate, HeadlineDiscrepancy) {
  const OrbitReport r = cross_validate(S111, {1, 0, 0}, F2);
  EXPECT_EQ(r.printed_count, 2);
  EXPECT_EQ(r.oracle_count, 3);
  EXPECT_EQ(r.anzahl_value, 4);

  // The realized label (0,0,0,0,1,0) fails the printed constraints and its
  // oracle orbit has length 2 against a printed evaluation of 1.
  const InvariantTuple odd{{0, 0, 0, 0, 1, 0}};
  bool saw_tuple = false;
  for (const TupleRecord& rec : r.tuples) {
    if (rec.tuple == odd) {
      saw_tuple = true;
      EXPECT_FALSE(rec.printed_valid);
      EXPECT_EQ(rec.oracle_length, 2);
      EXPECT_EQ(rec.member_count, 2);
      ASSERT_TRUE(rec.printed_length.has_value());
      EXPECT_EQ(*rec.printed_length, 1);
    } else {
      EXPECT_TRUE(rec.printed_valid);
      EXPECT_EQ(rec.oracle_length, 1);
    }
  }
  EXPECT_TRUE(saw_tuple);

  ASSERT_FALSE(r.discrepancies.empty());
  bool count_disc = false, tuple_disc = false;
  for (const Discrepancy& d : r.discrepancies) {
    if (d.kind == "suborbit_count") {
      count_disc = true;
      EXPECT_EQ(d.printed, "2");
      EXPECT_EQ(d.oracle, "3");
    }
    if (d.kind == "tuple_constraints" && d.tuple && *d.tuple == odd) tuple_disc = true;
  }
  EXPECT_TRUE(count_disc);
  EXPECT_TRUE(tuple_disc);
}

TEST(CrossValidate, HeadlineCaseOverGF3) {
  const OrbitReport r = cross_validate(S111, {1, 0, 0}, F3);
  EXPECT_EQ(r.printed_count, 2);
  EXPECT_EQ(r.oracle_count, 3);
  std::vector<Count> lengths;
  for (const auto& rec : r.tuples) lengths.push_back(rec.oracle_length);
  std::sort(lengths.begin(), lengths.end());
  EXPECT_EQ(lengths, (std::vector<Count>{1, 2, 6}));
}

TEST(CrossValidate, ZeroBlockShape) {
  // Zero-width blocks are first-class; the machinery must not trip on them.
  const Shape s{{0, 1, 1}};
  const OrbitReport r = cross_validate(s, {1, 1, 0}, F2);
  Count sum = 0;
  for (const auto& rec : r.tuples) sum += rec.oracle_length;
  EXPECT_EQ(sum, anzahl(s, {1, 1, 0}, 2));
  const OrbitReport z = cross_validate(Shape{{0, 0, 0}}, {0, 0, 0}, F2);
  EXPECT_EQ(z.oracle_count, 1);
  EXPECT_EQ(z.printed_count, 1);
}

TEST(CrossValidate, LengthMismatchOnPrintedValidTuple) {
  // Frozen from the sweep: shape (1,2,1), type (2,1,0), q = 2 realizes the
  // printed-valid label (0,1,0,0,0,1) with printed length 32 but oracle
  // length 8, so a suborbit_length discrepancy must be recorded.
  const Shape s{{1, 2, 1}};
  const OrbitReport r = cross_validate(s, {2, 1, 0}, F2);
  EXPECT_EQ(r.printed_count, 5);
  EXPECT_EQ(r.oracle_count, 7);
  const InvariantTuple t{{0, 1, 0, 0, 0, 1}};
  bool saw = false;
  for (const Discrepancy& d : r.discrepancies)
    if (d.kind == "suborbit_length" && d.tuple && *d.tuple == t) {
      saw = true;
      EXPECT_EQ(d.printed, "32");
      EXPECT_EQ(d.oracle, "8");
    }
  EXPECT_TRUE(saw);
}

TEST(CrossValidate, RequiresTThree) {
  EXPECT_THROW(cross_validate(Shape{{1, 1}}, {1, 0}, F2), std::invalid_argument);
}

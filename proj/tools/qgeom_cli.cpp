// Command-line front end: counting queries, enumeration, type and canonical
// form inspection, suborbit analysis, and the verification harness.
//
// Exit codes: 0 success (recorded discrepancies allowed), 1 hard-check
// failure, 2 usage or parameter error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qgeom/field.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/qcount.hpp"
#include "qgeom/spaces.hpp"
#include "qgeom/suborbits.hpp"
#include "qgeom/verify.hpp"

namespace {

using nlohmann::json;
using namespace qgeom;

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

FieldSpec make_field(long long q, const std::string& modulus_csv) {
  if (q < 2) throw std::invalid_argument("field: q must be >= 2");
  if (modulus_csv.empty()) return FieldSpec::make(static_cast<std::uint64_t>(q));
  const auto pe = factor_prime_power(static_cast<std::uint64_t>(q));
  if (!pe) throw std::invalid_argument("field: q = " + std::to_string(q) + " is not a prime power");
  std::vector<std::uint32_t> mod;
  for (int v : parse_int_list(modulus_csv, "modulus")) {
    if (v < 0) throw std::invalid_argument("modulus: negative coefficient");
    mod.push_back(static_cast<std::uint32_t>(v));
  }
  return FieldSpec::make(pe->first, pe->second, std::move(mod));
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + out_path);
    os << text;
  }
}

json count_result(const std::string& formula, json params, const Count& value) {
  return {{"formula", formula}, {"params", std::move(params)}, {"value", value.str()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact counting and orbit machinery for finite vector spaces with a coordinate filtration"};
  app.require_subcommand(1);

  int exit_code = 0;

  // ---- count ----
  auto* count_cmd = app.add_subcommand("count", "evaluate a closed-form count, printed as JSON");
  count_cmd->require_subcommand(1);
  struct {
    long long n = 0, k = 0, i = 0, m = 0, m1 = 0, m2 = 0, n1 = 0, n2 = 0;
    long long t1 = 0, t2 = 0, alpha = 0, q = 2;
    std::string shape, type, sub_type;
  } c;

  auto* c_gauss = count_cmd->add_subcommand("gauss", "Gaussian binomial [n k]_q");
  c_gauss->add_option("--n", c.n)->required();
  c_gauss->add_option("--k", c.k)->required();
  c_gauss->add_option("--q", c.q)->required();
  c_gauss->callback([&] {
    emit(count_result("gauss", {{"n", c.n}, {"k", c.k}, {"q", c.q}}, gauss(c.n, c.k, c.q)), "");
  });

  auto* c_rank = count_cmd->add_subcommand("rank-matrices", "m x n matrices of rank i");
  c_rank->add_option("--i", c.i)->required();
  c_rank->add_option("--m", c.m)->required();
  c_rank->add_option("--n", c.n)->required();
  c_rank->add_option("--q", c.q)->required();
  c_rank->callback([&] {
    emit(count_result("rank-matrices", {{"i", c.i}, {"m", c.m}, {"n", c.n}, {"q", c.q}},
                      count_rank_matrices(c.i, c.m, c.n, c.q)), "");
  });

  auto* c_meet = count_cmd->add_subcommand(
      "intersecting", "m-dim subspaces meeting a fixed one in dimension m-i");
  c_meet->add_option("--m", c.m)->required();
  c_meet->add_option("--n", c.n)->required();
  c_meet->add_option("--i", c.i)->required();
  c_meet->add_option("--q", c.q)->required();
  c_meet->callback([&] {
    emit(count_result("intersecting", {{"m", c.m}, {"n", c.n}, {"i", c.i}, {"q", c.q}},
                      count_intersecting_subspaces(c.m, c.n, c.i, c.q)), "");
  });

  auto* c_rowx = count_cmd->add_subcommand("row-extension",
                                           "m2 x n blocks reaching stacked rank t2 over a rank-t1 base");
  c_rowx->add_option("--t1", c.t1)->required();
  c_rowx->add_option("--t2", c.t2)->required();
  c_rowx->add_option("--m2", c.m2)->required();
  c_rowx->add_option("--n", c.n)->required();
  c_rowx->add_option("--q", c.q)->required();
  c_rowx->callback([&] {
    emit(count_result("row-extension",
                      {{"t1", c.t1}, {"t2", c.t2}, {"m2", c.m2}, {"n", c.n}, {"q", c.q}},
                      count_row_extension(c.t1, c.t2, c.m2, c.n, c.q)), "");
  });

  auto* c_colx = count_cmd->add_subcommand("col-extension",
                                           "m x n2 blocks reaching joined rank t2 beside a rank-t1 base");
  c_colx->add_option("--t1", c.t1)->required();
  c_colx->add_option("--t2", c.t2)->required();
  c_colx->add_option("--m", c.m)->required();
  c_colx->add_option("--n2", c.n2)->required();
  c_colx->add_option("--q", c.q)->required();
  c_colx->callback([&] {
    emit(count_result("col-extension",
                      {{"t1", c.t1}, {"t2", c.t2}, {"m", c.m}, {"n2", c.n2}, {"q", c.q}},
                      count_col_extension(c.t1, c.t2, c.m, c.n2, c.q)), "");
  });

  auto* c_block = count_cmd->add_subcommand("block-rank",
                                            "block matrices with rank(C D) = rank(B; D) = alpha");
  c_block->add_option("--m1", c.m1)->required();
  c_block->add_option("--m2", c.m2)->required();
  c_block->add_option("--n1", c.n1)->required();
  c_block->add_option("--n2", c.n2)->required();
  c_block->add_option("--alpha", c.alpha)->required();
  c_block->add_option("--q", c.q)->required();
  c_block->callback([&] {
    emit(count_result("block-rank",
                      {{"m1", c.m1}, {"m2", c.m2}, {"n1", c.n1}, {"n2", c.n2},
                       {"alpha", c.alpha}, {"q", c.q}},
                      count_block_rank(c.m1, c.m2, c.n1, c.n2, c.alpha, c.q)), "");
  });

  auto* c_group = count_cmd->add_subcommand("group-order",
                                            "order of the block upper-triangular invertible group");
  c_group->add_option("--shape", c.shape)->required();
  c_group->add_option("--q", c.q)->required();
  c_group->callback([&] {
    const Shape shape{parse_int_list(c.shape, "shape")};
    emit(count_result("group-order", {{"shape", c.shape}, {"q", c.q}}, group_order(shape, c.q)), "");
  });

  auto* c_anz = count_cmd->add_subcommand("anzahl", "number of subspaces of a given type");
  c_anz->add_option("--shape", c.shape)->required();
  c_anz->add_option("--type", c.type)->required();
  c_anz->add_option("--q", c.q)->required();
  c_anz->callback([&] {
    const Shape shape{parse_int_list(c.shape, "shape")};
    emit(count_result("anzahl", {{"shape", c.shape}, {"type", c.type}, {"q", c.q}},
                      anzahl(shape, parse_int_list(c.type, "type"), c.q)), "");
  });

  auto* c_in = count_cmd->add_subcommand("contained",
                                         "type-l subspaces inside a fixed type-k subspace");
  c_in->add_option("--shape", c.shape)->required();
  c_in->add_option("--type", c.type)->required();
  c_in->add_option("--sub-type", c.sub_type)->required();
  c_in->add_option("--q", c.q)->required();
  c_in->callback([&] {
    const Shape shape{parse_int_list(c.shape, "shape")};
    emit(count_result("contained",
                      {{"shape", c.shape}, {"type", c.type}, {"sub_type", c.sub_type}, {"q", c.q}},
                      count_contained(shape, parse_int_list(c.type, "type"),
                                      parse_int_list(c.sub_type, "sub-type"), c.q)), "");
  });

  auto* c_over = count_cmd->add_subcommand("containing",
                                           "type-k subspaces containing a fixed type-l subspace");
  c_over->add_option("--shape", c.shape)->required();
  c_over->add_option("--type", c.type)->required();
  c_over->add_option("--sub-type", c.sub_type)->required();
  c_over->add_option("--q", c.q)->required();
  c_over->callback([&] {
    const Shape shape{parse_int_list(c.shape, "shape")};
    emit(count_result("containing",
                      {{"shape", c.shape}, {"type", c.type}, {"sub_type", c.sub_type}, {"q", c.q}},
                      count_containing(shape, parse_int_list(c.sub_type, "sub-type"),
                                       parse_int_list(c.type, "type"), c.q)), "");
  });

  // ---- enumerate ----
  struct {
    std::string shape, type, modulus;
    long long q = 2;
  } en;
  auto* enum_cmd = app.add_subcommand("enumerate",
                                      "stream all subspaces of a type in the matrix text format");
  enum_cmd->add_option("--shape", en.shape)->required();
  enum_cmd->add_option("--type", en.type)->required();
  enum_cmd->add_option("--q", en.q)->required();
  enum_cmd->add_option("--modulus", en.modulus, "override modulus coefficients c0,c1,...,ce");
  enum_cmd->callback([&] {
    const Shape shape{parse_int_list(en.shape, "shape")};
    const FieldSpec f = make_field(en.q, en.modulus);
    bool first = true;
    enumerate_by_type(shape, parse_int_list(en.type, "type"), f, [&](const Subspace& s) {
      if (!first) std::cout << '\n';
      first = false;
      std::cout << format_matrix(s.basis);
    });
  });

  // ---- typeof ----
  struct {
    std::string shape, file, modulus;
    long long q = 2;
  } ty;
  auto* typeof_cmd = app.add_subcommand("typeof", "type of the subspace spanned by a matrix file");
  typeof_cmd->add_option("--shape", ty.shape)->required();
  typeof_cmd->add_option("--q", ty.q)->required();
  typeof_cmd->add_option("--matrix-file", ty.file)->required();
  typeof_cmd->add_option("--modulus", ty.modulus);
  typeof_cmd->callback([&] {
    const Shape shape{parse_int_list(ty.shape, "shape")};
    const FieldSpec f = make_field(ty.q, ty.modulus);
    std::ifstream is(ty.file, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open matrix file " + ty.file);
    std::stringstream buf;
    buf << is.rdbuf();
    const Matrix m = parse_matrix(buf.str(), f, shape.total());
    std::cout << join_ints(type_of(shape, Subspace::row_space(m))) << "\n";
  });

  // ---- canonical ----
  struct {
    std::string shape, type, modulus;
    long long q = 2;
  } ca;
  auto* canon_cmd = app.add_subcommand("canonical", "canonical representative of a type class");
  canon_cmd->add_option("--shape", ca.shape)->required();
  canon_cmd->add_option("--type", ca.type)->required();
  canon_cmd->add_option("--q", ca.q)->required();
  canon_cmd->add_option("--modulus", ca.modulus);
  canon_cmd->callback([&] {
    const Shape shape{parse_int_list(ca.shape, "shape")};
    const FieldSpec f = make_field(ca.q, ca.modulus);
    std::cout << format_matrix(orbit_representative(shape, parse_int_list(ca.type, "type"), f).basis);
  });

  // ---- suborbits ----
  struct {
    std::string shape, type, modulus, out;
    long long q = 2;
    std::uint64_t guard_group = kDefaultGroupGuard;
    std::uint64_t guard_sub = kDefaultSubspaceGuard;
    std::optional<std::uint64_t> guard_both;
  } so;
  auto* sub_cmd = app.add_subcommand("suborbits", "stabilizer-orbit analysis for t = 3");
  sub_cmd->require_subcommand(1);
  const auto add_sub_opts = [&](CLI::App* s) {
    s->add_option("--shape", so.shape)->required();
    s->add_option("--type", so.type)->required();
    s->add_option("--q", so.q)->required();
    s->add_option("--modulus", so.modulus);
    s->add_option("--guard", [&](const std::vector<std::string>& vals) {
      so.guard_both = std::stoull(vals.front());
      return true;
    }, "override both enumeration guards");
    s->add_option("--out", so.out, "write the JSON to a file instead of standard output");
  };
  const auto sub_guards = [&] {
    if (so.guard_both) {
      so.guard_group = *so.guard_both;
      so.guard_sub = *so.guard_both;
    }
  };

  auto* sub_formula = sub_cmd->add_subcommand("formula", "printed count and lengths only");
  add_sub_opts(sub_formula);
  sub_formula->callback([&] {
    sub_guards();
    const Shape shape{parse_int_list(so.shape, "shape")};
    const TypeVector k = parse_int_list(so.type, "type");
    make_field(so.q, so.modulus);  // validates q even though only formulas run
    json tuples = json::array();
    if (shape.t() != 3) throw std::invalid_argument("suborbits: shape must have t = 3 blocks");
    // Walk the printed index ranges and report each admissible label.
    const long long n1 = shape.blocks[0], n2 = shape.blocks[1], n3 = shape.blocks[2];
    const long long k1 = k.at(0), k2 = k.at(1), k3 = k.at(2);
    if (!is_valid_type(shape, k)) throw std::invalid_argument("suborbits: invalid type");
    for (long long i1 = 0; i1 <= std::min(k1 - k2, n1 + k2 - k1); ++i1)
      for (long long i2 = 0; i2 <= std::min(k2 - k3, n2 + k3 - k2); ++i2)
        for (long long i3 = 0; i3 <= std::min(k3, n3 - k3); ++i3)
          for (long long j3 = i2 + i3; j3 <= std::min(k3 + i2, k2 - k3 + i3); ++j3)
            for (long long j2 = i1 + i2;
                 j2 <= std::min({k2 - k3 + i1, k1 - k2 + i2, n2 + k3 - k2 + i1}); ++j2)
              for (long long a6 = 0;
                   a6 <= std::min(k1 - k2 + i2 - j2, n3 - k3 + i2 - j3); ++a6) {
                SuborbitIndices x;
                x.i1 = static_cast<int>(i1);
                x.i2 = static_cast<int>(i2);
                x.i3 = static_cast<int>(i3);
                x.j2 = static_cast<int>(j2);
                x.j3 = static_cast<int>(j3);
                x.j1 = static_cast<int>(a6 + j2 + j3 - i2);
                const InvariantTuple t = indices_to_tuple(x);
                const auto len = suborbit_length_printed(shape, k, t, so.q);
                tuples.push_back({{"tuple", t.str()},
                                  {"printed_length", len ? json(len->str()) : json(nullptr)}});
              }
    emit({{"params", {{"shape", so.shape}, {"type", so.type}, {"q", so.q}}},
          {"printed_count", suborbit_count_printed(shape, k, so.q).str()},
          {"tuples", tuples}},
         so.out);
  });

  auto* sub_oracle = sub_cmd->add_subcommand("oracle", "brute-force orbit partition (any t)");
  add_sub_opts(sub_oracle);
  sub_oracle->callback([&] {
    sub_guards();
    const Shape shape{parse_int_list(so.shape, "shape")};
    const FieldSpec f = make_field(so.q, so.modulus);
    const OrbitPartition part = orbits_oracle(shape, parse_int_list(so.type, "type"), f,
                                              so.guard_group, so.guard_sub);
    json sizes = json::array();
    for (const auto& orbit : part.orbits) sizes.push_back(orbit.size());
    emit({{"params", {{"shape", so.shape}, {"type", so.type}, {"q", so.q}}},
          {"oracle_count", std::to_string(part.orbits.size())},
          {"orbit_sizes", sizes},
          {"stabilizer_order", part.stabilizer_order.str()}},
         so.out);
  });

  auto* sub_verify = sub_cmd->add_subcommand("verify", "formula-vs-oracle report for one case");
  add_sub_opts(sub_verify);
  sub_verify->callback([&] {
    sub_guards();
    const Shape shape{parse_int_list(so.shape, "shape")};
    const TypeVector k = parse_int_list(so.type, "type");
    const FieldSpec f = make_field(so.q, so.modulus);
    json report = {{"params", {{"shape", so.shape}, {"type", so.type}, {"q", so.q}}},
                   {"hard_failures", json::array()},
                   {"discrepancies", json::array()},
                   {"cases", json::array()}};
    try {
      const OrbitReport r = cross_validate(shape, k, f, so.guard_group, so.guard_sub);
      json tuples = json::array();
      for (const TupleRecord& rec : r.tuples)
        tuples.push_back({{"tuple", rec.tuple.str()},
                          {"printed_valid", rec.printed_valid},
                          {"printed_length",
                           rec.printed_length ? json(rec.printed_length->str()) : json(nullptr)},
                          {"oracle_length", rec.oracle_length.str()},
                          {"member_count", rec.member_count}});
      report["cases"].push_back({{"kind", "suborbit"},
                                 {"q", so.q},
                                 {"params", {{"shape", so.shape}, {"type", so.type}}},
                                 {"status", "ok"},
                                 {"expected", r.printed_count.str()},
                                 {"actual", r.oracle_count.str()},
                                 {"note", ""},
                                 {"detail", {{"anzahl", r.anzahl_value.str()},
                                             {"stabilizer_order", r.stabilizer_order.str()},
                                             {"tuples", tuples}}}});
      for (const Discrepancy& d : r.discrepancies)
        report["discrepancies"].push_back(
            {{"kind", d.kind},
             {"q", so.q},
             {"shape", so.shape},
             {"type", so.type},
             {"tuple", d.tuple ? json(d.tuple->str()) : json(nullptr)},
             {"printed", d.printed},
             {"oracle", d.oracle},
             {"note", d.note}});
    } catch (const hard_check_error& e) {
      report["hard_failures"].push_back(
          {{"kind", e.check},
           {"params", {{"shape", so.shape}, {"type", so.type}}},
           {"detail", e.what()}});
      exit_code = 1;
    }
    emit(report, so.out);
  });

  // ---- verify ----
  struct {
    VerifyConfig cfg;
    std::string out;
    std::optional<std::uint64_t> guard_both;
  } ve;
  auto* verify_cmd = app.add_subcommand("verify", "run the full desk-grid verification report");
  verify_cmd->add_option("--max-q", ve.cfg.max_q, "largest field order in the grid");
  verify_cmd->add_option("--max-total-dim", ve.cfg.max_total_dim, "largest ambient dimension");
  verify_cmd->add_option("--max-t", ve.cfg.max_t, "largest number of blocks");
  verify_cmd->add_option("--group-guard", ve.cfg.group_guard);
  verify_cmd->add_option("--subspace-guard", ve.cfg.subspace_guard);
  verify_cmd->add_option("--guard", [&](const std::vector<std::string>& vals) {
    ve.guard_both = std::stoull(vals.front());
    return true;
  }, "override both enumeration guards");
  verify_cmd->add_option("--format", ve.cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify_cmd->add_option("--out", ve.out, "report file; standard output when omitted");
  verify_cmd->callback([&] {
    if (ve.guard_both) {
      ve.cfg.group_guard = *ve.guard_both;
      ve.cfg.subspace_guard = *ve.guard_both;
    }
    const VerifyOutcome outcome = run_verify(ve.cfg);
    const std::string text = outcome.render();
    if (ve.out.empty() || ve.out == "-") {
      std::cout << text;
    } else {
      std::ofstream os(ve.out, std::ios::binary);
      if (!os) throw std::runtime_error("cannot open output file " + ve.out);
      os << text;
    }
    if (!outcome.hard_ok) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const hard_check_error& e) {
    std::cerr << "hard check failed [" << e.check << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qgeom/field.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/qcount.hpp"
#include "qgeom/spaces.hpp"
#include "qgeom/suborbits.hpp"

namespace qgeom {

/// Desk-grid bounds for the verification harness.  The guards keep the
/// exhaustive oracles at desk scale; anything beyond is recorded as skipped.
struct VerifyConfig {
  long long max_q = 3;
  int max_total_dim = 4;
  int max_t = 3;
  std::uint64_t group_guard = kDefaultGroupGuard;
  std::uint64_t subspace_guard = kDefaultSubspaceGuard;
  std::string format = "json";  // "json" | "csv"
};

struct VerifyOutcome {
  nlohmann::json report;  // keys: params, hard_failures, discrepancies, cases
  bool hard_ok = true;

  std::string render() const;
};

namespace verify_detail {

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

inline std::string join_counts(const std::vector<Count>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += v[i].str();
  }
  return s;
}

/// All shapes with the given number of blocks and total at most max_total,
/// zero blocks included, in lexicographic order.
inline std::vector<Shape> shapes_for(int t, int max_total) {
  std::vector<Shape> out;
  std::vector<int> blocks(static_cast<std::size_t>(t), 0);
  const std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == t) {
      out.push_back(Shape{blocks});
      return;
    }
    for (int b = 0; b + used <= max_total; ++b) {
      blocks[static_cast<std::size_t>(pos)] = b;
      rec(pos + 1, used + b);
    }
  };
  rec(0, 0);
  return out;
}

/// All realizable types for a shape, lexicographic.
inline std::vector<TypeVector> valid_types_for(const Shape& shape) {
  const int t = shape.t();
  std::vector<TypeVector> out;
  std::vector<int> diffs(static_cast<std::size_t>(t), 0);
  const std::function<void(int)> rec = [&](int pos) {
    if (pos == t) {
      TypeVector k(static_cast<std::size_t>(t));
      int acc = 0;
      for (int i = t - 1; i >= 0; --i) {
        acc += diffs[static_cast<std::size_t>(i)];
        k[static_cast<std::size_t>(i)] = acc;
      }
      out.push_back(std::move(k));
      return;
    }
    for (int d = 0; d <= shape.blocks[static_cast<std::size_t>(pos)]; ++d) {
      diffs[static_cast<std::size_t>(pos)] = d;
      rec(pos + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t pow_clamped(std::uint64_t base, std::uint64_t exp,
                                 std::uint64_t cap) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (v > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
    v *= base;
  }
  return v;
}

}  // namespace verify_detail

inline VerifyOutcome run_verify(const VerifyConfig& cfg) {
  using nlohmann::json;
  VerifyOutcome out;
  json& rep = out.report;
  rep["params"] = {{"max_q", cfg.max_q},
                   {"max_total_dim", cfg.max_total_dim},
                   {"max_t", cfg.max_t},
                   {"group_guard", cfg.group_guard},
                   {"subspace_guard", cfg.subspace_guard},
                   {"format", cfg.format}};
  rep["hard_failures"] = json::array();
  rep["discrepancies"] = json::array();
  rep["cases"] = json::array();

  const auto add_case = [&](json c) { rep["cases"].push_back(std::move(c)); };
  const auto hard_fail = [&](const std::string& kind, json params, const std::string& detail) {
    out.hard_ok = false;
    rep["hard_failures"].push_back(
        {{"kind", kind}, {"params", std::move(params)}, {"detail", detail}});
  };

  std::vector<long long> qs;
  for (long long q = 2; q <= cfg.max_q; ++q)
    if (factor_prime_power(static_cast<std::uint64_t>(q))) qs.push_back(q);

  // ---- closed-form rank/extension/block counts vs exhaustive matrix scans ----
  // One knob scales the whole desk: the scan sizes shrink with max_total_dim.
  const int scan3 = std::min(3, cfg.max_total_dim);
  const int scan2 = std::min(2, cfg.max_total_dim);
  for (long long q : qs) {
    const FieldSpec f = FieldSpec::make(static_cast<std::uint64_t>(q));
    for (int m = 0; m <= scan3; ++m)
      for (int n = 0; n <= scan3; ++n) {
        json params = {{"m", m}, {"n", n}};
        if (verify_detail::pow_clamped(static_cast<std::uint64_t>(q),
                                       static_cast<std::uint64_t>(m) * n,
                                       cfg.subspace_guard) > cfg.subspace_guard) {
          add_case({{"kind", "rank_count"}, {"q", q}, {"params", params},
                    {"status", "skipped"}, {"expected", ""}, {"actual", ""},
                    {"note", "scan exceeds the subspace guard"}});
          continue;
        }
        std::vector<Count> scan(static_cast<std::size_t>(std::min(m, n)) + 1, 0);
        verify_detail::for_all_matrices(f, m, n, [&](const Matrix& mat) {
          ++scan[static_cast<std::size_t>(rank_of(mat))];
        });
        std::vector<Count> formula;
        for (int i = 0; i <= std::min(m, n); ++i)
          formula.push_back(count_rank_matrices(i, m, n, q));
        const std::string e = verify_detail::join_counts(formula);
        const std::string a = verify_detail::join_counts(scan);
        const bool ok = e == a;
        if (!ok) hard_fail("rank_count", params, "formula " + e + " vs scan " + a);
        add_case({{"kind", "rank_count"}, {"q", q}, {"params", params},
                  {"status", ok ? "ok" : "hard_fail"}, {"expected", e}, {"actual", a},
                  {"note", ""}});
      }
  }

  // Extension and block counts: scans are exponential in both factors, so the
  // harness pins them to q = 2 at the documented sizes.
  if (std::find(qs.begin(), qs.end(), 2) != qs.end()) {
    const FieldSpec f2 = FieldSpec::make(std::uint64_t{2});
    for (int m1 = 0; m1 <= scan3; ++m1)
      for (int n = 0; n <= scan3; ++n)
        for (int m2 = 0; m2 <= scan3; ++m2) {
          json params = {{"m1", m1}, {"n", n}, {"m2", m2}};
          bool ok = true;
          std::string detail;
          verify_detail::for_all_matrices(f2, m1, n, [&](const Matrix& a1) {
            if (!ok) return;
            const int t1 = rank_of(a1);
            std::vector<Count> scan(static_cast<std::size_t>(std::min(m1 + m2, n)) + 1, 0);
            verify_detail::for_all_matrices(f2, m2, n, [&](const Matrix& a2) {
              ++scan[static_cast<std::size_t>(rank_of(stack_rows(a1, a2)))];
            });
            for (int t2 = t1; t2 <= std::min(m1 + m2, n); ++t2) {
              const Count want = count_row_extension(t1, t2, m2, n, 2);
              if (want != scan[static_cast<std::size_t>(t2)]) {
                ok = false;
                detail = "base rank " + std::to_string(t1) + ", t2 = " + std::to_string(t2) +
                         ": formula " + want.str() + " vs scan " +
                         scan[static_cast<std::size_t>(t2)].str();
                return;
              }
            }
          });
          if (!ok) hard_fail("row_extension", params, detail);
          add_case({{"kind", "row_extension"}, {"q", 2}, {"params", params},
                    {"status", ok ? "ok" : "hard_fail"}, {"expected", ""}, {"actual", ""},
                    {"note", detail}});
        }
    for (int m = 0; m <= scan3; ++m)
      for (int n1 = 0; n1 <= scan3; ++n1)
        for (int n2 = 0; n2 <= scan3; ++n2) {
          json params = {{"m", m}, {"n1", n1}, {"n2", n2}};
          bool ok = true;
          std::string detail;
          verify_detail::for_all_matrices(f2, m, n1, [&](const Matrix& a1) {
            if (!ok) return;
            const int t1 = rank_of(a1);
            std::vector<Count> scan(static_cast<std::size_t>(std::min(m, n1 + n2)) + 1, 0);
            verify_detail::for_all_matrices(f2, m, n2, [&](const Matrix& a2) {
              Matrix joined(f2, m, n1 + n2);
              for (int i = 0; i < m; ++i) {
                for (int j = 0; j < n1; ++j) joined.at(i, j) = a1.at(i, j);
                for (int j = 0; j < n2; ++j) joined.at(i, n1 + j) = a2.at(i, j);
              }
              ++scan[static_cast<std::size_t>(rank_of(joined))];
            });
            for (int t2 = t1; t2 <= std::min(m, n1 + n2); ++t2) {
              const Count want = count_col_extension(t1, t2, m, n2, 2);
              if (want != scan[static_cast<std::size_t>(t2)]) {
                ok = false;
                detail = "base rank " + std::to_string(t1) + ", t2 = " + std::to_string(t2) +
                         ": formula " + want.str() + " vs scan " +
                         scan[static_cast<std::size_t>(t2)].str();
                return;
              }
            }
          });
          if (!ok) hard_fail("col_extension", params, detail);
          add_case({{"kind", "col_extension"}, {"q", 2}, {"params", params},
                    {"status", ok ? "ok" : "hard_fail"}, {"expected", ""}, {"actual", ""},
                    {"note", detail}});
        }
    for (int m1 = 0; m1 <= scan2; ++m1)
      for (int m2 = 0; m2 <= scan2; ++m2)
        for (int n1 = 0; n1 <= scan2; ++n1)
          for (int n2 = 0; n2 <= scan2; ++n2) {
            json params = {{"m1", m1}, {"m2", m2}, {"n1", n1}, {"n2", n2}};
            // One step past the rank(C D) bound, so the zero tail is checked too.
            const int amax = std::min(m2, n1 + n2) + 1;
            std::vector<Count> scan(static_cast<std::size_t>(amax) + 1, 0);
            verify_detail::for_all_matrices(f2, m1 + m2, n1 + n2, [&](const Matrix& mat) {
              Matrix cd(f2, m2, n1 + n2), bd(f2, m1 + m2, n2);
              for (int i = 0; i < m2; ++i)
                for (int j = 0; j < n1 + n2; ++j) cd.at(i, j) = mat.at(m1 + i, j);
              for (int i = 0; i < m1 + m2; ++i)
                for (int j = 0; j < n2; ++j) bd.at(i, j) = mat.at(i, n1 + j);
              const int ra = rank_of(cd);
              if (ra == rank_of(bd) && ra <= amax) ++scan[static_cast<std::size_t>(ra)];
            });
            std::vector<Count> formula;
            for (int a = 0; a <= amax; ++a)
              formula.push_back(count_block_rank(m1, m2, n1, n2, a, 2));
            const std::string e = verify_detail::join_counts(formula);
            const std::string a = verify_detail::join_counts(scan);
            const bool ok = e == a;
            if (!ok) hard_fail("block_rank", params, "formula " + e + " vs scan " + a);
            add_case({{"kind", "block_rank"}, {"q", 2}, {"params", params},
                      {"status", ok ? "ok" : "hard_fail"}, {"expected", e}, {"actual", a},
                      {"note", ""}});
          }
  }

  // ---- anzahl / contained / containing vs filtered enumeration ----
  for (long long q : qs) {
    const FieldSpec f = FieldSpec::make(static_cast<std::uint64_t>(q));
    for (int t = 1; t <= cfg.max_t; ++t) {
      for (const Shape& shape : verify_detail::shapes_for(t, cfg.max_total_dim)) {
        const int n = shape.total();
        const std::string shape_s = join_ints(shape.blocks);
        const std::vector<TypeVector> types = verify_detail::valid_types_for(shape);

        Count type_sum = 0;
        for (const TypeVector& k : types) {
          const Count expected = anzahl(shape, k, q);
          type_sum += expected;
          json params = {{"shape", shape_s}, {"type", join_ints(k)}};
          if (gauss(n, k[0], q) > cfg.subspace_guard) {
            add_case({{"kind", "anzahl"}, {"q", q}, {"params", params},
                      {"status", "skipped"}, {"expected", expected.str()}, {"actual", ""},
                      {"note", "enumeration exceeds the subspace guard"}});
            continue;
          }
          Count actual = 0;
          enumerate_by_type(shape, k, f, [&](const Subspace&) { ++actual; });
          const bool ok = expected == actual;
          if (!ok)
            hard_fail("anzahl", params,
                      "formula " + expected.str() + " vs enumeration " + actual.str());
          add_case({{"kind", "anzahl"}, {"q", q}, {"params", params},
                    {"status", ok ? "ok" : "hard_fail"}, {"expected", expected.str()},
                    {"actual", actual.str()}, {"note", ""}});
        }

        Count total = 0;
        for (int d = 0; d <= n; ++d) total += gauss(n, d, q);
        {
          json params = {{"shape", shape_s}};
          const bool ok = type_sum == total;
          if (!ok)
            hard_fail("anzahl_sum", params,
                      "sum over types " + type_sum.str() + " vs total subspace count " + total.str());
          add_case({{"kind", "anzahl_sum"}, {"q", q}, {"params", params},
                    {"status", ok ? "ok" : "hard_fail"}, {"expected", total.str()},
                    {"actual", type_sum.str()}, {"note", ""}});
        }

        for (const TypeVector& k : types) {
          const Subspace rep_k = orbit_representative(shape, k, f);
          for (const TypeVector& l : types) {
            if (!is_valid_type_pair(shape, k, l)) continue;
            json params = {{"shape", shape_s}, {"type", join_ints(k)}, {"sub_type", join_ints(l)}};

            // contained: filtered count of type-l subspaces inside rep_k,
            // enumerated through coordinates in the row space of rep_k.
            const Count c_formula = count_contained(shape, k, l, q);
            if (gauss(k[0], l[0], q) > cfg.subspace_guard) {
              add_case({{"kind", "contained"}, {"q", q}, {"params", params},
                        {"status", "skipped"}, {"expected", c_formula.str()}, {"actual", ""},
                        {"note", "enumeration exceeds the subspace guard"}});
            } else {
              Count c_actual = 0;
              enumerate_subspaces(k[0], l[0], f, [&](const Subspace& coords) {
                const Subspace s = Subspace::row_space(mat_mul(coords.basis, rep_k.basis));
                if (s.dim() == l[0] && type_of(shape, s) == l) ++c_actual;
              });
              const bool ok = c_formula == c_actual;
              if (!ok)
                hard_fail("contained", params,
                          "formula " + c_formula.str() + " vs enumeration " + c_actual.str());
              add_case({{"kind", "contained"}, {"q", q}, {"params", params},
                        {"status", ok ? "ok" : "hard_fail"}, {"expected", c_formula.str()},
                        {"actual", c_actual.str()}, {"note", ""}});
            }

            // containing: filtered count of type-k subspaces over rep_l.
            const Subspace rep_l = orbit_representative(shape, l, f);
            const Count g_formula = count_containing(shape, l, k, q);
            if (gauss(n, k[0], q) > cfg.subspace_guard) {
              add_case({{"kind", "containing"}, {"q", q}, {"params", params},
                        {"status", "skipped"}, {"expected", g_formula.str()}, {"actual", ""},
                        {"note", "enumeration exceeds the subspace guard"}});
            } else {
              Count g_actual = 0;
              enumerate_by_type(shape, k, f, [&](const Subspace& s) {
                if (contains(s, rep_l)) ++g_actual;
              });
              const bool ok = g_formula == g_actual;
              if (!ok)
                hard_fail("containing", params,
                          "formula " + g_formula.str() + " vs enumeration " + g_actual.str());
              add_case({{"kind", "containing"}, {"q", q}, {"params", params},
                        {"status", ok ? "ok" : "hard_fail"}, {"expected", g_formula.str()},
                        {"actual", g_actual.str()}, {"note", ""}});
            }

            // The double-counting identity, exact.
            const Count lhs = g_formula * anzahl(shape, l, q);
            const Count rhs = c_formula * anzahl(shape, k, q);
            const bool ok = lhs == rhs;
            if (!ok)
              hard_fail("double_count", params, "N'*N(l) = " + lhs.str() + " vs N(l in k)*N(k) = " + rhs.str());
            add_case({{"kind", "double_count"}, {"q", q}, {"params", params},
                      {"status", ok ? "ok" : "hard_fail"}, {"expected", lhs.str()},
                      {"actual", rhs.str()}, {"note", ""}});
          }
        }
      }
    }
  }

  // ---- suborbit cross-validation for the t = 3 slice ----
  for (long long q : qs) {
    if (cfg.max_t < 3) break;
    const FieldSpec f = FieldSpec::make(static_cast<std::uint64_t>(q));
    for (const Shape& shape : verify_detail::shapes_for(3, cfg.max_total_dim)) {
      const std::string shape_s = join_ints(shape.blocks);
      for (const TypeVector& k : verify_detail::valid_types_for(shape)) {
        json params = {{"shape", shape_s}, {"type", join_ints(k)}};
        const Count order = group_order(shape, q);
        const Count anz = anzahl(shape, k, q);
        if (order > cfg.group_guard || anz > cfg.subspace_guard) {
          add_case({{"kind", "suborbit"}, {"q", q}, {"params", params},
                    {"status", "skipped"}, {"expected", ""}, {"actual", ""},
                    {"note", "group order " + order.str() + " / member count " + anz.str() +
                                 " against guards"}});
          continue;
        }
        try {
          const OrbitReport r = cross_validate(shape, k, f, cfg.group_guard, cfg.subspace_guard);
          json tuples = json::array();
          for (const TupleRecord& rec : r.tuples) {
            tuples.push_back({{"tuple", rec.tuple.str()},
                              {"printed_valid", rec.printed_valid},
                              {"printed_length", rec.printed_length
                                                     ? json(rec.printed_length->str())
                                                     : json(nullptr)},
                              {"oracle_length", rec.oracle_length.str()},
                              {"member_count", rec.member_count}});
          }
          add_case({{"kind", "suborbit"}, {"q", q}, {"params", params},
                    {"status", "ok"},
                    {"expected", r.printed_count.str()},
                    {"actual", r.oracle_count.str()},
                    {"note", r.discrepancies.empty() ? "" : "see discrepancies"},
                    {"detail", {{"anzahl", r.anzahl_value.str()},
                                {"stabilizer_order", r.stabilizer_order.str()},
                                {"tuples", tuples}}}});
          for (const Discrepancy& d : r.discrepancies) {
            rep["discrepancies"].push_back(
                {{"kind", d.kind},
                 {"q", q},
                 {"shape", shape_s},
                 {"type", join_ints(k)},
                 {"tuple", d.tuple ? nlohmann::json(d.tuple->str()) : nlohmann::json(nullptr)},
                 {"printed", d.printed},
                 {"oracle", d.oracle},
                 {"note", d.note}});
          }
        } catch (const hard_check_error& e) {
          hard_fail(e.check, params, e.what());
          add_case({{"kind", "suborbit"}, {"q", q}, {"params", params},
                    {"status", "hard_fail"}, {"expected", ""}, {"actual", ""},
                    {"note", e.what()}});
        }
      }
    }
  }

  return out;
}

namespace verify_detail {

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

inline std::string flatten_params(const nlohmann::json& params) {
  std::string s;
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!s.empty()) s += ';';
    s += it.key();
    s += '=';
    if (it.value().is_string())
      s += it.value().get<std::string>();
    else
      s += it.value().dump();
  }
  return s;
}

}  // namespace verify_detail

inline std::string VerifyOutcome::render() const {
  const std::string format = report.at("params").at("format").get<std::string>();
  if (format == "json") return report.dump(2) + "\n";

  // CSV: one row per case, then discrepancies, then hard failures.
  using verify_detail::csv_quote;
  using verify_detail::flatten_params;
  std::string s = "section,kind,q,params,status,expected,actual,note\n";
  s += "params,config,," + csv_quote(flatten_params(report.at("params"))) + ",,,,\n";
  for (const auto& c : report.at("cases")) {
    s += "cases," + csv_quote(c.at("kind").get<std::string>()) + ',' +
         c.at("q").dump() + ',' + csv_quote(flatten_params(c.at("params"))) + ',' +
         csv_quote(c.at("status").get<std::string>()) + ',' +
         csv_quote(c.at("expected").get<std::string>()) + ',' +
         csv_quote(c.at("actual").get<std::string>()) + ',' +
         csv_quote(c.at("note").get<std::string>()) + '\n';
  }
  for (const auto& d : report.at("discrepancies")) {
    const std::string tuple = d.at("tuple").is_null() ? "" : d.at("tuple").get<std::string>();
    s += "discrepancies," + csv_quote(d.at("kind").get<std::string>()) + ',' +
         d.at("q").dump() + ',' +
         csv_quote("shape=" + d.at("shape").get<std::string>() +
                   ";type=" + d.at("type").get<std::string>() +
                   (tuple.empty() ? "" : ";tuple=" + tuple)) + ",," +
         csv_quote(d.at("printed").get<std::string>()) + ',' +
         csv_quote(d.at("oracle").get<std::string>()) + ',' +
         csv_quote(d.at("note").get<std::string>()) + '\n';
  }
  for (const auto& h : report.at("hard_failures")) {
    s += "hard_failures," + csv_quote(h.at("kind").get<std::string>()) + ",," +
         csv_quote(flatten_params(h.at("params"))) + ",,,," +
         csv_quote(h.at("detail").get<std::string>()) + '\n';
  }
  return s;
}

}  // namespace qgeom

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qgeom/verify.hpp"

using namespace qgeom;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Run the built CLI with the given arguments, capturing standard output.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QGEOM_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

VerifyConfig small_config() {
  VerifyConfig cfg;
  cfg.max_total_dim = 2;
  return cfg;
}

}  // namespace

TEST(RunVerify, SmallGridIsCleanAndDeterministic) {
  const VerifyConfig cfg = small_config();
  const VerifyOutcome a = run_verify(cfg);
  const VerifyOutcome b = run_verify(cfg);
  EXPECT_TRUE(a.hard_ok);
  EXPECT_EQ(a.render(), b.render());
  ASSERT_TRUE(a.report.contains("params"));
  ASSERT_TRUE(a.report.contains("hard_failures"));
  ASSERT_TRUE(a.report.contains("discrepancies"));
  ASSERT_TRUE(a.report.contains("cases"));
  EXPECT_TRUE(a.report["hard_failures"].empty());
  EXPECT_FALSE(a.report["cases"].empty());
}

TEST(RunVerify, CountsAreDecimalStrings) {
  const VerifyOutcome a = run_verify(small_config());
  for (const auto& c : a.report["cases"]) {
    ASSERT_TRUE(c.contains("expected"));
    ASSERT_TRUE(c.contains("actual"));
    for (const char* key : {"expected", "actual"}) {
      const std::string v = c.at(key).get<std::string>();
      for (char ch : v)
        EXPECT_TRUE((ch >= '0' && ch <= '9') || ch == ';')
            << "non-decimal character in '" << v << "'";
    }
  }
}

TEST(RunVerify, TRestrictionDropsSuborbitCases) {
  VerifyConfig cfg = small_config();
  cfg.max_t = 2;
  const VerifyOutcome a = run_verify(cfg);
  EXPECT_TRUE(a.hard_ok);
  for (const auto& c : a.report["cases"]) EXPECT_NE(c["kind"], "suborbit");
  EXPECT_TRUE(a.report["discrepancies"].empty());
}

TEST(RunVerify, ZeroTotalDimCoversOnlyZeroTypes) {
  VerifyConfig cfg;
  cfg.max_total_dim = 0;
  const VerifyOutcome a = run_verify(cfg);
  EXPECT_TRUE(a.hard_ok);
  bool saw_anzahl = false;
  for (const auto& c : a.report["cases"]) {
    if (c["kind"] == "anzahl") {
      saw_anzahl = true;
      const std::string type = c["params"]["type"].get<std::string>();
      for (char ch : type) EXPECT_TRUE(ch == '0' || ch == ',');
    }
  }
  EXPECT_TRUE(saw_anzahl);
}

TEST(RunVerify, DefaultGridFindsDocumentedDiscrepancy) {
  const VerifyOutcome a = run_verify(VerifyConfig{});
  EXPECT_TRUE(a.hard_ok);  // discrepancies are not hard failures
  bool found = false;
  for (const auto& d : a.report["discrepancies"]) {
    if (d["kind"] == "suborbit_count" && d["q"] == 2 &&
        d["shape"].get<std::string>() == "1,1,1" &&
        d["type"].get<std::string>() == "1,0,0") {
      EXPECT_EQ(d["printed"].get<std::string>(), "2");
      EXPECT_EQ(d["oracle"].get<std::string>(), "3");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(RunVerify, CsvRendering) {
  VerifyConfig cfg = small_config();
  cfg.format = "csv";
  const VerifyOutcome a = run_verify(cfg);
  const std::string csv = a.render();
  EXPECT_EQ(csv.rfind("section,kind,q,params,status,expected,actual,note\n", 0), 0u);
  EXPECT_NE(csv.find("\ncases,"), std::string::npos);
  EXPECT_EQ(a.render(), run_verify(cfg).render());
}

// ---- CLI round trips ----

TEST(Cli, CountGauss) {
  const RunResult r = run_cli("count gauss --n 4 --k 2 --q 2");
  EXPECT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["value"].get<std::string>(), "35");
  EXPECT_EQ(j["formula"].get<std::string>(), "gauss");
}

TEST(Cli, CountAnzahl) {
  const RunResult r = run_cli("count anzahl --shape 1,1,1 --type 1,0,0 --q 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["value"].get<std::string>(), "4");
}

TEST(Cli, CountTrivialGauss) {
  const RunResult r = run_cli("count gauss --n 3 --k 0 --q 5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["value"].get<std::string>(), "1");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("count gauss --n 4 --k 2 --q 1").exit_code, 2);  // q < 2
  EXPECT_EQ(run_cli("count gauss --n 4").exit_code, 2);              // missing flags
  EXPECT_EQ(run_cli("count nonsense --n 1").exit_code, 2);           // unknown formula
  EXPECT_EQ(run_cli("enumerate --shape 1,1 --type 1,0 --q 6").exit_code, 2);  // not a prime power
}

TEST(Cli, EnumerateBlocks) {
  const RunResult r = run_cli("enumerate --shape 1,1 --type 1,0 --q 2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "1 0\n\n1 1\n");
}

TEST(Cli, TypeofAndCanonical) {
  const std::string path = std::string(::testing::TempDir()) + "/typeof_input.txt";
  {
    std::ofstream os(path);
    os << "0 0 1\n";
  }
  const RunResult t = run_cli("typeof --shape 1,1,1 --q 2 --matrix-file " + path);
  EXPECT_EQ(t.exit_code, 0);
  EXPECT_EQ(t.out, "1,1,1\n");

  const RunResult c = run_cli("canonical --shape 1,1,1 --type 1,0,0 --q 2");
  EXPECT_EQ(c.exit_code, 0);
  EXPECT_EQ(c.out, "1 0 0\n");

  // Blank file: the 0 x n matrix, type all zeros.
  const std::string blank = std::string(::testing::TempDir()) + "/typeof_blank.txt";
  { std::ofstream os(blank); }
  const RunResult b = run_cli("typeof --shape 1,1,1 --q 2 --matrix-file " + blank);
  EXPECT_EQ(b.exit_code, 0);
  EXPECT_EQ(b.out, "0,0,0\n");
}

TEST(Cli, SuborbitsVerifyHeadline) {
  const RunResult r = run_cli("suborbits verify --shape 1,1,1 --type 1,0,0 --q 2");
  EXPECT_EQ(r.exit_code, 0);  // discrepancies do not fail the run
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["hard_failures"].empty());
  EXPECT_FALSE(j["discrepancies"].empty());
  ASSERT_EQ(j["cases"].size(), 1u);
  EXPECT_EQ(j["cases"][0]["expected"].get<std::string>(), "2");
  EXPECT_EQ(j["cases"][0]["actual"].get<std::string>(), "3");
}

TEST(Cli, SuborbitsOracleAndFormula) {
  const RunResult o = run_cli("suborbits oracle --shape 1,1,1 --type 1,0,0 --q 2");
  EXPECT_EQ(o.exit_code, 0);
  const json jo = json::parse(o.out);
  EXPECT_EQ(jo["oracle_count"].get<std::string>(), "3");
  EXPECT_EQ(jo["stabilizer_order"].get<std::string>(), "2");

  const RunResult f = run_cli("suborbits formula --shape 1,1,1 --type 1,0,0 --q 2");
  EXPECT_EQ(f.exit_code, 0);
  const json jf = json::parse(f.out);
  EXPECT_EQ(jf["printed_count"].get<std::string>(), "2");
  EXPECT_EQ(jf["tuples"].size(), 2u);
}

TEST(Cli, SuborbitsGuardTrips) {
  const RunResult r = run_cli("suborbits oracle --shape 1,1,1 --type 1,0,0 --q 2 --guard 1");
  EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, VerifySmallRunsAreByteIdentical) {
  const std::string args = "verify --max-total-dim 2 --max-q 2";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(b.exit_code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);

  const std::string path = std::string(::testing::TempDir()) + "/verify_report.json";
  const RunResult c = run_cli(args + " --out " + path);
  EXPECT_EQ(c.exit_code, 0);
  std::ifstream is(path, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  EXPECT_EQ(buf.str(), a.out);
}

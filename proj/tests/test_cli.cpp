#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "tbl/cli.hpp"

namespace tbl {
namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string circuit(const std::string& name) { return std::string(TBL_CIRCUITS_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("tbl_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(CliSim, RingCsvHasThreeColumnsAndManyCycles) {
  const CliRun r = run({"sim", circuit("ring3.tbl"), "--t-end", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_GT(rows.size(), 100u);
  EXPECT_EQ(rows[0], "time_s,T1_kPa,T2_kPa,T3_kPa");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  // Count upward crossings of the midline on T1.
  std::vector<double> t1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto c1 = rows[i].find(',');
    const auto c2 = rows[i].find(',', c1 + 1);
    t1.push_back(std::stod(rows[i].substr(c1 + 1, c2 - c1 - 1)));
  }
  const auto [lo, hi] = std::minmax_element(t1.begin(), t1.end());
  const double mid = 0.5 * (*lo + *hi);
  int rising = 0;
  for (std::size_t i = 1; i < t1.size(); ++i) rising += t1[i - 1] < mid && t1[i] >= mid;
  EXPECT_GE(rising, 25);
}

TEST(CliSim, ProbeSelectionAndOutFile) {
  const auto path = (std::filesystem::temp_directory_path() / "tbl_cli_trace.csv").string();
  const CliRun r = run({"sim", circuit("not.tbl"), "--t-end", "0.05", "--probe", "g1.ctl,Q", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(oracle::read_file(path));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "time_s,g1.ctl_kPa,Q_kPa");
}

TEST(CliSim, UsageAndParseErrors) {
  EXPECT_EQ(run({"sim", circuit("not.tbl"), "--t-end", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"sim", circuit("no_such_file.tbl")}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);

  const auto bad = temp_file("syntax.tbl", "source SUP pressure=145kPa\ngate NOT g1 in=a in=b\n");
  const CliRun r = run({"sim", bad});
  EXPECT_EQ(r.code, kExitStatic);
  EXPECT_NE(r.err.find("syntax.tbl:2:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("SyntaxError"), std::string::npos) << r.err;
}

TEST(CliTruth, ExpectMatchesAndMismatches) {
  const CliRun ok = run({"truth", circuit("nor.tbl"), "--inputs", "A,B", "--outputs", "Q", "--expect", "!(A|B)"});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  const CliRun bad = run({"truth", circuit("nand.tbl"), "--inputs", "A,B", "--outputs", "Q", "--expect", "A&B"});
  EXPECT_EQ(bad.code, kExitMismatch);
  int mismatches = 0;
  for (const auto& l : lines(bad.out + bad.err)) mismatches += l.rfind("mismatch", 0) == 0;
  EXPECT_EQ(mismatches, 4);
}

TEST(CliTruth, AnalysisFailures) {
  const CliRun r = run({"truth", circuit("ring3.tbl"), "--outputs", "T1"});
  EXPECT_EQ(r.code, kExitAnalysis);
  EXPECT_NE(r.err.find("AstableCircuit"), std::string::npos) << r.err;
  EXPECT_EQ(run({"truth", circuit("nor.tbl"), "--inputs", "A,B", "--expect", "A&("}).code, kExitUsage);
  EXPECT_EQ(run({"truth", circuit("nor.tbl"), "--inputs", "A,B", "--expect", "A&Z"}).code, kExitUsage);
}

TEST(CliTruth, JsonLines) {
  const CliRun r = run({"--format", "json-lines", "truth", circuit("not.tbl"), "--inputs", "A"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_GE(rows.size(), 2u);
  for (const auto& l : rows) {
    EXPECT_EQ(l.front(), '{');
    EXPECT_EQ(l.back(), '}');
  }
}

TEST(CliFreq, Examples) {
  const CliRun ring = run({"freq", circuit("ring3.tbl"), "--probe", "T1"});
  ASSERT_EQ(ring.code, kExitOk) << ring.err;
  EXPECT_NE(ring.out.find("frequency_hz"), std::string::npos);
  EXPECT_EQ(run({"freq", circuit("ring2.tbl"), "--probe", "g1.ctl"}).code, kExitAnalysis);
  const auto noprobe = temp_file("noprobe.tbl", "source SUP pressure=145kPa\nring r n=3 supply=SUP\n");
  EXPECT_EQ(run({"freq", noprobe}).code, kExitUsage);
}

TEST(CliBom, Totals) {
  const CliRun one = run({"bom", circuit("not.tbl")});
  ASSERT_EQ(one.code, kExitOk);
  EXPECT_NE(one.out.find("$0.45"), std::string::npos) << one.out;
  EXPECT_NE(run({"bom", circuit("ring3.tbl")}).out.find("$1.35"), std::string::npos);
  EXPECT_NE(run({"bom", circuit("empty.tbl")}).out.find("$0.00"), std::string::npos);
  EXPECT_EQ(run({"bom", circuit("bad_unit.tbl")}).code, kExitStatic);
}

TEST(CliCheck, Examples) {
  EXPECT_EQ(run({"check", circuit("nand.tbl")}).code, kExitOk);
  const CliRun even = run({"check", circuit("ring4.tbl")});
  EXPECT_EQ(even.code, kExitStatic);
  EXPECT_NE(even.err.find("EvenRing"), std::string::npos);
  const CliRun psi = run({"check", circuit("bad_unit.tbl")});
  EXPECT_EQ(psi.code, kExitStatic);
  EXPECT_NE(psi.err.find("UnknownUnit"), std::string::npos);
  EXPECT_NE(psi.err.find("bad_unit.tbl:1:"), std::string::npos) << psi.err;
}

TEST(CliSet, OverridesReachTheNetwork) {
  // A 6 cm pull-down leaves the NOT high level in the forbidden band.
  EXPECT_EQ(run({"truth", circuit("not.tbl"), "--inputs", "A"}).code, kExitOk);
  EXPECT_EQ(run({"--set", "g1.pd_len=6cm", "truth", circuit("not.tbl"), "--inputs", "A"}).code, kExitAnalysis);
  EXPECT_EQ(run({"--set", "nobody.pd_len=6cm", "check", circuit("not.tbl")}).code, kExitUsage);
  EXPECT_EQ(run({"--set", "g1.pd_len=6psi", "check", circuit("not.tbl")}).code, kExitUsage);
}

TEST(ApplyOverride, WildcardTargetsGatesAndRings) {
  CircuitAst ast = parse("source S pressure=145kPa\ngate NOT a in=x out=y supply=S\nring r n=3 supply=S");
  apply_override(ast, "*.compliance=0.07");
  EXPECT_TRUE(ast.statements[1].find("compliance"));
  EXPECT_TRUE(ast.statements[2].find("compliance"));
  EXPECT_FALSE(ast.statements[0].find("compliance"));
  EXPECT_THROW(apply_override(ast, "a.colour=3"), Error);
  EXPECT_THROW(apply_override(ast, "missing-dot"), Error);
}

}  // namespace
}  // namespace tbl

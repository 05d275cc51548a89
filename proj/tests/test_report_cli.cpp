#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "nsl/report.hpp"

using namespace nsl;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(NSL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) out += buf;
  const int status = pclose(pipe);
  return CliResult{WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST(MetricFile, ParseAndBitExactRoundTrip) {
  const std::string text =
      "mode = complex\n"
      "family = pkE-II\n"
      "[params]\n"
      "Lambda = 2\n"
      "[functions]\n"
      "Sigma = \"exp(p)\"\n"
      "Omega = \"q^2\"\n";
  MetricFile mf = MetricFile::parse(text);
  EXPECT_EQ(mf.mode, Mode::Complex);
  ASSERT_TRUE(mf.family.has_value());
  EXPECT_EQ(*mf.family, "pkE-II");
  EXPECT_EQ(mf.bindings.params.at("Lambda"), Cplx(2, 0));
  EXPECT_EQ(mf.bindings.functions.at("Sigma"), "exp(p)");
  EXPECT_EQ(mf.serialize(), text);
  EXPECT_EQ(content_digest(text), content_digest(mf.serialize()));
  EXPECT_NE(content_digest(text), content_digest(text + " "));
}

TEST(MetricFile, RawFunctionsForm) {
  MetricFile mf = MetricFile::parse(
      "mode = real\n[functions]\nA = \"x^2\"\nQ = \"0\"\nB = \"y^2\"\n");
  MetricInstance inst = mf.instantiate();
  EXPECT_EQ(inst.mode, Mode::Real);
  Point4 pt{{Cplx(0.1, 0), Cplx(0.2, 0), Cplx(0.3, 0), Cplx(0.4, 0)}};
  EXPECT_NEAR(std::abs(inst.curvature(pt).scalar - Cplx(-8, 0)), 0, 1e-12);
}

TEST(MetricFile, BadInputRejected) {
  EXPECT_THROW(MetricFile::parse("mode = sideways\n"), ParseError);
  EXPECT_THROW(MetricFile::parse("unknownkey = 3\n"), ParseError);
  EXPECT_THROW(MetricFile::parse("[params]\nLambda = abc\n"), ParseError);
}

TEST(Report, DeterministicJson) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance inst = instantiate("walker-pk", b);
  ClassificationRun r1 = run_classification(inst, 8, 42);
  ClassificationRun r2 = run_classification(inst, 8, 42);
  EXPECT_EQ(classification_json(r1, "deadbeef"), classification_json(r2, "deadbeef"));
  ClassificationRun r3 = run_classification(inst, 8, 43);
  EXPECT_NE(classification_json(r1, "deadbeef"), classification_json(r3, "deadbeef"));
}

TEST(Report, ScanFindsTypeBoundary) {
  Bindings b;
  b.mode = Mode::Real;
  b.functions["A"] = "x^3";
  b.functions["B"] = "-y^3";
  MetricInstance inst = instantiate("typeD-2n", b);
  ScanResult scan = run_scan(inst, "x=-1:1:9,y=-1:1:9;q=0.3,p=0.2");
  // A_xx + B_yy = 6(x - y) changes sign across the diagonal
  bool any_boundary = false;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < scan.labels.size(); ++i) {
    any_boundary = any_boundary || scan.boundary[i];
    labels.insert(scan.labels[i]);
  }
  EXPECT_TRUE(any_boundary);
  EXPECT_GE(labels.size(), 2u);
}

TEST(Cli, ClassifyPasses) {
  const std::string path = write_temp("pked.metric", "mode = complex\nfamily = pkE-D\n");
  CliResult r = run_cli("classify " + path + " --points 6 --seed 5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("[D]^{nn} (x) [D]^{nn}"), std::string::npos);
}

TEST(Cli, VerifyFailureGivesExitOne) {
  // Q = x*y makes the claimed nonexpanding dotted congruence expand
  const std::string path = write_temp(
      "broken.metric", "mode = complex\n[functions]\nA = \"0\"\nQ = \"x*y\"\nB = \"0\"\n");
  CliResult r = run_cli("verify " + path + " --check congruences --points 6");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("FAIL"), std::string::npos);
}

TEST(Cli, ParseErrorGivesExitTwo) {
  const std::string path = write_temp("bad.metric", "mode = complex\nfamily = nonsense\n");
  CliResult r = run_cli("classify " + path);
  EXPECT_EQ(r.exit_code, 2);
  const std::string path2 = write_temp("bad2.metric", "mode = huh\n");
  EXPECT_EQ(run_cli("classify " + path2).exit_code, 2);
}

TEST(Cli, AllPointsSingularGivesExitThree) {
  // F = 1 makes F_z vanish identically; every sample is rejected
  const std::string path =
      write_temp("sing.metric", "mode = complex\nfamily = typeD-ne\n[functions]\nF = \"1\"\n");
  CliResult r = run_cli("classify " + path + " --points 4");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Cli, JsonByteIdenticalAcrossRuns) {
  const std::string path = write_temp("wpk.metric", "mode = complex\nfamily = walker-pk\n");
  const std::string j1 = ::testing::TempDir() + "r1.json";
  const std::string j2 = ::testing::TempDir() + "r2.json";
  EXPECT_EQ(run_cli("classify " + path + " --points 6 --seed 9 --json " + j1).exit_code, 0);
  EXPECT_EQ(run_cli("classify " + path + " --points 6 --seed 9 --json " + j2).exit_code, 0);
  const std::string a = slurp(j1), b = slurp(j2);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"schemaVersion\": 1"), std::string::npos);
  EXPECT_NE(a.find("\"inputDigest\""), std::string::npos);
}

TEST(Cli, SeedEnvironmentDefault) {
  const std::string path = write_temp("wpk2.metric", "mode = complex\nfamily = walker-pk\n");
  const std::string j1 = ::testing::TempDir() + "e1.json";
  const std::string j2 = ::testing::TempDir() + "e2.json";
  CliResult r1 = run_cli("classify " + path + " --points 4 --seed 77 --json " + j1);
  EXPECT_EQ(r1.exit_code, 0);
  setenv("NULLSTRING_LAB_SEED", "77", 1);
  CliResult r2 = run_cli("classify " + path + " --points 4 --json " + j2);
  unsetenv("NULLSTRING_LAB_SEED");
  EXPECT_EQ(r2.exit_code, 0);
  EXPECT_EQ(slurp(j1), slurp(j2));
}

TEST(Cli, VerifyChecksRun) {
  const std::string pked = write_temp("pked2.metric",
                                      "mode = complex\nfamily = pkE-D\n[params]\nLambda = 1\n");
  EXPECT_EQ(run_cli("verify " + pked + " --check einstein --points 5").exit_code, 0);
  EXPECT_EQ(run_cli("verify " + pked + " --check killing --points 5").exit_code, 0);
  EXPECT_EQ(run_cli("verify " + pked + " --check master --points 5").exit_code, 0);
  const std::string t3 = write_temp("t3.metric", "mode = complex\nfamily = type3-iii\n");
  EXPECT_EQ(run_cli("verify " + t3 + " --check type3 --points 5").exit_code, 0);
}

TEST(Report, UniformScanAwayFromBand) {
  Bindings b;
  b.mode = Mode::Real;
  MetricInstance inst = instantiate("pkE-II", b);
  ScanResult scan = run_scan(inst, "x=-1:1:7,y=-1:1:7;q=0.4,p=0.7");
  for (const auto& l : scan.labels) {
    EXPECT_TRUE(l == "[II_r]x[D_r]" || l == "[II_rc]x[D_r]") << l;
  }
}

TEST(Cli, FlatFileClassifiesAsConformallyFlat) {
  const std::string path = write_temp(
      "flat.metric", "mode = complex\n[functions]\nA = \"0\"\nQ = \"0\"\nB = \"0\"\n");
  CliResult r = run_cli("classify " + path + " --points 5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("[O]^{n} (x) [O]^{n}"), std::string::npos);
  // the real slice reports the neutral labels
  CliResult rr = run_cli("classify " + path + " --points 5 --mode real");
  EXPECT_NE(rr.output.find("[O_r]^{n} (x) [O_r]^{n}"), std::string::npos);
}

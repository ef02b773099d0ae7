#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>

#include "test_support.hpp"

namespace fs = std::filesystem;
using testing_support::fresh_dir;
using testing_support::read_file;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(TOPERF_BINARY) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) o.output.append(buf.data(), n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

const std::string kFixture = TOPERF_FIXTURE;
const std::string kConfig = kFixture + "/toperf.toml";
const std::string kSeparable = std::string(TOPERF_TEST_DATA) + "/separable";

}  // namespace

TEST(Cli, HelpExitsZero) {
  auto o = cli("--help");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.output.find("report"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(cli("report --no-such-flag").code, 64);
  EXPECT_EQ(cli("frobnicate").code, 64);
}

TEST(Cli, ValidateBundledFixture) {
  auto o = cli("validate -c " + kConfig);
  EXPECT_EQ(o.code, 0) << o.output;
  EXPECT_NE(o.output.find("ok"), std::string::npos);
}

TEST(Cli, MissingInputNamesThePath) {
  auto o = cli("validate --input /nonexistent/corpus");
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.output.find("/nonexistent/corpus"), std::string::npos) << o.output;
}

TEST(Cli, BadConfigValueIsValidationFailure) {
  auto o = cli("classify -c " + kConfig + " --set thresholds=5,1 -o " + fresh_dir("cli_bad").string());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.output.find("thresholds"), std::string::npos) << o.output;
}

TEST(Cli, RpiTableHasMenAndWomenColumns) {
  auto out = fresh_dir("cli_rpi");
  auto o = cli("metrics rpi --class 10 --measure p1 -c " + kConfig + " -o " + out.string());
  ASSERT_EQ(o.code, 0) << o.output;
  const std::string text = read_file(out / "rpi.csv");
  EXPECT_EQ(text.rfind("# toperf ", 0), 0u);
  const auto header = text.substr(text.find('\n') + 1, text.find('\n', text.find('\n') + 1) - text.find('\n') - 1);
  EXPECT_NE(header.find("rpi_men"), std::string::npos) << header;
  EXPECT_NE(header.find("rpi_women"), std::string::npos) << header;
  EXPECT_NE(text.find("config_hash="), std::string::npos);
  EXPECT_NE(text.find("seed=7"), std::string::npos);
}

TEST(Cli, SeparatedFitExitsWithNumericFailure) {
  auto o = cli("regress --class 1 --measure p2 --input " + kSeparable + " -o " + fresh_dir("cli_sep").string());
  EXPECT_EQ(o.code, 2) << o.output;
  EXPECT_NE(o.output.find("separation"), std::string::npos) << o.output;
  EXPECT_NE(o.output.find("intl_collaboration_rate"), std::string::npos) << o.output;
}

TEST(Cli, RegressWritesCoefficients) {
  auto out = fresh_dir("cli_regress");
  auto o = cli("regress --class 10 --measure p3 -c " + kConfig + " -o " + out.string());
  ASSERT_EQ(o.code, 0) << o.output;
  for (const char* f : {"coefficients.csv", "fixed_effects.csv", "fitstats.json", "collinearity.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_NE(read_file(out / "coefficients.csv").find("gender_male"), std::string::npos);
}

TEST(Cli, SimulateIsDeterministic) {
  auto a = fresh_dir("cli_sim_a");
  auto b = fresh_dir("cli_sim_b");
  ASSERT_EQ(cli("simulate --param n_authors=120 --seed 3 --threads 1 -o " + a.string()).code, 0);
  ASSERT_EQ(cli("simulate --param n_authors=120 --seed 3 --threads 4 -o " + b.string()).code, 0);
  EXPECT_EQ(tree(a), tree(b));
  EXPECT_EQ(tree(a).size(), 5u);
}

TEST(Cli, ReportIsByteIdenticalAcrossRunsAndThreads) {
  auto a = fresh_dir("cli_report_a");
  auto b = fresh_dir("cli_report_b");
  auto c = fresh_dir("cli_report_c");
  auto ra = cli("report -c " + kConfig + " --threads 1 -o " + a.string());
  ASSERT_EQ(ra.code, 0) << ra.output;
  ASSERT_EQ(cli("report -c " + kConfig + " --threads 1 -o " + b.string()).code, 0);
  ASSERT_EQ(cli("report -c " + kConfig + " --threads 8 -o " + c.string()).code, 0);
  const auto ta = tree(a);
  EXPECT_GT(ta.size(), 10u);
  EXPECT_EQ(ta, tree(b));
  EXPECT_EQ(ta, tree(c));
  EXPECT_TRUE(ta.count("metadata.json"));
  EXPECT_TRUE(ta.count("shares.csv"));
}

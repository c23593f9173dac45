#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hermite/cli.hpp"

using namespace hermite;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hermite_cli_" + name);
  fs::remove_all(p);
  return p;
}

cli::RunConfig parse(const std::string& text) { return cli::parse_run_config(io::Config::from_string(text)); }

const char* kMinimal = "[scenario]\nname = plane_wave_1d\nfinal_time = 0.1\n[grid]\nn = 20\n[method]\nm_max = 2\n";
}  // namespace

TEST(Cli, MinimalRunWritesOneRowPerObservedStep) {
  const auto out = fresh_dir("run");
  auto rc = parse(std::string(kMinimal) + "[output]\ncadence = 2\nframes = true\n");
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_run(rc, out.string(), log), cli::kOk);
  const auto diag = io::read_table((out / "diagnostics.csv").string());
  const auto summary = nlohmann::json::parse(std::ifstream(out / "summary.json"));
  const long nt = summary["steps"];
  EXPECT_EQ(static_cast<long>(diag.rows.size()), nt / 2 + 1 + (nt % 2));
  EXPECT_EQ(summary["status"], "completed");
  EXPECT_EQ(diag.real(0, "step"), 0.0);
  EXPECT_EQ(diag.real(diag.rows.size() - 1, "step"), static_cast<double>(nt));
  EXPECT_LT(diag.real(diag.rows.size() - 1, "error"), 1e-4);
  EXPECT_TRUE(fs::exists(out / "timing.csv"));
  EXPECT_TRUE(fs::exists(out / ("frame_" + std::to_string(nt) + ".hmf")));
  const auto frame = io::read_frame((out / ("frame_" + std::to_string(nt) + ".hmf")).string());
  EXPECT_EQ(frame.frame.nx, 20);
}

TEST(Cli, MalformedConfigProducesNoOutputs) {
  const auto out = fresh_dir("malformed");
  try {
    auto c = io::Config::from_file(HERMITE_TEST_DATA "/malformed.cfg");
    cli::parse_run_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GE(e.problems().size(), 1u);
  }
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, AllProblemsReportedTogether) {
  try {
    parse("[scenario]\nname = nowhere\n[grid]\nn = 1\ncfl = 2\n[method]\nm_max = 8\n[bogus]\nkey = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GE(e.problems().size(), 5u);
  }
}

TEST(Cli, MediumOverridesAndPresets) {
  auto rc = parse("[scenario]\nname = mms1_1d\n[medium]\neps_inf = 2\n");
  ASSERT_TRUE(rc.medium.has_value());
  EXPECT_EQ(rc.medium->eps_inf, 2.0);
  EXPECT_EQ(rc.medium->a, MediumParams::mms().a);
  EXPECT_THROW(parse("[scenario]\nname = plane_wave_1d\n[medium]\npreset = soliton\n"), ConfigError);
  EXPECT_THROW(parse("[scenario]\nname = mms1_1d\n[medium]\npreset = cheese\n"), ConfigError);
  EXPECT_THROW(parse("[scenario]\nname = mms1_1d\n[medium]\ntheta = 3\n"), ConfigError);
}

TEST(Cli, SingleToleranceSweepGivesOneRow) {
  const auto out = fresh_dir("adapt");
  auto rc = parse(
      "[scenario]\nname = mms2_1d\nfinal_time = 0.2\n[grid]\nn = 20\n[method]\nm_max = 3\nadaptive = true\n"
      "[adapt_study]\neps_list = 1e-6\n");
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_adapt_study(rc, out.string(), log), cli::kOk);
  const auto t = io::read_table((out / "adapt.csv").string());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], "adaptive");
  EXPECT_EQ(t.real(0, "ok"), 1.0);
}

TEST(Cli, ConvergeWritesRatesAndSlopes) {
  const auto out = fresh_dir("converge");
  auto rc = parse(
      "[scenario]\nname = plane_wave_1d\nfinal_time = 0.2\n[converge]\nm_list = 1\nn_list = 8, 16\n");
  std::ostringstream log;
  ASSERT_EQ(cli::cmd_converge(rc, out.string(), log), cli::kOk);
  EXPECT_EQ(io::read_table((out / "rates.csv").string()).rows.size(), 2u);
  EXPECT_EQ(io::read_table((out / "slopes.csv").string()).rows.size(), 1u);
}

TEST(Cli, SolverAbortExitCode) {
  const auto out = fresh_dir("abort");
  // A config file cannot request a single sub-step; build the config directly.
  cli::RunConfig rc;
  rc.scenario = "plane_wave_1d";
  rc.n = 50;
  rc.m_max = 6;
  rc.final_time = 10.0;
  rc.energy = false;
  rc.policy.mode = SubstepPolicy::Mode::capped;
  rc.policy.cap = 1;
  rc.policy.allow_single_substep = true;
  std::ostringstream log;
  EXPECT_EQ(cli::cmd_run(rc, out.string(), log), cli::kSolverAbort);
  const auto summary = nlohmann::json::parse(std::ifstream(out / "summary.json"));
  EXPECT_EQ(summary["status"], "aborted");
  EXPECT_TRUE(summary["abort"].contains("kind"));
}

TEST(Cli, SingleSubstepRejectedFromConfig) {
  try {
    parse("[scenario]\nname = plane_wave_1d\n[substep]\nmode = capped\ncap = 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("substep.cap must be at least 2"), std::string::npos);
  }
}

TEST(Cli, OracleCommand) {
  const auto out = fresh_dir("oracle");
  std::ostringstream log;
  EXPECT_EQ(cli::cmd_oracle("rhs1d", 1, 20, out.string(), log), cli::kOk);
  const auto j = nlohmann::json::parse(std::ifstream(out / "oracle.json"));
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["samples"], 20);
  EXPECT_THROW(cli::cmd_oracle("bogus", 1, 1, out.string(), log), ConfigError);
}

TEST(Cli, OutputDirectoryPrecedence) {
  ::unsetenv("HERMITE_OUT_DIR");
  EXPECT_EQ(cli::resolve_out_dir(""), "out");
  ::setenv("HERMITE_OUT_DIR", "/tmp/env_out", 1);
  EXPECT_EQ(cli::resolve_out_dir(""), "/tmp/env_out");
  EXPECT_EQ(cli::resolve_out_dir("flag"), "flag");
  ::unsetenv("HERMITE_OUT_DIR");
}

TEST(Cli, EveryPresetParses) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(HERMITE_PRESET_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    EXPECT_NO_THROW(cli::parse_run_config(io::Config::from_file(entry.path().string()))) << entry.path();
  }
  EXPECT_GE(count, 10);
}

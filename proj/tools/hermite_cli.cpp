#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "hermite/cli.hpp"

#ifndef HERMITE_PRESET_DIR
#define HERMITE_PRESET_DIR "presets"
#endif

namespace {

using namespace hermite;

std::string preset_path(const std::string& name) {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("HERMITE_PRESET_DIR"); env && *env) dirs.emplace_back(env);
  dirs.emplace_back(HERMITE_PRESET_DIR);
  dirs.emplace_back("presets");
  for (const auto& d : dirs) {
    const auto p = std::filesystem::path(d) / (name + ".cfg");
    if (std::filesystem::exists(p)) return p.string();
  }
  throw ConfigError({"unknown preset '" + name + "'"});
}

// Preset first, then the config file on top, then command-line overrides.
io::Config load(const std::string& preset, const std::string& config, int threads, long seed) {
  if (preset.empty() && config.empty()) throw ConfigError({"one of --config or --preset is required"});
  io::Config c;
  if (!preset.empty()) c = io::Config::from_file(preset_path(preset));
  if (!config.empty()) c.merge(io::Config::from_file(config));
  if (threads >= 0) c.set("run.threads", std::to_string(threads));
  if (seed >= 0) c.set("run.seed", std::to_string(seed));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order Hermite solver for nonlinear dispersive Maxwell equations"};
  app.require_subcommand(1);
  std::string config, preset, out;
  int threads = -1;
  long seed = -1;
  app.add_option("--out", out, "output directory (default: $HERMITE_OUT_DIR or ./out)");
  app.add_option("--threads", threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config, "configuration file");
    sub->add_option("--preset", preset, "checked-in preset name");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  };
  auto* run = app.add_subcommand("run", "run one simulation");
  add_config(run);
  auto* converge = app.add_subcommand("converge", "convergence table over m and grid size");
  add_config(converge);
  auto* adapt = app.add_subcommand("adapt-study", "tolerance sweep of the adaptive solver");
  add_config(adapt);
  auto* oracle = app.add_subcommand("oracle", "randomized equivalence suites");
  std::string suite;
  int samples = -1;
  oracle->add_option("suite", suite, "suite name: rhs1d, rhs2d or polyalg")->required();
  oracle->add_option("--samples", samples, "sample count (default per suite)");
  oracle->add_option("--out", out, "output directory");
  oracle->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  const std::string out_dir = cli::resolve_out_dir(out);
  try {
    if (oracle->parsed()) return cli::cmd_oracle(suite, seed < 0 ? 0 : static_cast<std::uint64_t>(seed), samples, out_dir);
    const cli::RunConfig rc = cli::parse_run_config(load(preset, config, threads, seed));
    if (run->parsed()) return cli::cmd_run(rc, out_dir);
    if (converge->parsed()) return cli::cmd_converge(rc, out_dir);
    return cli::cmd_adapt_study(rc, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

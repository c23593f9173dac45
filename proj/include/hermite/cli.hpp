#pragma once

// Run configuration and the command implementations behind the CLI.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermite/energy.hpp"
#include "hermite/io.hpp"
#include "hermite/oracle.hpp"
#include "hermite/scenarios.hpp"
#include "hermite/verification.hpp"

namespace hermite::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverAbort = 3, kOracleFailure = 4 };

struct RunConfig {
  std::string scenario;
  double amplitude = 1.0;
  double half_width = -1.0;  // negative: scenario default
  double hole_distance = 5.0;
  int wavenumber = 1;
  std::optional<MediumParams> medium;  // replaces the scenario medium when set

  int n = 40;
  int ny = 0;
  double cfl = 0.5;
  double final_time = -1.0;

  int m_max = 3;
  bool adaptive = false;
  AdaptConfig adapt;
  SubstepPolicy policy;

  long cadence = 1;
  long frame_cadence = 0;  // 0: final frame only when frames are enabled
  bool frames = false;
  bool energy = true;
  SigmaTermForm sigma_form = SigmaTermForm::vibrational;

  std::vector<int> m_list{1, 2, 3};
  std::vector<int> n_list{20, 40, 80, 160};
  std::vector<double> eps_list{1e-2, 1e-4, 1e-6, 1e-8};
  int fixed_m = -1;  // adapt-study reference run at fixed m; negative disables
  bool compare_capped = false;

  std::uint64_t seed = 0;
  int threads = 1;

  Scenario build_scenario() const {
    Scenario s;
    const MediumParams mms = medium.value_or(MediumParams::mms());
    if (scenario == "mms1_1d") s = scenario_mms1_1d(mms);
    else if (scenario == "mms2_1d") s = scenario_mms2_1d(mms);
    else if (scenario == "mms1_2d") s = scenario_mms1_2d(mms);
    else if (scenario == "mms2_2d") s = scenario_mms2_2d(mms);
    else if (scenario == "plane_wave_1d") {
      s = scenario_plane_wave_1d(wavenumber);
      if (medium) throw ConfigError({"medium: plane_wave_1d fixes its own linear medium"});
    } else if (scenario == "soliton_1d") {
      s = half_width > 0.0 ? scenario_soliton_1d(amplitude, half_width) : scenario_soliton_1d(amplitude);
      if (medium) s.params = *medium;
    } else if (scenario == "airhole_2d") {
      s = half_width > 0.0 ? scenario_airhole_2d(half_width, hole_distance) : scenario_airhole_2d(20.0, hole_distance);
      if (medium) {
        s.params = *medium;
        s.interface->outside = *medium;
      }
    } else {
      throw ConfigError({"scenario.name: unknown scenario '" + scenario + "'"});
    }
    return s;
  }

  RunSettings settings() const {
    RunSettings rs;
    rs.n = n;
    rs.m_max = m_max;
    rs.cfl = cfl;
    rs.final_time = final_time;
    if (adaptive) {
      AdaptConfig a = adapt;
      a.m_max = m_max;
      rs.adapt = a;
    }
    rs.policy = policy;
    rs.threads = threads;
    return rs;
  }
};

inline const char* kKnownScenarios[] = {"mms1_1d", "mms2_1d", "plane_wave_1d", "soliton_1d",
                                        "mms1_2d", "mms2_2d", "airhole_2d"};

/// Reads every recognized key, collects all problems, and throws one
/// ConfigError listing them.
inline RunConfig parse_run_config(io::Config c) {
  std::vector<std::string> bad;
  RunConfig r;
  r.scenario = c.str("scenario.name", "");
  if (r.scenario.empty()) bad.push_back("scenario.name is required");
  else if (std::find_if(std::begin(kKnownScenarios), std::end(kKnownScenarios),
                        [&](const char* k) { return r.scenario == k; }) == std::end(kKnownScenarios))
    bad.push_back("scenario.name: unknown scenario '" + r.scenario + "'");
  r.amplitude = c.real("scenario.amplitude", r.amplitude, bad);
  r.half_width = c.real("scenario.half_width", r.half_width, bad);
  r.hole_distance = c.real("scenario.hole_distance", r.hole_distance, bad);
  r.final_time = c.real("scenario.final_time", r.final_time, bad);
  r.wavenumber = static_cast<int>(c.integer("scenario.wavenumber", r.wavenumber, bad));

  const std::string preset = c.str("medium.preset", "");
  static const char* fields[] = {"mu", "eps", "eps_inf", "a", "theta", "omega0", "omega_p", "omega_v", "gamma", "gamma_v"};
  bool any_field = false;
  for (const char* f : fields) any_field = any_field || c.has(std::string("medium.") + f);
  if (!preset.empty() || any_field) {
    MediumParams p;
    if (preset.empty() || preset == "mms") p = MediumParams::mms();
    else if (preset == "soliton") p = MediumParams::soliton();
    else if (preset == "vacuum") p = MediumParams::vacuum();
    else bad.push_back("medium.preset: unknown preset '" + preset + "'");
    if (preset.empty() && (r.scenario == "soliton_1d" || r.scenario == "airhole_2d")) p = MediumParams::soliton();
    if (r.scenario == "airhole_2d" && preset.empty()) p.gamma = p.gamma_v = 0.0;
    double* slots[] = {&p.mu, &p.eps, &p.eps_inf, &p.a, &p.theta, &p.omega0, &p.omega_p, &p.omega_v, &p.gamma, &p.gamma_v};
    for (std::size_t i = 0; i < std::size(fields); ++i) *slots[i] = c.real(std::string("medium.") + fields[i], *slots[i], bad);
    for (const auto& v : p.violations()) bad.push_back("medium: " + v);
    r.medium = p;
  }

  r.n = static_cast<int>(c.integer("grid.n", r.n, bad));
  r.ny = static_cast<int>(c.integer("grid.ny", r.ny, bad));
  r.cfl = c.real("grid.cfl", r.cfl, bad);
  if (r.n < 2) bad.push_back("grid.n must be at least 2");
  if (r.ny != 0 && r.ny < 2) bad.push_back("grid.ny must be at least 2");
  if (!(r.cfl > 0.0 && r.cfl <= 1.0)) bad.push_back("grid.cfl must lie in (0, 1]");

  r.m_max = static_cast<int>(c.integer("method.m_max", r.m_max, bad));
  if (r.m_max < 0 || r.m_max > poly::kMaxOrder)
    bad.push_back("method.m_max must lie in [0, " + std::to_string(poly::kMaxOrder) + "]");
  r.adaptive = c.boolean("method.adaptive", r.adaptive, bad);
  r.adapt.eps_ptol = c.real("adapt.eps_ptol", r.adapt.eps_ptol, bad);
  r.adapt.m_min = static_cast<int>(c.integer("adapt.m_min", r.adapt.m_min, bad));
  r.adapt.m_max = r.m_max;
  if (r.adaptive)
    for (const auto& v : r.adapt.violations()) bad.push_back("adapt: " + v);

  const std::string mode = c.str("substep.mode", "formula");
  if (mode == "formula") r.policy.mode = SubstepPolicy::Mode::formula;
  else if (mode == "capped") r.policy.mode = SubstepPolicy::Mode::capped;
  else bad.push_back("substep.mode must be formula or capped");
  r.policy.cap = static_cast<int>(c.integer("substep.cap", r.policy.cap, bad));
  r.policy.rk_order = static_cast<int>(c.integer("substep.rk_order", r.policy.rk_order, bad));
  for (const auto& v : r.policy.violations()) bad.push_back(v);

  r.cadence = c.integer("output.cadence", r.cadence, bad);
  if (r.cadence < 1) bad.push_back("output.cadence must be at least 1");
  r.frames = c.boolean("output.frames", r.frames, bad);
  r.frame_cadence = c.integer("output.frame_cadence", r.frame_cadence, bad);
  if (r.frame_cadence < 0) bad.push_back("output.frame_cadence must be nonnegative");
  r.energy = c.boolean("output.energy", r.energy, bad);
  const std::string sf = c.str("output.sigma_form", "vibrational");
  if (sf == "vibrational") r.sigma_form = SigmaTermForm::vibrational;
  else if (sf == "as_printed") r.sigma_form = SigmaTermForm::as_printed;
  else bad.push_back("output.sigma_form must be vibrational or as_printed");

  r.m_list = c.integers("converge.m_list", r.m_list, bad);
  r.n_list = c.integers("converge.n_list", r.n_list, bad);
  for (int m : r.m_list)
    if (m < 0 || m > poly::kMaxOrder) bad.push_back("converge.m_list entries must lie in [0, 6]");
  for (int n : r.n_list)
    if (n < 2) bad.push_back("converge.n_list entries must be at least 2");
  r.eps_list = c.reals("adapt_study.eps_list", r.eps_list, bad);
  for (double e : r.eps_list)
    if (!(e > 0.0)) bad.push_back("adapt_study.eps_list entries must be positive");
  if (r.eps_list.empty()) bad.push_back("adapt_study.eps_list must not be empty");
  r.fixed_m = static_cast<int>(c.integer("adapt_study.fixed_m", r.fixed_m, bad));
  if (r.fixed_m > poly::kMaxOrder) bad.push_back("adapt_study.fixed_m must not exceed 6");
  r.compare_capped = c.boolean("adapt_study.compare_capped", r.compare_capped, bad);

  const long seed = c.integer("run.seed", 0, bad);
  if (seed < 0) bad.push_back("run.seed must be nonnegative");
  r.seed = static_cast<std::uint64_t>(seed < 0 ? 0 : seed);
  r.threads = static_cast<int>(c.integer("run.threads", r.threads, bad));
  if (r.threads < 0) bad.push_back("run.threads must be nonnegative");

  for (const auto& k : c.unused_keys()) bad.push_back("unknown key '" + k + "'");

  if (bad.empty()) {
    // Dry-build the solver so grid and medium violations surface now.
    try {
      const Scenario s = r.build_scenario();
      RunSettings rs = r.settings();
      rs.n = r.n;
      if (s.dim == 2 && r.ny > 0) bad.push_back("grid.ny: non-square 2D grids are not supported by the scenarios");
      (void)make_solver(s, rs);
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) bad.push_back(p);
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  return r;
}

/// Output directory precedence: explicit flag, then HERMITE_OUT_DIR, then "out".
inline std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HERMITE_OUT_DIR"); env && *env) return env;
  return "out";
}

namespace detail {

inline std::vector<std::string> diagnostics_columns(const Scenario& s) {
  std::vector<std::string> cols = {"step",      "time",        "energy", "magnetic", "electric", "current",
                                   "polarization", "sigma",    "raman_cross", "kerr",   "raman_q"};
  const int nv = s.nvars();
  for (int v = 0; v < nv; ++v) cols.push_back(std::string("max_") + (s.dim == 1 ? var1d::names[v] : var2d::names[v]));
  for (const char* c : {"m_min", "m_max", "m_mean", "dof", "error"}) cols.push_back(c);
  return cols;
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

inline std::string nan_cell() { return "nan"; }

}  // namespace detail

/// Executes one run and writes diagnostics.csv, timing.csv, summary.json
/// and optional frames into out_dir. Validation happens before anything is
/// written.
inline int cmd_run(const RunConfig& rc, const std::string& out_dir, std::ostream& log = std::cout) {
  const Scenario s = rc.build_scenario();
  Grid grid;
  Solver solver = make_solver(s, rc.settings(), &grid);
  const MediumFn medium = s.medium(grid);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  io::TableWriter diag((fs::path(out_dir) / "diagnostics.csv").string(), "diagnostics", detail::diagnostics_columns(s));
  io::TableWriter timing((fs::path(out_dir) / "timing.csv").string(), "timing", {"step", "wall_seconds"});
  const auto start = std::chrono::steady_clock::now();
  long last_step = 0;

  auto observer = [&](const FieldFrame& f, long step) {
    std::vector<std::string> row = {std::to_string(step), io::format_real(f.time)};
    if (rc.energy) {
      const FrameEnergy e = energy(f, grid, medium, rc.sigma_form);
      const EnergyReport& r = e.report;
      for (double v : {r.total, r.magnetic, r.electric, r.current, r.polarization, r.sigma, r.raman_cross, r.kerr,
                       r.raman_q})
        row.push_back(io::format_real(v));
    } else {
      for (int i = 0; i < 9; ++i) row.push_back(detail::nan_cell());
    }
    for (int v = 0; v < f.nvars; ++v) {
      double mx = 0.0;
      for (long i = 0; i < f.nodes(); ++i) mx = std::max(mx, std::abs(f.value(i, v)));
      row.push_back(io::format_real(mx));
    }
    const MStats ms = m_statistics(f.m, f.dim, f.nvars);
    row.push_back(std::to_string(ms.min));
    row.push_back(std::to_string(ms.max));
    row.push_back(io::format_real(ms.mean));
    row.push_back(std::to_string(ms.dof));
    row.push_back(s.has_exact ? io::format_real(max_norm_error(f, grid, s).error) : detail::nan_cell());
    diag.row(row);
    timing.row({std::to_string(step),
                io::format_real(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count())});
    const bool frame_now = rc.frames && ((rc.frame_cadence > 0 && step % rc.frame_cadence == 0) || step == grid.nt);
    if (frame_now) io::write_frame((fs::path(out_dir) / ("frame_" + std::to_string(step) + ".hmf")).string(), f, grid);
    last_step = step;
  };

  nlohmann::json summary = {{"scenario", s.name}, {"dim", s.dim},     {"nx", grid.nx},
                            {"ny", grid.ny},      {"dt", grid.dt},    {"steps", grid.nt},
                            {"m_max", rc.m_max},  {"adaptive", rc.adaptive}, {"seed", rc.seed}};
  try {
    solver.run(solver.initial_frame(s.taylor), observer, rc.cadence);
  } catch (const SolvabilityError& e) {
    const auto& sn = e.snapshot();
    summary["status"] = "aborted";
    summary["abort"] = {{"kind", "solvability"}, {"message", e.what()}, {"e0x", sn.e0x},     {"e0y", sn.e0y},
                        {"q0", sn.q0},           {"m_value", sn.m_value}, {"cell", sn.cell}, {"substep", sn.substep},
                        {"time", sn.time},       {"last_step", last_step}};
    detail::write_json(fs::path(out_dir) / "summary.json", summary);
    log << "solver abort: " << e.what() << "\n";
    return kSolverAbort;
  } catch (const NonfiniteError& e) {
    summary["status"] = "aborted";
    summary["abort"] = {{"kind", "nonfinite"}, {"message", e.what()}, {"half_step", e.step()},
                        {"node", e.node()},    {"last_step", last_step}};
    detail::write_json(fs::path(out_dir) / "summary.json", summary);
    log << "solver abort: " << e.what() << "\n";
    return kSolverAbort;
  }
  summary["status"] = "completed";
  detail::write_json(fs::path(out_dir) / "summary.json", summary);
  log << s.name << ": " << grid.nt << " steps completed, outputs in " << out_dir << "\n";
  return kOk;
}

/// Convergence table over the configured (m, n) matrix. Failed runs are
/// recorded and the table is still written.
inline int cmd_converge(const RunConfig& rc, const std::string& out_dir, std::ostream& log = std::cout) {
  const Scenario s = rc.build_scenario();
  if (!s.has_exact) throw ConfigError({"converge: scenario '" + s.name + "' has no exact solution"});
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  io::TableWriter rates((fs::path(out_dir) / "rates.csv").string(), "rates", {"m", "n", "h", "error", "dof", "ok"});
  io::TableWriter timing((fs::path(out_dir) / "timing.csv").string(), "timing", {"m", "n", "wall_seconds"});
  const ConvergenceTable t = convergence_study(s, rc.m_list, rc.n_list, rc.settings());
  for (const auto& r : t.rows) {
    rates.row({std::to_string(r.m), std::to_string(r.n), io::format_real(r.h), r.ok ? io::format_real(r.error) : "nan",
               std::to_string(r.dof), r.ok ? "1" : "0"});
    timing.row({std::to_string(r.m), std::to_string(r.n), io::format_real(r.seconds)});
    log << "m=" << r.m << " n=" << r.n << " error=" << (r.ok ? io::format_real(r.error) : r.failure) << "\n";
  }
  io::TableWriter slopes((fs::path(out_dir) / "slopes.csv").string(), "slopes", {"m", "slope", "points"});
  for (const auto& sl : t.slopes) {
    slopes.row({std::to_string(sl.m), io::format_real(sl.slope), std::to_string(sl.points)});
    log << "m=" << sl.m << " fitted slope " << sl.slope << "\n";
  }
  return kOk;
}

/// Tolerance sweep of the adaptive solver, with an optional fixed-m
/// reference run and optional capped sub-step comparison.
inline int cmd_adapt_study(const RunConfig& rc, const std::string& out_dir, std::ostream& log = std::cout) {
  const Scenario s = rc.build_scenario();
  if (!s.has_exact) throw ConfigError({"adapt-study: scenario '" + s.name + "' has no exact solution"});
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  io::TableWriter table((fs::path(out_dir) / "adapt.csv").string(), "adapt",
                        {"mode", "policy", "eps_ptol", "m_max", "error", "dof", "m_min_final", "m_max_final",
                         "m_mean_final", "ok"});
  io::TableWriter timing((fs::path(out_dir) / "timing.csv").string(), "timing",
                         {"mode", "policy", "eps_ptol", "wall_seconds"});
  int status = kOk;
  auto one = [&](bool adaptive, double eps, SubstepPolicy::Mode mode, int m) {
    RunSettings rs = rc.settings();
    rs.m_max = m;
    rs.policy.mode = mode;
    if (adaptive) {
      AdaptConfig a = rc.adapt;
      a.eps_ptol = eps;
      a.m_max = m;
      rs.adapt = a;
    } else {
      rs.adapt.reset();
    }
    const RunOutcome o = run_scenario(s, rs);
    const std::string pol = mode == SubstepPolicy::Mode::formula ? "formula" : "capped";
    std::vector<std::string> row = {adaptive ? "adaptive" : "fixed", pol, adaptive ? io::format_real(eps) : "nan",
                                    std::to_string(m)};
    if (o.ok) {
      const MStats ms = m_statistics(o.final_frame.m, o.grid.dim, o.final_frame.nvars);
      const double err = max_norm_error(o.final_frame, o.grid, s).error;
      for (const auto& c : {io::format_real(err), std::to_string(ms.dof), std::to_string(ms.min),
                            std::to_string(ms.max), io::format_real(ms.mean), std::string("1")})
        row.push_back(c);
      log << row[0] << " " << pol << " eps=" << row[2] << " error=" << err << " dof=" << ms.dof << "\n";
    } else {
      for (const char* c : {"nan", "0", "0", "0", "nan", "0"}) row.push_back(c);
      log << row[0] << " " << pol << " eps=" << row[2] << " failed: " << o.failure << "\n";
      status = kSolverAbort;
    }
    table.row(row);
    timing.row({row[0], pol, row[2], io::format_real(o.seconds)});
  };
  for (double eps : rc.eps_list) {
    one(true, eps, rc.policy.mode, rc.m_max);
    if (rc.compare_capped && rc.policy.mode != SubstepPolicy::Mode::capped) one(true, eps, SubstepPolicy::Mode::capped, rc.m_max);
  }
  if (rc.fixed_m >= 0) one(false, 0.0, rc.policy.mode, rc.fixed_m);
  return status;
}

/// Runs a named oracle suite; writes oracle.json and, on failure, the first
/// failing sample as failure.json.
inline int cmd_oracle(const std::string& suite, std::uint64_t seed, int samples, const std::string& out_dir,
                      std::ostream& log = std::cout) {
  const auto& names = oracle::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigError({"unknown oracle suite '" + suite + "'"});
  const oracle::SuiteResult r = oracle::run_suite(suite, seed, samples);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  detail::write_json(fs::path(out_dir) / "oracle.json", {{"suite", r.suite},
                                                         {"seed", r.seed},
                                                         {"samples", r.samples},
                                                         {"failures", r.failures},
                                                         {"worst_relative_gap", r.worst},
                                                         {"passed", r.passed()}});
  log << "oracle " << suite << " seed=" << seed << ": " << r.samples << " samples, " << r.failures
      << " failures, worst relative gap " << r.worst << "\n";
  if (!r.passed()) {
    detail::write_json(fs::path(out_dir) / "failure.json", r.first_failure);
    return kOracleFailure;
  }
  return kOk;
}

}  // namespace hermite::cli

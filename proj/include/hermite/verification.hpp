#pragma once

// Error norms, scenario runs, convergence-rate fits and residual checks.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermite/energy.hpp"
#include "hermite/frame.hpp"
#include "hermite/padapt.hpp"
#include "hermite/scenarios.hpp"
#include "hermite/timestep.hpp"

namespace hermite {

struct ErrorRecord {
  double error = 0.0;       // relative when exact_norm > 0, otherwise absolute
  double abs_error = 0.0;
  double exact_norm = 0.0;
  bool zero_norm = false;   // exact solution vanished; error is absolute
  std::vector<double> per_variable;  // absolute max error per variable
};

/// Max of |numeric - exact| over variables and sample points, relative to
/// the max of |exact| over the same set. Samples are the nodes plus every
/// cell center, where the numeric value is the cell's Hermite interpolant.
/// Node samples alone can all land on zeros of a standing wave.
inline ErrorRecord max_norm_error(const FieldFrame& f, const Grid& g, const Scenario& s) {
  if (!s.has_exact) throw std::invalid_argument("max_norm_error: scenario has no exact solution");
  ErrorRecord r;
  const int nv = f.nvars;
  r.per_variable.assign(static_cast<std::size_t>(nv), 0.0);
  std::vector<double> exact(static_cast<std::size_t>(nv));
  auto accumulate = [&](const std::array<double, 2>& pos, auto&& numeric) {
    s.taylor(pos[0], pos[1], f.time, 1, g.dx(), g.dy(), exact.data());
    for (int v = 0; v < nv; ++v) {
      const double ex = exact[static_cast<std::size_t>(v)];
      const double err = std::abs(numeric(v) - ex);
      r.per_variable[static_cast<std::size_t>(v)] = std::max(r.per_variable[static_cast<std::size_t>(v)], err);
      r.abs_error = std::max(r.abs_error, err);
      r.exact_norm = std::max(r.exact_norm, std::abs(ex));
    }
  };
  for (long i = 0; i < f.nodes(); ++i)
    accumulate(node_position(g, f.mesh, i), [&](int v) { return f.value(i, v); });

  const int n = poly::coeff_count(f.m_max);
  const long block = f.dim == 1 ? n : static_cast<long>(n) * n;
  std::vector<double> coeffs(static_cast<std::size_t>(nv * block));
  std::vector<double> scratch(4 * static_cast<std::size_t>(f.side() * f.side()));
  for (long c = 0; c < g.nodes(); ++c) {
    const auto vtx = cell_vertices(g, f.mesh, c);
    const int mbar = cell_order(f, vtx);
    const long stride = f.dim == 1 ? poly::coeff_count(mbar) : static_cast<long>(poly::coeff_count(mbar)) * poly::coeff_count(mbar);
    interpolate_cell(f, vtx, mbar, coeffs.data(), scratch.data());
    accumulate(node_position(g, other(f.mesh), c), [&](int v) { return coeffs[static_cast<std::size_t>(v * stride)]; });
  }
  r.zero_norm = !(r.exact_norm > 0.0);
  r.error = r.zero_norm ? r.abs_error : r.abs_error / r.exact_norm;
  return r;
}

struct RunSettings {
  int n = 20;  // cells per direction
  int m_max = 2;
  double cfl = 0.5;
  double final_time = -1.0;  // negative: scenario default
  std::optional<AdaptConfig> adapt;
  SubstepPolicy policy;
  int threads = 1;
};

struct RunOutcome {
  Grid grid;
  FieldFrame final_frame;
  bool ok = true;
  std::string failure;
  double seconds = 0.0;
};

inline Solver make_solver(const Scenario& s, const RunSettings& rs, Grid* grid_out = nullptr) {
  Grid g = s.grid(rs.n);
  g.set_time(rs.final_time >= 0.0 ? rs.final_time : s.final_time, rs.cfl);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.m_max = rs.m_max;
  cfg.adapt = rs.adapt;
  cfg.policy = rs.policy;
  cfg.threads = rs.threads;
  cfg.medium = s.medium(g);
  cfg.forcing = s.forcing;
  if (grid_out) *grid_out = g;
  return Solver(cfg);
}

/// Runs a scenario to its final time. Solver aborts are reported through
/// the outcome instead of thrown.
template <class Observer>
RunOutcome run_scenario(const Scenario& s, const RunSettings& rs, Observer&& observer, long cadence = 1) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  Solver solver = make_solver(s, rs, &out.grid);
  try {
    out.final_frame = solver.run(solver.initial_frame(s.taylor), observer, cadence);
  } catch (const SolvabilityError& e) {
    out.ok = false;
    out.failure = e.what();
  } catch (const NonfiniteError& e) {
    out.ok = false;
    out.failure = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline RunOutcome run_scenario(const Scenario& s, const RunSettings& rs) {
  return run_scenario(s, rs, [](const FieldFrame&, long) {});
}

/// Least-squares slope of log(y) against log(x).
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ConvergenceRow {
  int m = 0;
  int n = 0;
  double h = 0.0;
  double error = 0.0;
  long long dof = 0;
  double seconds = 0.0;
  bool ok = true;
  std::string failure;
};

struct ConvergenceSlope {
  int m = 0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSlope> slopes;
};

inline ConvergenceTable convergence_study(const Scenario& s, const std::vector<int>& m_list,
                                          const std::vector<int>& n_list, RunSettings base) {
  ConvergenceTable t;
  for (int m : m_list) {
    std::vector<double> hs, errs;
    for (int n : n_list) {
      RunSettings rs = base;
      rs.m_max = m;
      rs.n = n;
      rs.adapt.reset();
      const RunOutcome o = run_scenario(s, rs);
      ConvergenceRow row;
      row.m = m;
      row.n = n;
      row.h = o.grid.h();
      row.seconds = o.seconds;
      row.ok = o.ok;
      row.failure = o.failure;
      if (o.ok) {
        row.error = max_norm_error(o.final_frame, o.grid, s).error;
        row.dof = m_statistics(o.final_frame.m, o.grid.dim, o.final_frame.nvars).dof;
        if (std::isfinite(row.error) && row.error > 0.0) {
          hs.push_back(row.h);
          errs.push_back(row.error);
        }
      }
      t.rows.push_back(row);
    }
    ConvergenceSlope sl;
    sl.m = m;
    sl.points = static_cast<int>(hs.size());
    if (hs.size() >= 2) sl.slope = fit_slope(hs, errs);
    t.slopes.push_back(sl);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Residual oracle

struct ResidualReport {
  std::vector<double> per_variable;  // max |exact rate - computed rate| over coefficients
};

/// Interpolates exact node data at order m on a cell of width h centered at
/// (x, y), evaluates the full right-hand side with forcing, and compares it
/// with the exact time derivative of the cell's Taylor coefficients.
inline ResidualReport residual_oracle(const Scenario& s, double x, double y, double t, int m, double h) {
  if (!s.has_exact || !s.rate_taylor) throw std::invalid_argument("residual_oracle: scenario has no exact solution");
  const int nv = s.nvars();
  const int n = poly::coeff_count(m);
  const int q = m + 1;
  const MediumParams p = s.medium(s.dim == 1 ? Grid::line(s.xl, s.xr, 2) : Grid::plane(s.xl, s.xr, s.yb, s.yt, 2, 2))(x, y);
  const int block = s.dim == 1 ? n : n * n;
  std::vector<double> state(static_cast<std::size_t>(nv * block)), rate(state.size()), exact_rate(state.size()),
      forcing(state.size());

  if (s.dim == 1) {
    std::vector<double> left(static_cast<std::size_t>(nv * q)), right(left.size());
    s.taylor(x - 0.5 * h, 0.0, t, q, h, h, left.data());
    s.taylor(x + 0.5 * h, 0.0, t, q, h, h, right.data());
    for (int v = 0; v < nv; ++v)
      poly::interp_scaled({left.data() + v * q, static_cast<std::size_t>(q)}, {right.data() + v * q, static_cast<std::size_t>(q)},
                          m, {state.data() + v * n, static_cast<std::size_t>(n)});
  } else {
    const int qq = q * q;
    std::array<std::vector<double>, 4> corner;
    const double off[4][2] = {{-0.5, -0.5}, {0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}};
    for (int c = 0; c < 4; ++c) {
      corner[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(nv * qq));
      s.taylor(x + off[c][0] * h, y + off[c][1] * h, t, q, h, h, corner[static_cast<std::size_t>(c)].data());
    }
    for (int v = 0; v < nv; ++v) {
      auto sub = [&](int c) { return std::span<const double>(corner[static_cast<std::size_t>(c)].data() + v * qq, static_cast<std::size_t>(qq)); };
      poly::interp_scaled_2d(sub(0), sub(1), sub(2), sub(3), m, {state.data() + v * n * n, static_cast<std::size_t>(n * n)});
    }
  }

  const double* f = nullptr;
  if (s.forcing) {
    s.forcing(x, y, t, n, h, h, forcing.data());
    f = forcing.data();
  }
  if (s.dim == 1)
    kernel::rhs_1d(state.data(), rate.data(), n, h, p, f);
  else
    kernel::rhs_2d(state.data(), rate.data(), n, h, h, p, f);
  s.rate_taylor(x, y, t, n, h, h, exact_rate.data());

  ResidualReport r;
  r.per_variable.assign(static_cast<std::size_t>(nv), 0.0);
  for (int v = 0; v < nv; ++v)
    for (int i = 0; i < block; ++i)
      r.per_variable[static_cast<std::size_t>(v)] =
          std::max(r.per_variable[static_cast<std::size_t>(v)], std::abs(rate[static_cast<std::size_t>(v * block + i)] -
                                                                         exact_rate[static_cast<std::size_t>(v * block + i)]));
  return r;
}

/// Whether a variable's equation carries a spatial derivative.
inline bool is_curl_row(int dim, int v) {
  return dim == 1 ? (v == var1d::H || v == var1d::E) : (v == var2d::Hz || v == var2d::Ex || v == var2d::Ey);
}

}  // namespace hermite

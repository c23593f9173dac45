#pragma once

// Fixed-step Dormand-Prince integration of the cell systems and the
// staggered primal/dual half-step loop.

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hermite/errors.hpp"
#include "hermite/frame.hpp"
#include "hermite/media.hpp"
#include "hermite/padapt.hpp"
#include "hermite/polyalg.hpp"
#include "hermite/rhs1d.hpp"
#include "hermite/rhs2d.hpp"

namespace hermite {

struct SubstepPolicy {
  enum class Mode { formula, capped };
  Mode mode = Mode::formula;
  int rk_order = 5;
  int cap = 3;
  // A cap of 1 is unstable; only instability demonstrations set this.
  bool allow_single_substep = false;

  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (rk_order < 1) v.push_back("substep.rk_order must be positive");
    if (mode == Mode::capped && cap < (allow_single_substep ? 1 : 2)) v.push_back("substep.cap must be at least 2");
    return v;
  }
};

inline int substep_count(double dt, double h, int mbar, const SubstepPolicy& policy) {
  if (!(dt > 0.0) || !(h > 0.0)) throw std::invalid_argument("substep_count: dt and h must be positive");
  const double raw = dt / (2.0 * std::pow(h, (2.0 * mbar + 1.0) / policy.rk_order));
  int n = std::max(1, static_cast<int>(std::ceil(raw * (1.0 - 1e-12))));
  if (policy.mode == SubstepPolicy::Mode::capped) n = std::min(n, policy.cap);
  return n;
}

namespace dopri {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
}  // namespace dopri

/// Scratch for dopri5_integrate: 7 vectors of the state length.
struct DopriWorkspace {
  std::vector<double> k1, k2, k3, k4, k5, k6, tmp;
  void resize(std::size_t n) {
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &tmp}) v->resize(n);
  }
};

/// Advances y in place from t0 to t1 with n_sub equal Dormand-Prince steps,
/// keeping the fifth-order solution. The seventh stage of the pair only
/// feeds the embedded error estimate and is skipped.
/// rhs(t, y, dydt) must fill dydt.
template <class Rhs>
void dopri5_integrate(std::span<double> y, Rhs&& rhs, double t0, double t1, int n_sub, DopriWorkspace& ws) {
  using namespace dopri;
  if (n_sub < 1) throw std::invalid_argument("dopri5_integrate: n_sub must be at least 1");
  const std::size_t n = y.size();
  ws.resize(n);
  double* k1 = ws.k1.data();
  double* k2 = ws.k2.data();
  double* k3 = ws.k3.data();
  double* k4 = ws.k4.data();
  double* k5 = ws.k5.data();
  double* k6 = ws.k6.data();
  double* z = ws.tmp.data();
  double* u = y.data();
  const double h = (t1 - t0) / n_sub;
  for (int s = 0; s < n_sub; ++s) {
    const double t = t0 + s * h;
    try {
      rhs(t, static_cast<const double*>(u), k1);
      for (std::size_t i = 0; i < n; ++i) z[i] = u[i] + h * a21 * k1[i];
      rhs(t + c2 * h, static_cast<const double*>(z), k2);
      for (std::size_t i = 0; i < n; ++i) z[i] = u[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * h, static_cast<const double*>(z), k3);
      for (std::size_t i = 0; i < n; ++i) z[i] = u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * h, static_cast<const double*>(z), k4);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * h, static_cast<const double*>(z), k5);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = u[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(t + h, static_cast<const double*>(z), k6);
    } catch (const SolvabilityError& e) {
      throw e.with_location(e.snapshot().cell, s, t);
    }
    for (std::size_t i = 0; i < n; ++i)
      u[i] += h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  }
}

/// Convenience overload for vectors.
template <class Rhs>
std::vector<double> dopri5_integrate(std::vector<double> y, Rhs&& rhs, double t0, double t1, int n_sub) {
  DopriWorkspace ws;
  dopri5_integrate(std::span<double>(y), std::forward<Rhs>(rhs), t0, t1, n_sub, ws);
  return y;
}

/// Runs fn(begin, end, worker) over [0, n) in contiguous chunks. Exceptions
/// are rethrown from the lowest chunk that failed, so the reported error
/// does not depend on scheduling.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(0L, n, 0);
    return;
  }
  const int nt = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nt));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int w = 0; w < nt; ++w) {
    const long b = n * w / nt, e = n * (w + 1) / nt;
    pool.emplace_back([&, b, e, w] {
      try {
        fn(b, e, w);
      } catch (...) {
        errs[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

inline int nvars_for(int dim) { return dim == 1 ? static_cast<int>(var1d::count) : static_cast<int>(var2d::count); }

/// Writes the nvars residual blocks of (side)^dim Taylor coefficients about
/// (x, y) at time t for cell spacing (dx, dy).
using TaylorFn = std::function<void(double x, double y, double t, int side, double dx, double dy, double* out)>;
using MediumFn = std::function<MediumParams(double x, double y)>;

struct SolverConfig {
  Grid grid;
  int m_max = 2;
  std::optional<AdaptConfig> adapt;
  SubstepPolicy policy;
  int threads = 1;
  MediumFn medium;
  TaylorFn forcing;  // empty when the equations are unforced
};

class Solver {
 public:
  explicit Solver(SolverConfig cfg) : cfg_(std::move(cfg)) {
    std::vector<std::string> v = cfg_.grid.violations();
    if (cfg_.m_max < 0 || cfg_.m_max > poly::kMaxOrder)
      v.push_back("m_max must lie in [0, " + std::to_string(poly::kMaxOrder) + "]");
    if (!(cfg_.grid.dt > 0.0)) v.push_back("time step must be positive");
    if (cfg_.adapt) {
      auto av = cfg_.adapt->violations();
      v.insert(v.end(), av.begin(), av.end());
    }
    auto pv = cfg_.policy.violations();
    v.insert(v.end(), pv.begin(), pv.end());
    if (!cfg_.medium) v.push_back("no medium supplied");
    if (!v.empty()) throw ConfigError(std::move(v));

    const long nc = cfg_.grid.nodes();
    for (Mesh centers : {Mesh::dual, Mesh::primal}) {
      auto& dst = centers == Mesh::dual ? params_primal_cells_ : params_dual_cells_;
      dst.reserve(static_cast<std::size_t>(nc));
      for (long c = 0; c < nc; ++c) {
        const auto pos = node_position(cfg_.grid, centers, c);
        MediumParams p = cfg_.medium(pos[0], pos[1]);
        auto pv2 = p.violations();
        if (!pv2.empty()) throw ConfigError(std::move(pv2));
        dst.push_back(p);
      }
    }
  }

  const SolverConfig& config() const { return cfg_; }
  int nvars() const { return nvars_for(cfg_.grid.dim); }
  long half_steps_taken() const { return half_steps_; }

  /// Primal frame at t0 filled from a Taylor closure at order m_max.
  FieldFrame initial_frame(const TaylorFn& init, double t0 = 0.0) const {
    FieldFrame f(cfg_.grid, nvars(), cfg_.m_max, Mesh::primal, t0);
    const int side = f.side();
    for (long i = 0; i < f.nodes(); ++i) {
      const auto pos = node_position(cfg_.grid, Mesh::primal, i);
      init(pos[0], pos[1], t0, side, cfg_.grid.dx(), cfg_.grid.dy(), f.node(i));
    }
    return f;
  }

  /// Evolves every cell of `in` by dt/2; the result lives on the other mesh.
  FieldFrame half_step(const FieldFrame& in) {
    const Grid& g = cfg_.grid;
    const double t0 = in.time;
    const double t1 = in.time + 0.5 * g.dt;
    FieldFrame out(g, in.nvars, in.m_max, other(in.mesh), t1);
    const auto& params = in.mesh == Mesh::primal ? params_primal_cells_ : params_dual_cells_;
    const long ncells = g.nodes();
    const int threads = resolve_threads(cfg_.threads);
    const int dim = g.dim;
    const int nv = in.nvars;
    const double dx = g.dx(), dy = g.dy();

    parallel_for(ncells, threads, [&](long begin, long end, int) {
      const int nmax = poly::coeff_count(in.m_max);
      const std::size_t cap = static_cast<std::size_t>(nv) * (dim == 1 ? nmax : nmax * nmax);
      std::vector<double> state(cap), forcing(cap), scratch(4 * static_cast<std::size_t>(in.side() * in.side()));
      std::vector<double> retained(static_cast<std::size_t>(in.node_stride()));
      DopriWorkspace ws;
      for (long c = begin; c < end; ++c) {
        const auto vtx = cell_vertices(g, in.mesh, c);
        const int mbar = cell_order(in, vtx);
        const int n = poly::coeff_count(mbar);
        const std::size_t len = static_cast<std::size_t>(nv) * (dim == 1 ? n : n * n);
        interpolate_cell(in, vtx, mbar, state.data(), scratch.data());
        const auto center = node_position(g, out.mesh, c);
        const MediumParams& p = params[static_cast<std::size_t>(c)];
        const int nsub = substep_count(g.dt * 0.5, g.h(), mbar, cfg_.policy);
        auto rhs = [&](double t, const double* y, double* dydt) {
          const double* f = nullptr;
          if (cfg_.forcing) {
            cfg_.forcing(center[0], center[1], t, n, dx, dy, forcing.data());
            f = forcing.data();
          }
          if (dim == 1)
            kernel::rhs_1d(y, dydt, n, dx, p, f);
          else
            kernel::rhs_2d(y, dydt, n, dx, dy, p, f);
        };
        try {
          dopri5_integrate(std::span<double>(state.data(), len), rhs, t0, t1, nsub, ws);
        } catch (const SolvabilityError& e) {
          throw e.with_location(c, e.snapshot().substep, e.snapshot().time);
        }
        write_node(out, c, state.data(), mbar, retained);
      }
    });

    ++half_steps_;
    for (long i = 0; i < out.nodes(); ++i) {
      const double* d = out.node(i);
      for (long k = 0; k < out.node_stride(); ++k)
        if (!std::isfinite(d[k])) throw NonfiniteError(half_steps_, i, out.time);
    }
    return out;
  }

  FieldFrame step(const FieldFrame& primal) { return half_step(half_step(primal)); }

  /// Advances grid.nt full steps; observer(frame, step) sees the initial
  /// frame and every `cadence`-th step plus the last one.
  template <class Observer>
  FieldFrame run(FieldFrame f, Observer&& observer, long cadence = 1) {
    observer(static_cast<const FieldFrame&>(f), 0L);
    for (long s = 1; s <= cfg_.grid.nt; ++s) {
      f = step(f);
      if (s % cadence == 0 || s == cfg_.grid.nt) observer(static_cast<const FieldFrame&>(f), s);
    }
    return f;
  }

  FieldFrame run(FieldFrame f) {
    return run(std::move(f), [](const FieldFrame&, long) {});
  }

 private:
  // Stores the evolved cell polynomial as the new node's data. Without
  // adaptivity the node keeps order mbar. With it, the cutoff sees every
  // evolved coefficient the node can hold, so orders can grow back up to
  // min(2 mbar + 1, m_max) where the solution demands it.
  void write_node(FieldFrame& out, long node, const double* state, int mbar, std::vector<double>& retained) const {
    const int n = poly::coeff_count(mbar);
    const int q = cfg_.adapt ? std::min(n, out.side()) : mbar + 1;
    const int side = out.side();
    const int block = out.block();
    double* dst = out.node(node);
    const int nv = out.nvars;
    for (int v = 0; v < nv; ++v) {
      if (out.dim == 1) {
        const double* src = state + static_cast<long>(v) * n;
        for (int k = 0; k < q; ++k) retained[static_cast<std::size_t>(v * q + k)] = src[k];
      } else {
        const double* src = state + static_cast<long>(v) * n * n;
        for (int l = 0; l < q; ++l)
          for (int k = 0; k < q; ++k) retained[static_cast<std::size_t>(v * q * q + l * q + k)] = src[l * n + k];
      }
    }
    int mnew = mbar;
    if (cfg_.adapt) {
      const std::size_t len = static_cast<std::size_t>(nv) * (out.dim == 1 ? q : q * q);
      mnew = select_m(std::span<const double>(retained.data(), len), nv, q, out.dim, q - 1, *cfg_.adapt);
    }
    out.m[static_cast<std::size_t>(node)] = mnew;
    for (int v = 0; v < nv; ++v) {
      double* d = dst + static_cast<long>(v) * block;
      if (out.dim == 1) {
        for (int k = 0; k <= mnew; ++k) d[k] = retained[static_cast<std::size_t>(v * q + k)];
      } else {
        for (int l = 0; l <= mnew; ++l)
          for (int k = 0; k <= mnew; ++k)
            d[l * side + k] = retained[static_cast<std::size_t>(v * q * q + l * q + k)];
      }
    }
  }

  SolverConfig cfg_;
  std::vector<MediumParams> params_primal_cells_;  // cells of the primal mesh, centered on dual nodes
  std::vector<MediumParams> params_dual_cells_;
  long half_steps_ = 0;
};

}  // namespace hermite

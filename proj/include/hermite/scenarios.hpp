#pragma once

// Closed-form test problems. Each model is written once over a generic
// number type; Taylor jets then produce scaled spatial coefficients, their
// time derivatives, and the residual forcing of every governing equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermite/frame.hpp"
#include "hermite/jet.hpp"
#include "hermite/media.hpp"
#include "hermite/rhs1d.hpp"
#include "hermite/rhs2d.hpp"
#include "hermite/timestep.hpp"

namespace hermite {

namespace jets {

inline constexpr int kSpaceCap = 16;
using Time = Jet<double, 2>;
using Line = Jet<Time, kSpaceCap>;   // series in x
using Plane = Jet<Line, kSpaceCap>;  // series in y of series in x

inline Time time_rate(const Time& u) { return Time(u.get(1)); }

template <class T, int C>
Jet<T, C> time_rate(const Jet<T, C>& u) {
  Jet<T, C> r = u;
  for (int k = 0; k < u.deg; ++k) r.c[k] = time_rate(u.c[k]);
  return r;
}

/// Derivative in the outermost variable for a cell of width h.
template <class T, int C>
Jet<T, C> outer_rate(const Jet<T, C>& u, double h) {
  Jet<T, C> r;
  r.n = u.n;
  r.deg = std::max(1, u.deg - 1);
  for (int k = 0; k + 1 < u.deg; ++k) r.c[k] = u.c[k + 1] * ((k + 1) / h);
  return r;
}

/// Derivative in the x variable of a Plane.
inline Plane x_rate(const Plane& u, double h) {
  Plane r = u;
  for (int l = 0; l < u.deg; ++l) r.c[l] = outer_rate(u.c[l], h);
  return r;
}

inline double leaf(const Time& u) { return u.c[0]; }
inline double leaf_rate(const Time& u) { return u.get(1); }

}  // namespace jets

struct Scenario {
  std::string name;
  int dim = 1;
  double xl = 0.0, xr = 1.0, yb = 0.0, yt = 1.0;
  double final_time = 1.0;
  MediumParams params;
  std::optional<InterfaceModel> interface;  // delta is re-derived per grid when set
  double interface_width_cells = 2.0;
  bool has_exact = false;
  std::vector<int> forced;  // indices of forced equations
  TaylorFn taylor;          // exact solution, or initial data when has_exact is false
  TaylorFn rate_taylor;     // time derivative of the exact solution
  TaylorFn forcing;         // empty when unforced

  int nvars() const { return nvars_for(dim); }

  InterfaceModel interface_for(const Grid& g) const {
    InterfaceModel im = *interface;
    im.delta = interface_width_cells * g.h();
    return im;
  }

  MediumFn medium(const Grid& g) const {
    if (interface) {
      const InterfaceModel im = interface_for(g);
      return [im](double x, double y) { return blend_params(x, y, im); };
    }
    const MediumParams p = params;
    return [p](double, double) { return p; };
  }

  Grid grid(int nx, int ny = 0) const {
    return dim == 1 ? Grid::line(xl, xr, nx) : Grid::plane(xl, xr, yb, yt, nx, ny > 0 ? ny : nx);
  }
};

namespace detail {

template <class Model>
TaylorFn taylor_1d(Model model, bool rate) {
  return [model, rate](double x, double, double t, int side, double dx, double, double* out) {
    using namespace jets;
    const Line xv = Line::variable(Time(x), Time(dx), side);
    const Line tv(Time::variable(t, 1.0, 2));
    const auto u = model.fields(xv, tv);
    for (int v = 0; v < var1d::count; ++v)
      for (int k = 0; k < side; ++k) {
        const Time c = u[v].get(k);
        out[v * side + k] = rate ? leaf_rate(c) : leaf(c);
      }
  };
}

template <class Model>
TaylorFn taylor_2d(Model model, bool rate) {
  return [model, rate](double x, double y, double t, int side, double dx, double dy, double* out) {
    using namespace jets;
    const Plane yv = Plane::variable(Line(Time(y)), Line(Time(dy)), side);
    const Plane xv(Line::variable(Time(x), Time(dx), side));
    const Plane tv(Line(Time::variable(t, 1.0, 2)));
    const auto u = model.fields(xv, yv, tv);
    const int nn = side * side;
    for (int v = 0; v < var2d::count; ++v)
      for (int l = 0; l < side; ++l) {
        const Line row = u[v].get(l);
        for (int k = 0; k < side; ++k) {
          const Time c = row.get(k);
          out[v * nn + l * side + k] = rate ? leaf_rate(c) : leaf(c);
        }
      }
  };
}

/// Equations needing a forcing term: the model's own list when the medium is
/// the one it was built for, otherwise every equation.
inline std::vector<int> forced_for(const MediumParams& p, std::vector<int> model_list, int nvars) {
  const MediumParams r = MediumParams::mms();
  const bool same = p.mu == r.mu && p.eps == r.eps && p.eps_inf == r.eps_inf && p.a == r.a && p.theta == r.theta &&
                    p.omega0 == r.omega0 && p.omega_p == r.omega_p && p.omega_v == r.omega_v && p.gamma == r.gamma &&
                    p.gamma_v == r.gamma_v;
  if (same) return model_list;
  std::vector<int> all(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v) all[static_cast<std::size_t>(v)] = v;
  return all;
}

inline bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

template <class Model>
TaylorFn forcing_1d(Model model, MediumParams p, std::vector<int> forced) {
  return [model, p, forced](double x, double, double t, int side, double dx, double, double* out) {
    using namespace jets;
    using namespace var1d;
    const Line xv = Line::variable(Time(x), Time(dx), side + 1);
    const Line tv(Time::variable(t, 1.0, 2));
    const auto u = model.fields(xv, tv);
    const double tk = p.theta_k(), tr = p.theta_r();
    std::array<Line, count> g;
    for (int v = 0; v < count; ++v) {
      if (!contains(forced, v)) continue;
      switch (v) {
        case H:
          g[v] = p.mu * time_rate(u[H]) - outer_rate(u[E], dx);
          break;
        case E: {
          const Line d = p.eps * (p.eps_inf * u[E] + u[P] + tk * u[E] * u[E] * u[E] + tr * u[Q] * u[E]);
          g[v] = time_rate(d) - outer_rate(u[H], dx);
          break;
        }
        case P:
          g[v] = time_rate(u[P]) - u[J];
          break;
        case J:
          g[v] = time_rate(u[J]) + p.gamma * u[J] + p.omega0 * p.omega0 * u[P] - p.omega_p * p.omega_p * u[E];
          break;
        case Q:
          g[v] = time_rate(u[Q]) - u[S];
          break;
        case S:
          g[v] = time_rate(u[S]) + p.gamma_v * u[S] + p.omega_v * p.omega_v * (u[Q] - u[E] * u[E]);
          break;
      }
    }
    for (int v = 0; v < count; ++v) {
      const bool on = contains(forced, v);
      for (int k = 0; k < side; ++k) out[v * side + k] = on ? leaf(g[v].get(k)) : 0.0;
    }
  };
}

template <class Model>
TaylorFn forcing_2d(Model model, MediumParams p, std::vector<int> forced) {
  return [model, p, forced](double x, double y, double t, int side, double dx, double dy, double* out) {
    using namespace jets;
    using namespace var2d;
    const Plane yv = Plane::variable(Line(Time(y)), Line(Time(dy)), side + 1);
    const Plane xv(Line::variable(Time(x), Time(dx), side + 1));
    const Plane tv(Line(Time::variable(t, 1.0, 2)));
    const auto u = model.fields(xv, yv, tv);
    const double tk = p.theta_k(), tr = p.theta_r();
    std::array<Plane, count> g;
    auto displacement = [&](int comp) {
      const Plane& e = u[Ex + comp];
      const Plane e2 = u[Ex] * u[Ex] + u[Ey] * u[Ey];
      return p.eps * (p.eps_inf * e + u[Px + comp] + tk * e2 * e + tr * u[Q] * e);
    };
    for (int v = 0; v < count; ++v) {
      if (!contains(forced, v)) continue;
      switch (v) {
        case Hz:
          g[v] = p.mu * time_rate(u[Hz]) - outer_rate(u[Ex], dy) + x_rate(u[Ey], dx);
          break;
        case Ex:
          g[v] = time_rate(displacement(0)) - outer_rate(u[Hz], dy);
          break;
        case Ey:
          g[v] = time_rate(displacement(1)) + x_rate(u[Hz], dx);
          break;
        case Px:
        case Py:
          g[v] = time_rate(u[v]) - u[v + 2];
          break;
        case Jx:
        case Jy:
          g[v] = time_rate(u[v]) + p.gamma * u[v] + p.omega0 * p.omega0 * u[v - 2] -
                 p.omega_p * p.omega_p * u[v - 4];
          break;
        case Q:
          g[v] = time_rate(u[Q]) - u[S];
          break;
        case S:
          g[v] = time_rate(u[S]) + p.gamma_v * u[S] + p.omega_v * p.omega_v * (u[Q] - u[Ex] * u[Ex] - u[Ey] * u[Ey]);
          break;
      }
    }
    const int nn = side * side;
    for (int v = 0; v < count; ++v) {
      const bool on = contains(forced, v);
      for (int l = 0; l < side; ++l) {
        const Line row = on ? g[v].get(l) : Line();
        for (int k = 0; k < side; ++k) out[v * nn + l * side + k] = on ? leaf(row.get(k)) : 0.0;
      }
    }
  };
}

/// Shift that maps x0 into [lo, lo + period).
inline double periodic_shift(double x0, double lo, double period) {
  return -period * std::floor((x0 - lo) / period);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Models

struct StandingWave1D {
  double w = 10.0 * M_PI;
  double a = 1.0 / 3.0;
  template <class N>
  std::array<N, 6> fields(const N& x, const N& t) const {
    N sx, cx, st, ct;
    sincos(w * x, sx, cx);
    sincos(w * t, st, ct);
    const N e = -(cx * ct);
    const N de = w * (cx * st);
    const N e2 = e * e;
    return {sx * st, e, -a * (e2 * e), -3.0 * a * (e2 * de), e2, 2.0 * (e * de)};
  }
};

struct TravelingPulse1D {
  double sigma = 0.1;
  double a = 1.0 / 3.0;
  double lo = -1.0, period = 2.0;
  template <class N>
  std::array<N, 6> fields(const N& x, const N& t) const {
    const N eta = x + t + detail::periodic_shift(value(x) + value(t), lo, period);
    const double s2 = sigma * sigma;
    const N g = exp(-(eta * eta) / s2);
    const N f = -(eta * g);
    const N fp = g * (2.0 * (eta * eta) - s2) / s2;
    const N f2 = f * f;
    return {f, f, -a * (f2 * f), -3.0 * a * (f2 * fp), f2, 2.0 * (f * fp)};
  }
};

/// Right-moving wave in a linear, dispersionless medium.
struct PlaneWave1D {
  double k = 2.0 * M_PI;
  double speed = 1.0;
  double impedance = 1.0;
  template <class N>
  std::array<N, 6> fields(const N& x, const N& t) const {
    const N e = sin(k * (x - speed * t));
    return {-(1.0 / impedance) * e, e, N(0.0), N(0.0), N(0.0), N(0.0)};
  }
};

struct SechPulse1D {
  double amplitude = 1.0;
  double carrier = 12.57;
  template <class N>
  std::array<N, 6> fields(const N& x, const N&) const {
    const N e = amplitude * (sech(x) * cos(carrier * x));
    return {N(0.0), e, N(0.0), N(0.0), N(0.0), N(0.0)};
  }
};

struct StandingWave2D {
  double w = 10.0 * M_PI;
  double a = 1.0 / 3.0;
  template <class N>
  std::array<N, 9> fields(const N& x, const N& y, const N& t) const {
    const double r2 = std::sqrt(2.0);
    N sx, cx, sy, cy, st, ct;
    sincos(w * x, sx, cx);
    sincos(w * y, sy, cy);
    sincos(r2 * w * t, st, ct);
    const N ax = sx * cy, ay = -(cx * sy);
    const N ex = ax * st / r2, ey = ay * st / r2;
    const N dex = w * (ax * ct), dey = w * (ay * ct);
    const N e2 = ex * ex + ey * ey;
    const N de2 = 2.0 * (ex * dex + ey * dey);
    return {sx * sy * ct,
            ex,
            ey,
            -a * (e2 * ex),
            -a * (e2 * ey),
            -a * (de2 * ex + e2 * dex),
            -a * (de2 * ey + e2 * dey),
            e2,
            de2};
  }
};

struct TravelingPacket2D {
  double sigma = 0.1;
  double a = 1.0 / 3.0;
  double lo = -2.0, period = 4.0;
  template <class N>
  std::array<N, 9> fields(const N& x, const N& y, const N& t) const {
    const N ex_ = x + t + detail::periodic_shift(value(x) + value(t), lo, period);
    const N ey_ = y + t + detail::periodic_shift(value(y) + value(t), lo, period);
    const double s2 = sigma * sigma;
    const N s = ex_ + ey_;
    const N g = exp(-(ex_ * ex_ + ey_ * ey_) / s2);
    const N f = s * g;
    const N ft = 2.0 * g * (1.0 - s * s / s2);
    const N f2 = f * f;
    const N jx = -6.0 * a * (f2 * ft);
    return {f, f, -f, -2.0 * a * (f2 * f), 2.0 * a * (f2 * f), jx, -jx, 2.0 * f2, 4.0 * (f * ft)};
  }
};

struct SechPulse2D {
  double alpha = 2.5;
  double carrier = 12.57;
  template <class N>
  std::array<N, 9> fields(const N& x, const N& y, const N&) const {
    const N hz = sech(alpha * x) * sech(alpha * y) * cos(alpha * carrier * x) * cos(alpha * carrier * y);
    const N z(0.0);
    return {hz, z, z, z, z, z, z, z, z};
  }
};

// ---------------------------------------------------------------------------
// Scenario factories

inline Scenario scenario_mms1_1d(const MediumParams& params = MediumParams::mms()) {
  Scenario s;
  s.name = "mms1_1d";
  s.dim = 1;
  s.xl = 0.0;
  s.xr = 1.0;
  s.final_time = 1.0;
  s.params = params;
  s.has_exact = true;
  s.forced = detail::forced_for(s.params, {var1d::J, var1d::S}, var1d::count);
  StandingWave1D m;
  m.a = s.params.a;
  s.taylor = detail::taylor_1d(m, false);
  s.rate_taylor = detail::taylor_1d(m, true);
  s.forcing = detail::forcing_1d(m, s.params, s.forced);
  return s;
}

inline Scenario scenario_mms2_1d(const MediumParams& params = MediumParams::mms()) {
  Scenario s;
  s.name = "mms2_1d";
  s.dim = 1;
  s.xl = -1.0;
  s.xr = 1.0;
  s.final_time = 10.0;
  s.params = params;
  s.has_exact = true;
  s.forced = detail::forced_for(s.params, {var1d::J, var1d::S}, var1d::count);
  TravelingPulse1D m;
  m.a = s.params.a;
  s.taylor = detail::taylor_1d(m, false);
  s.rate_taylor = detail::taylor_1d(m, true);
  s.forcing = detail::forcing_1d(m, s.params, s.forced);
  return s;
}

/// Plane wave on [0, 1] in a medium without polarization or nonlinearity.
inline Scenario scenario_plane_wave_1d(int wavenumber = 1, double mu = 1.0, double eps = 1.0) {
  Scenario s;
  s.name = "plane_wave_1d";
  s.dim = 1;
  s.xl = 0.0;
  s.xr = 1.0;
  s.final_time = 50.0 * std::sqrt(mu * eps);
  s.params = MediumParams::vacuum();
  s.params.mu = mu;
  s.params.eps = eps;
  s.has_exact = true;
  PlaneWave1D m;
  m.k = 2.0 * M_PI * wavenumber;
  m.speed = 1.0 / std::sqrt(mu * eps);
  m.impedance = std::sqrt(mu / eps);
  s.taylor = detail::taylor_1d(m, false);
  s.rate_taylor = detail::taylor_1d(m, true);
  return s;
}

inline Scenario scenario_soliton_1d(double amplitude = 1.0, double half_width = 100.0) {
  Scenario s;
  s.name = "soliton_1d";
  s.dim = 1;
  s.xl = -half_width;
  s.xr = half_width;
  s.final_time = 200.0;
  s.params = MediumParams::soliton();
  SechPulse1D m;
  m.amplitude = amplitude;
  s.taylor = detail::taylor_1d(m, false);
  return s;
}

inline Scenario scenario_mms1_2d(const MediumParams& params = MediumParams::mms()) {
  Scenario s;
  s.name = "mms1_2d";
  s.dim = 2;
  s.xl = s.yb = 0.0;
  s.xr = s.yt = 1.0;
  s.final_time = 0.5;
  s.params = params;
  s.has_exact = true;
  s.forced = detail::forced_for(s.params, {var2d::Jx, var2d::Jy, var2d::S}, var2d::count);
  StandingWave2D m;
  m.a = s.params.a;
  s.taylor = detail::taylor_2d(m, false);
  s.rate_taylor = detail::taylor_2d(m, true);
  s.forcing = detail::forcing_2d(m, s.params, s.forced);
  return s;
}

inline Scenario scenario_mms2_2d(const MediumParams& params = MediumParams::mms()) {
  Scenario s;
  s.name = "mms2_2d";
  s.dim = 2;
  s.xl = s.yb = -2.0;
  s.xr = s.yt = 2.0;
  s.final_time = 0.5;
  s.params = params;
  s.has_exact = true;
  s.forced = detail::forced_for(s.params, {var2d::Ex, var2d::Ey, var2d::Jx, var2d::Jy, var2d::S}, var2d::count);
  TravelingPacket2D m;
  m.a = s.params.a;
  s.taylor = detail::taylor_2d(m, false);
  s.rate_taylor = detail::taylor_2d(m, true);
  s.forcing = detail::forcing_2d(m, s.params, s.forced);
  return s;
}

/// Glass with a circular air inclusion, excited by a localized Hz pulse.
inline Scenario scenario_airhole_2d(double half_width = 20.0, double hole_distance = 5.0) {
  Scenario s;
  s.name = "airhole_2d";
  s.dim = 2;
  s.xl = s.yb = -half_width;
  s.xr = s.yt = half_width;
  s.final_time = 30.0;
  MediumParams glass = MediumParams::soliton();
  glass.gamma = glass.gamma_v = 0.0;
  s.params = glass;
  InterfaceModel im;
  im.center = {hole_distance * std::cos(M_PI / 4.0), hole_distance * std::sin(M_PI / 4.0)};
  im.r_gamma = 0.5;
  im.outside = glass;
  im.inside = InterfaceModel::air();
  im.inside.gamma = im.inside.gamma_v = 0.0;
  s.interface = im;
  s.taylor = detail::taylor_2d(SechPulse2D{}, false);
  return s;
}

inline Scenario scenario_by_name(const std::string& name) {
  if (name == "mms1_1d") return scenario_mms1_1d();
  if (name == "mms2_1d") return scenario_mms2_1d();
  if (name == "plane_wave_1d") return scenario_plane_wave_1d();
  if (name == "soliton_1d") return scenario_soliton_1d();
  if (name == "mms1_2d") return scenario_mms1_2d();
  if (name == "mms2_2d") return scenario_mms2_2d();
  if (name == "airhole_2d") return scenario_airhole_2d();
  throw ConfigError({"unknown scenario '" + name + "'"});
}

}  // namespace hermite

#pragma once

// Material parameters, the constitutive matrix multiplying the electric
// field rates, its definiteness test, and the smoothed air/glass interface.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermite/errors.hpp"

namespace hermite {

struct MediumParams {
  double mu = 1.0;
  double eps = 1.0;
  double eps_inf = 1.0;
  double a = 0.0;
  double theta = 0.0;
  double omega0 = 0.0;
  double omega_p = 0.0;
  double omega_v = 0.0;
  double gamma = 0.0;
  double gamma_v = 0.0;

  double theta_r() const { return a * theta; }
  double theta_k() const { return a - theta_r(); }

  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (!(mu > 0.0)) v.push_back("mu must be positive");
    if (!(eps > 0.0)) v.push_back("eps must be positive");
    if (!(eps_inf > 0.0)) v.push_back("eps_inf must be positive");
    if (!(a >= 0.0)) v.push_back("a must be nonnegative");
    if (!(theta >= 0.0 && theta <= 1.0)) v.push_back("theta must lie in [0,1]");
    if (!(gamma >= 0.0)) v.push_back("gamma must be nonnegative");
    if (!(gamma_v >= 0.0)) v.push_back("gamma_v must be nonnegative");
    for (double w : {omega0, omega_p, omega_v})
      if (!std::isfinite(w)) v.push_back("frequencies must be finite");
    return v;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(std::move(v));
  }

  /// Manufactured-solution medium: all ones except a = 1/3, theta = 1/2, damping 1/20.
  static MediumParams mms() {
    MediumParams p;
    p.mu = p.eps = p.eps_inf = 1.0;
    p.a = 1.0 / 3.0;
    p.theta = 0.5;
    p.omega0 = p.omega_p = p.omega_v = 1.0;
    p.gamma = p.gamma_v = 1.0 / 20.0;
    return p;
  }

  /// Silica-like glass used for the soliton and airhole runs.
  static MediumParams soliton() {
    MediumParams p;
    p.mu = p.eps = 1.0;
    p.eps_inf = 2.25;
    p.a = 0.07;
    p.theta = 0.3;
    p.omega0 = 5.84;
    p.omega_p = 5.84 * std::sqrt(5.25 - 2.25);
    p.omega_v = 1.28;
    p.gamma = 1.1685e-5;
    p.gamma_v = 29.2 / 32.0;
    return p;
  }

  static MediumParams vacuum() { return MediumParams{}; }
};

inline double matrix_m_1d(double e0, double q0, const MediumParams& p) {
  return p.eps_inf + 3.0 * p.theta_k() * e0 * e0 + p.theta_r() * q0;
}

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat2 matrix_m_2d(double ex0, double ey0, double q0, const MediumParams& p) {
  const double tk = p.theta_k();
  const double base = p.eps_inf + p.theta_r() * q0;
  const double fx = ex0 * ex0, fy = ey0 * ey0;
  const double off = 2.0 * tk * ex0 * ey0;
  return {{{base + tk * (3.0 * fx + fy), off}, {off, base + tk * (fx + 3.0 * fy)}}};
}

inline Mat3 matrix_m_3d(double ex0, double ey0, double ez0, double q0, const MediumParams& p) {
  const double tk = p.theta_k();
  const double base = p.eps_inf + p.theta_r() * q0;
  const double fx = ex0 * ex0, fy = ey0 * ey0, fz = ez0 * ez0;
  const double xy = 2.0 * tk * ex0 * ey0, xz = 2.0 * tk * ex0 * ez0, yz = 2.0 * tk * ey0 * ez0;
  return {{{base + tk * (3.0 * fx + fy + fz), xy, xz},
           {xy, base + tk * (fx + 3.0 * fy + fz), yz},
           {xz, yz, base + tk * (fx + fy + 3.0 * fz)}}};
}

struct Solvability {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
};

inline Solvability check_solvability(double m) { return {m > 0.0, m}; }

inline Solvability check_solvability(const Mat2& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double half_tr = 0.5 * (m[0][0] + m[1][1]);
  const double d = 0.5 * (m[0][0] - m[1][1]);
  const double lmin = half_tr - std::sqrt(d * d + m[0][1] * m[1][0]);
  return {m[0][0] > 0.0 && det > 0.0, lmin};
}

namespace detail {
// Eigenvalues of a symmetric 3x3 matrix by the trigonometric method.
inline double min_eigenvalue_sym3(const Mat3& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  if (p1 == 0.0) return std::min({a[0][0], a[1][1], a[2][2]});
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Mat3 b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}
}  // namespace detail

inline double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Solvability check_solvability(const Mat3& m) {
  const double m1 = m[0][0];
  const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double m3 = det3(m);
  return {m1 > 0.0 && m2 > 0.0 && m3 > 0.0, detail::min_eigenvalue_sym3(m)};
}

// ---------------------------------------------------------------------------
// Diffusive interface

struct Point2 {
  double x = 0.0, y = 0.0;
};

struct InterfaceModel {
  Point2 center;
  double r_gamma = 0.5;
  double delta = 0.1;
  MediumParams inside = air();
  MediumParams outside = MediumParams::soliton();

  static MediumParams air() {
    MediumParams p = MediumParams::soliton();
    p.eps_inf = 1.0;
    p.a = 0.0;
    p.omega0 = p.omega_p = p.omega_v = 0.0;
    return p;
  }

  void validate() const {
    std::vector<std::string> v;
    if (!(r_gamma > 0.0)) v.push_back("interface radius must be positive");
    if (!(delta > 0.0)) v.push_back("interface width must be positive");
    if (!v.empty()) throw ConfigError(std::move(v));
  }
};

/// 0 in the inclusion, 1 outside, cubic C1 blend across a band of width delta.
inline double interface_weight(double r, const InterfaceModel& im) {
  const double s = 0.5 - (r - im.r_gamma) / im.delta;  // 1 at the inner edge, 0 at the outer edge
  if (s >= 1.0) return 0.0;
  if (s <= 0.0) return 1.0;
  return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

inline MediumParams blend_params(double x, double y, const InterfaceModel& im) {
  const double w = interface_weight(std::hypot(x - im.center.x, y - im.center.y), im);
  const MediumParams& in = im.inside;
  const MediumParams& out = im.outside;
  auto lerp = [w](double u, double v) { return u + (v - u) * w; };
  MediumParams p = out;
  p.a = lerp(in.a, out.a);
  p.omega0 = lerp(in.omega0, out.omega0);
  p.omega_p = lerp(in.omega_p, out.omega_p);
  p.omega_v = lerp(in.omega_v, out.omega_v);
  p.eps_inf = lerp(in.eps_inf, out.eps_inf);
  return p;
}

// ---------------------------------------------------------------------------
// Energy density

enum class SigmaTermForm {
  vibrational,  // a eps theta / (4 omega_v^2) S^2
  as_printed,   // a eps theta / (4 omega_p^2) S^2
};

struct EnergyReport {
  double magnetic = 0.0;
  double electric = 0.0;
  double current = 0.0;       // J^2 term
  double polarization = 0.0;  // P^2 term
  double sigma = 0.0;         // S^2 term
  double raman_cross = 0.0;   // Q |E|^2
  double kerr = 0.0;          // |E|^4
  double raman_q = 0.0;       // Q^2
  double total = 0.0;

  void sum() { total = magnetic + electric + current + polarization + sigma + raman_cross + kerr + raman_q; }

  EnergyReport& operator+=(const EnergyReport& o) {
    magnetic += o.magnetic;
    electric += o.electric;
    current += o.current;
    polarization += o.polarization;
    sigma += o.sigma;
    raman_cross += o.raman_cross;
    kerr += o.kerr;
    raman_q += o.raman_q;
    return *this;
  }

  EnergyReport& operator*=(double s) {
    magnetic *= s;
    electric *= s;
    current *= s;
    polarization *= s;
    sigma *= s;
    raman_cross *= s;
    kerr *= s;
    raman_q *= s;
    return *this;
  }
};

/// Pointwise energy density. `h2` is |H|^2, `e2` is |E|^2, `j2`, `p2` the
/// squared Lorentz variables summed over components.
inline EnergyReport energy_density(double h2, double e2, double j2, double p2, double q, double s,
                                   const MediumParams& p, SigmaTermForm form = SigmaTermForm::vibrational) {
  EnergyReport r;
  r.magnetic = 0.5 * p.mu * h2;
  r.electric = 0.5 * p.eps * p.eps_inf * e2;
  if (p.omega_p != 0.0) {
    const double wp2 = p.omega_p * p.omega_p;
    r.current = p.eps / (2.0 * wp2) * j2;
    r.polarization = p.eps * p.omega0 * p.omega0 / (2.0 * wp2) * p2;
  }
  const double aet = p.a * p.eps * p.theta;
  const double sigma_freq = form == SigmaTermForm::vibrational ? p.omega_v : p.omega_p;
  if (sigma_freq != 0.0) r.sigma = aet / (4.0 * sigma_freq * sigma_freq) * s * s;
  r.raman_cross = 0.5 * aet * q * e2;
  r.kerr = 0.75 * p.a * p.eps * (1.0 - p.theta) * e2 * e2;
  r.raman_q = 0.25 * aet * q * q;
  r.sum();
  return r;
}

}  // namespace hermite

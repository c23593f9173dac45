#pragma once

// Coefficient ODE right-hand side on a 2D cell (TM polarization).
//
// State layout: nine blocks of n*n scaled coefficients (n = 2m+2) in the
// order Hz, Ex, Ey, Px, Py, Jx, Jy, Q, S; inside a block entry (k, l) sits
// at l*n + k. Forcing residuals use the natural form of each equation:
//   mu dHz/dt - dEx/dy + dEy/dx = g_Hz
//   dDx/dt - dHz/dy = g_Ex,   dDy/dt + dHz/dx = g_Ey
//   D = eps (eps_inf E + P + theta_K |E|^2 E + theta_R Q E)
//   dP/dt - J = g_P,  dJ/dt + gamma J + w0^2 P - wp^2 E = g_J
//   dQ/dt - S = g_Q,  dS/dt + gamma_v S + wv^2 (Q - |E|^2) = g_S

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "hermite/errors.hpp"
#include "hermite/media.hpp"
#include "hermite/polyalg.hpp"

namespace hermite {

namespace var2d {
enum : int { Hz = 0, Ex, Ey, Px, Py, Jx, Jy, Q, S, count };
inline constexpr const char* names[count] = {"Hz", "Ex", "Ey", "Px", "Py", "Jx", "Jy", "Q", "S"};
}  // namespace var2d

namespace kernel {

inline constexpr int kMaxBlock2D = poly::kMaxCoeffs * poly::kMaxCoeffs;

inline void rhs_2d(const double* c, double* rate, int n, double dx, double dy, const MediumParams& p,
                   const double* forcing) {
  using namespace var2d;
  const int nn = n * n;
  auto blk = [&](int v) { return c + v * nn; };
  auto rblk = [&](int v) { return rate + v * nn; };
  auto g = [forcing, nn](int v, int i) { return forcing ? forcing[v * nn + i] : 0.0; };

  const double* hz = blk(Hz);
  const double* ex = blk(Ex);
  const double* ey = blk(Ey);
  const double* q = blk(Q);
  const double* s = blk(S);

  double* hzr = rblk(Hz);
  const double inv_mu_dx = 1.0 / (p.mu * dx), inv_mu_dy = 1.0 / (p.mu * dy);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      double v = g(Hz, l * n + k) / p.mu;
      if (l + 1 < n) v += (l + 1) * ex[(l + 1) * n + k] * inv_mu_dy;
      if (k + 1 < n) v -= (k + 1) * ey[l * n + k + 1] * inv_mu_dx;
      hzr[l * n + k] = v;
    }
  }

  std::array<double, kMaxBlock2D> phi_tot{}, tmp{};
  poly::trunc_product_2d(std::span<const double>(ex, nn), std::span<const double>(ex, nn), n, phi_tot);
  poly::trunc_product_2d(std::span<const double>(ey, nn), std::span<const double>(ey, nn), n, tmp);
  for (int i = 0; i < nn; ++i) phi_tot[i] += tmp[i];

  const double w0sq = p.omega0 * p.omega0, wpsq = p.omega_p * p.omega_p, wvsq = p.omega_v * p.omega_v;
  for (int comp = 0; comp < 2; ++comp) {
    const double* e = blk(Ex + comp);
    const double* pp = blk(Px + comp);
    const double* j = blk(Jx + comp);
    double* pr = rblk(Px + comp);
    double* jr = rblk(Jx + comp);
    for (int i = 0; i < nn; ++i) {
      pr[i] = j[i] + g(Px + comp, i);
      jr[i] = -p.gamma * j[i] - w0sq * pp[i] + wpsq * e[i] + g(Jx + comp, i);
    }
  }
  double* qr = rblk(Q);
  double* sr = rblk(S);
  for (int i = 0; i < nn; ++i) {
    qr[i] = s[i] + g(Q, i);
    sr[i] = wvsq * (phi_tot[i] - q[i]) - p.gamma_v * s[i] + g(S, i);
  }

  const double tk = p.theta_k(), tr = p.theta_r();
  const double ex0 = ex[0], ey0 = ey[0];
  const Mat2 m = matrix_m_2d(ex0, ey0, q[0], p);
  const Solvability sv = check_solvability(m);
  if (!sv.positive_definite) {
    SolvabilityError::Snapshot snap;
    snap.e0x = ex0;
    snap.e0y = ey0;
    snap.q0 = q[0];
    snap.m_value = sv.min_eigenvalue;
    throw SolvabilityError(snap);
  }
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double inv_det = 1.0 / det;

  std::array<double, kMaxBlock2D> sigx{}, sigy{}, dphi{};
  poly::trunc_product_2d(std::span<const double>(ex, nn), std::span<const double>(qr, nn), n, sigx);
  poly::trunc_product_2d(std::span<const double>(ey, nn), std::span<const double>(qr, nn), n, sigy);

  double* exr = rblk(Ex);
  double* eyr = rblk(Ey);
  for (int i = 0; i < nn; ++i) exr[i] = eyr[i] = 0.0;
  const double* pxr = rblk(Px);
  const double* pyr = rblk(Py);
  const double inv_eps_dx = 1.0 / (p.eps * dx), inv_eps_dy = 1.0 / (p.eps * dy);

  // Lower-index sums run over the whole (i <= k, j <= l) box: entries of
  // the rate tensors not yet reached in the sweep are still zero, so the
  // current index drops out of every sum automatically.
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      const int idx = l * n + k;
      double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0, cx = 0.0, cy = 0.0, pdphi = 0.0;
      for (int jj = 0; jj <= l; ++jj) {
        const int row = jj * n;
        const int crow = (l - jj) * n;
        for (int ii = 0; ii <= k; ++ii) {
          const int a = row + ii;
          const int b = crow + k - ii;
          const double dex = exr[a], dey = eyr[a];
          ax += dex * phi_tot[b];
          ay += dey * phi_tot[b];
          bx += dphi[a] * ex[b];
          by += dphi[a] * ey[b];
          cx += dex * q[b];
          cy += dey * q[b];
          pdphi += dex * ex[b] + dey * ey[b];
        }
      }
      pdphi *= 2.0;
      bx += ex0 * pdphi;
      by += ey0 * pdphi;

      double rx = g(Ex, idx) / p.eps - pxr[idx] - tr * sigx[idx] - tk * (ax + bx) - tr * cx;
      double ry = g(Ey, idx) / p.eps - pyr[idx] - tr * sigy[idx] - tk * (ay + by) - tr * cy;
      if (l + 1 < n) rx += (l + 1) * hz[(l + 1) * n + k] * inv_eps_dy;
      if (k + 1 < n) ry -= (k + 1) * hz[l * n + k + 1] * inv_eps_dx;

      const double vx = (m[1][1] * rx - m[0][1] * ry) * inv_det;
      const double vy = (m[0][0] * ry - m[1][0] * rx) * inv_det;
      exr[idx] = vx;
      eyr[idx] = vy;
      dphi[idx] = pdphi + 2.0 * (ex0 * vx + ey0 * vy);
    }
  }
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// Checked per-operation interface

struct CellCoeffs2D {
  std::array<poly::CoeffTensor2D, var2d::count> vars;
  double dx = 1.0, dy = 1.0;

  CellCoeffs2D() = default;
  CellCoeffs2D(int m, double dx_, double dy_) : dx(dx_), dy(dy_) {
    for (auto& v : vars) v = poly::CoeffTensor2D(m);
  }

  int m() const { return vars[0].m; }
  poly::CoeffTensor2D& operator[](int v) { return vars[v]; }
  const poly::CoeffTensor2D& operator[](int v) const { return vars[v]; }

  void validate() const {
    const int mm = m();
    const auto expect = static_cast<std::size_t>(poly::coeff_count(mm) * poly::coeff_count(mm));
    for (const auto& t : vars)
      if (t.m != mm || t.coeffs.size() != expect) throw std::invalid_argument("CellCoeffs2D: tensors must share m");
    if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("CellCoeffs2D: spacing must be positive");
  }

  std::vector<double> pack() const {
    std::vector<double> v;
    for (const auto& t : vars) v.insert(v.end(), t.coeffs.begin(), t.coeffs.end());
    return v;
  }

  static CellCoeffs2D unpack(std::span<const double> v, int m, double dx, double dy) {
    CellCoeffs2D c(m, dx, dy);
    const std::size_t nn = c.vars[0].coeffs.size();
    if (v.size() != nn * var2d::count) throw std::invalid_argument("unpack: bad length");
    for (int i = 0; i < var2d::count; ++i)
      std::copy(v.begin() + static_cast<long>(i * nn), v.begin() + static_cast<long>((i + 1) * nn),
                c.vars[i].coeffs.begin());
    return c;
  }
};

using CellRates2D = CellCoeffs2D;

inline poly::CoeffTensor2D rhs_hz_2d(const CellCoeffs2D& c, const MediumParams& p) {
  c.validate();
  const int n = poly::coeff_count(c.m());
  poly::CoeffTensor2D r(c.m());
  const auto& ex = c[var2d::Ex];
  const auto& ey = c[var2d::Ey];
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      double v = 0.0;
      if (l + 1 < n) v += (l + 1) * ex.at(k, l + 1) / (p.mu * c.dy);
      if (k + 1 < n) v -= (k + 1) * ey.at(k + 1, l) / (p.mu * c.dx);
      r.at(k, l) = v;
    }
  return r;
}

/// Rates of Px, Py, Jx, Jy, Q, S; the field blocks are left zero.
inline CellRates2D rhs_linear_2d(const CellCoeffs2D& c, const MediumParams& p) {
  using namespace var2d;
  c.validate();
  CellRates2D r(c.m(), c.dx, c.dy);
  const auto phi_x = poly::trunc_product_2d(c[Ex], c[Ex]);
  const auto phi_y = poly::trunc_product_2d(c[Ey], c[Ey]);
  const std::size_t nn = phi_x.coeffs.size();
  for (std::size_t i = 0; i < nn; ++i) {
    for (int comp = 0; comp < 2; ++comp) {
      r[Px + comp].coeffs[i] = c[Jx + comp].coeffs[i];
      r[Jx + comp].coeffs[i] = -p.gamma * c[Jx + comp].coeffs[i] - p.omega0 * p.omega0 * c[Px + comp].coeffs[i] +
                               p.omega_p * p.omega_p * c[Ex + comp].coeffs[i];
    }
    r[Q].coeffs[i] = c[S].coeffs[i];
    r[S].coeffs[i] = p.omega_v * p.omega_v * (phi_x.coeffs[i] + phi_y.coeffs[i] - c[Q].coeffs[i]) -
                     p.gamma_v * c[S].coeffs[i];
  }
  return r;
}

struct EfieldRates2D {
  poly::CoeffTensor2D ex, ey;
};

inline EfieldRates2D rhs_efield_2d(const CellCoeffs2D& c, const MediumParams& p, const poly::CoeffTensor2D& q_rates) {
  c.validate();
  if (q_rates.m != c.m()) throw std::invalid_argument("rhs_efield_2d: mismatched orders");
  auto packed = c.pack();
  const std::size_t nn = q_rates.coeffs.size();
  std::vector<double> forcing(packed.size(), 0.0), rate(packed.size(), 0.0);
  for (std::size_t i = 0; i < nn; ++i) forcing[var2d::Q * nn + i] = q_rates.coeffs[i] - c[var2d::S].coeffs[i];
  kernel::rhs_2d(packed.data(), rate.data(), poly::coeff_count(c.m()), c.dx, c.dy, p, forcing.data());
  EfieldRates2D out{poly::CoeffTensor2D(c.m()), poly::CoeffTensor2D(c.m())};
  std::copy(rate.begin() + static_cast<long>(var2d::Ex * nn), rate.begin() + static_cast<long>((var2d::Ex + 1) * nn),
            out.ex.coeffs.begin());
  std::copy(rate.begin() + static_cast<long>(var2d::Ey * nn), rate.begin() + static_cast<long>((var2d::Ey + 1) * nn),
            out.ey.coeffs.begin());
  return out;
}

inline CellRates2D rhs_full_2d(const CellCoeffs2D& c, const MediumParams& p, std::span<const double> forcing = {}) {
  c.validate();
  auto packed = c.pack();
  if (!forcing.empty() && forcing.size() != packed.size())
    throw std::invalid_argument("rhs_full_2d: forcing block has wrong length");
  std::vector<double> rate(packed.size(), 0.0);
  kernel::rhs_2d(packed.data(), rate.data(), poly::coeff_count(c.m()), c.dx, c.dy, p,
                 forcing.empty() ? nullptr : forcing.data());
  return CellRates2D::unpack(rate, c.m(), c.dx, c.dy);
}

}  // namespace hermite

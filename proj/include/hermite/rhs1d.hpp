#pragma once

// Coefficient ODE right-hand side on a 1D cell.
//
// State layout: six blocks of n = 2m+2 scaled coefficients in the order
// H, E, P, J, Q, S. A forcing block in the same layout holds the residual of
// each governing equation in its natural form:
//   mu dH/dt - dE/dx = g_H
//   dD/dt - dH/dx   = g_E,   D = eps (eps_inf E + P + theta_K E^3 + theta_R Q E)
//   dP/dt - J = g_P,  dJ/dt + gamma J + w0^2 P - wp^2 E = g_J
//   dQ/dt - S = g_Q,  dS/dt + gamma_v S + wv^2 (Q - E^2) = g_S

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include "hermite/errors.hpp"
#include "hermite/media.hpp"
#include "hermite/polyalg.hpp"

namespace hermite {

namespace var1d {
enum : int { H = 0, E, P, J, Q, S, count };
inline constexpr const char* names[count] = {"H", "E", "P", "J", "Q", "S"};
}  // namespace var1d

namespace kernel {

/// Full rate evaluation. `forcing` may be null.
inline void rhs_1d(const double* c, double* rate, int n, double dx, const MediumParams& p, const double* forcing) {
  using namespace var1d;
  const double* h = c + H * n;
  const double* e = c + E * n;
  const double* pp = c + P * n;
  const double* j = c + J * n;
  const double* q = c + Q * n;
  const double* s = c + S * n;
  double* hr = rate + H * n;
  double* er = rate + E * n;
  double* pr = rate + P * n;
  double* jr = rate + J * n;
  double* qr = rate + Q * n;
  double* sr = rate + S * n;
  auto g = [forcing, n](int v, int k) { return forcing ? forcing[v * n + k] : 0.0; };

  const double inv_mu_dx = 1.0 / (p.mu * dx);
  for (int k = 0; k + 1 < n; ++k) hr[k] = (k + 1) * e[k + 1] * inv_mu_dx + g(H, k) / p.mu;
  hr[n - 1] = g(H, n - 1) / p.mu;

  std::array<double, poly::kMaxCoeffs> phi{}, sigma{}, dphi{};
  poly::trunc_product(std::span<const double>(e, n), std::span<const double>(e, n), n, phi);

  const double w0sq = p.omega0 * p.omega0, wpsq = p.omega_p * p.omega_p, wvsq = p.omega_v * p.omega_v;
  for (int k = 0; k < n; ++k) {
    pr[k] = j[k] + g(P, k);
    jr[k] = -p.gamma * j[k] - w0sq * pp[k] + wpsq * e[k] + g(J, k);
    qr[k] = s[k] + g(Q, k);
    sr[k] = -p.gamma_v * s[k] - wvsq * q[k] + wvsq * phi[k] + g(S, k);
  }

  const double tk = p.theta_k(), tr = p.theta_r();
  poly::trunc_product(std::span<const double>(e, n), std::span<const double>(qr, n), n, sigma);

  const double e0 = e[0];
  const double m = matrix_m_1d(e0, q[0], p);
  if (!(m > 0.0)) {
    SolvabilityError::Snapshot snap;
    snap.e0x = e0;
    snap.q0 = q[0];
    snap.m_value = m;
    throw SolvabilityError(snap);
  }
  const double inv_m = 1.0 / m;
  const double inv_eps_dx = 1.0 / (p.eps * dx);
  for (int k = 0; k < n; ++k) {
    double b = (k + 1 < n ? (k + 1) * h[k + 1] * inv_eps_dx : 0.0) + g(E, k) / p.eps - pr[k] - tr * sigma[k];
    double kerr = 0.0, raman = 0.0, partial_dphi = 0.0;
    for (int i = 0; i < k; ++i) {
      kerr += er[i] * phi[k - i] + dphi[i] * e[k - i];
      raman += er[i] * q[k - i];
      partial_dphi += er[i] * e[k - i];
    }
    partial_dphi *= 2.0;
    kerr += partial_dphi * e0;
    b -= tk * kerr + tr * raman;
    er[k] = b * inv_m;
    dphi[k] = partial_dphi + 2.0 * e0 * er[k];
  }
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// Checked per-operation interface

struct CellCoeffs1D {
  poly::CoeffTensor1D H, E, P, J, Q, S;
  double dx = 1.0;

  CellCoeffs1D() = default;
  CellCoeffs1D(int m, double dx_) : H(m), E(m), P(m), J(m), Q(m), S(m), dx(dx_) {}

  int m() const { return E.m; }

  void validate() const {
    const int mm = E.m;
    for (const auto* t : {&H, &E, &P, &J, &Q, &S})
      if (t->m != mm || t->coeffs.size() != static_cast<std::size_t>(poly::coeff_count(mm)))
        throw std::invalid_argument("CellCoeffs1D: tensors must share m");
    if (!(dx > 0.0)) throw std::invalid_argument("CellCoeffs1D: dx must be positive");
  }

  std::vector<double> pack() const {
    std::vector<double> v;
    for (const auto* t : {&H, &E, &P, &J, &Q, &S}) v.insert(v.end(), t->coeffs.begin(), t->coeffs.end());
    return v;
  }

  static CellCoeffs1D unpack(std::span<const double> v, int m, double dx) {
    CellCoeffs1D c(m, dx);
    const int n = poly::coeff_count(m);
    if (v.size() != static_cast<std::size_t>(var1d::count * n)) throw std::invalid_argument("unpack: bad length");
    poly::CoeffTensor1D* ts[] = {&c.H, &c.E, &c.P, &c.J, &c.Q, &c.S};
    for (int i = 0; i < var1d::count; ++i)
      std::copy(v.begin() + i * n, v.begin() + (i + 1) * n, ts[i]->coeffs.begin());
    return c;
  }
};

using CellRates1D = CellCoeffs1D;

struct PhiSigma1D {
  poly::CoeffTensor1D phi, sigma;
};

inline PhiSigma1D phi_sigma(const poly::CoeffTensor1D& e, const poly::CoeffTensor1D& s) {
  return {poly::trunc_product_1d(e, e), poly::trunc_product_1d(e, s)};
}

/// Rates of H, P, J, Q, S (the E block is left zero).
inline CellRates1D rhs_linear_1d(const CellCoeffs1D& c, const MediumParams& p) {
  c.validate();
  const int n = poly::coeff_count(c.m());
  CellRates1D r(c.m(), c.dx);
  for (int k = 0; k < n; ++k) r.H[k] = k + 1 < n ? (k + 1) * c.E[k + 1] / (p.mu * c.dx) : 0.0;
  const auto phi = poly::trunc_product_1d(c.E, c.E);
  for (int k = 0; k < n; ++k) {
    r.P[k] = c.J[k];
    r.J[k] = -p.gamma * c.J[k] - p.omega0 * p.omega0 * c.P[k] + p.omega_p * p.omega_p * c.E[k];
    r.Q[k] = c.S[k];
    r.S[k] = -p.gamma_v * c.S[k] - p.omega_v * p.omega_v * c.Q[k] + p.omega_v * p.omega_v * phi[k];
  }
  return r;
}

/// Electric coefficient rates given the Q rates (equal to S when unforced).
inline poly::CoeffTensor1D rhs_efield_1d(const CellCoeffs1D& c, const MediumParams& p,
                                         const poly::CoeffTensor1D& q_rates) {
  c.validate();
  if (q_rates.m != c.m()) throw std::invalid_argument("rhs_efield_1d: mismatched orders");
  auto packed = c.pack();
  std::vector<double> rate(packed.size(), 0.0);
  const int n = poly::coeff_count(c.m());
  // Feed the given Q rates through the forcing slot so sigma uses them.
  std::vector<double> forcing(packed.size(), 0.0);
  for (int k = 0; k < n; ++k) forcing[var1d::Q * n + k] = q_rates[k] - c.S[k];
  kernel::rhs_1d(packed.data(), rate.data(), n, c.dx, p, forcing.data());
  poly::CoeffTensor1D out(c.m());
  std::copy(rate.begin() + var1d::E * n, rate.begin() + (var1d::E + 1) * n, out.coeffs.begin());
  return out;
}

/// `forcing`, when non-empty, is a packed residual block (see file header).
inline CellRates1D rhs_full_1d(const CellCoeffs1D& c, const MediumParams& p, std::span<const double> forcing = {}) {
  c.validate();
  auto packed = c.pack();
  if (!forcing.empty() && forcing.size() != packed.size())
    throw std::invalid_argument("rhs_full_1d: forcing block has wrong length");
  std::vector<double> rate(packed.size(), 0.0);
  kernel::rhs_1d(packed.data(), rate.data(), poly::coeff_count(c.m()), c.dx, p,
                 forcing.empty() ? nullptr : forcing.data());
  return CellRates1D::unpack(rate, c.m(), c.dx);
}

}  // namespace hermite

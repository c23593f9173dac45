#pragma once

// Electromagnetic energy of a frame, integrated over the cellwise Hermite
// interpolants with Gauss-Legendre quadrature.

#include <cmath>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "hermite/frame.hpp"
#include "hermite/media.hpp"
#include "hermite/polyalg.hpp"
#include "hermite/rhs1d.hpp"
#include "hermite/rhs2d.hpp"
#include "hermite/timestep.hpp"

namespace hermite {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

inline GaussRule gauss_legendre(int q) {
  GaussRule r;
  // Nonnegative zeros in ascending order, including 0 when q is odd.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(q);
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it)
    if (*it != 0.0) r.nodes.push_back(-*it);
  r.nodes.insert(r.nodes.end(), zeros.begin(), zeros.end());
  for (double x : r.nodes) {
    const double dp = boost::math::legendre_p_prime(q, x);
    r.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

/// Compensated (Neumaier) accumulator.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct FrameEnergy {
  EnergyReport report;
  // Points where omega_p = 0 but P or J is nonzero; those terms were dropped.
  long lorentz_terms_dropped = 0;
};

/// Quadrature points per direction: exact for the quartic Kerr term of a
/// degree 2m+1 interpolant.
inline int energy_quadrature_points(int m_max) { return 4 * m_max + 3; }

inline FrameEnergy energy(const FieldFrame& f, const Grid& g, const MediumFn& medium,
                          SigmaTermForm form = SigmaTermForm::vibrational) {
  const int q = energy_quadrature_points(f.m_max);
  const GaussRule rule = gauss_legendre(q);
  const int nv = f.nvars;
  const Mesh centers = other(f.mesh);
  const double dx = g.dx(), dy = g.dy();
  std::array<CompensatedSum, 8> acc;
  FrameEnergy out;
  const int nmax = poly::coeff_count(f.m_max);
  std::vector<double> coeffs(static_cast<std::size_t>(nv) * nmax * (g.dim == 2 ? nmax : 1));
  std::vector<double> scratch(4 * static_cast<std::size_t>(f.side() * f.side()));
  std::vector<double> vals(static_cast<std::size_t>(nv));

  auto accumulate = [&](const EnergyReport& e, double w) {
    const double parts[8] = {e.magnetic, e.electric, e.current, e.polarization, e.sigma, e.raman_cross, e.kerr, e.raman_q};
    for (int i = 0; i < 8; ++i) acc[static_cast<std::size_t>(i)].add(w * parts[i]);
  };

  for (long c = 0; c < g.nodes(); ++c) {
    const auto vtx = cell_vertices(g, f.mesh, c);
    const int mbar = cell_order(f, vtx);
    const int n = poly::coeff_count(mbar);
    interpolate_cell(f, vtx, mbar, coeffs.data(), scratch.data());
    const auto center = node_position(g, centers, c);
    if (g.dim == 1) {
      for (int i = 0; i < q; ++i) {
        const double xi = 0.5 * rule.nodes[static_cast<std::size_t>(i)];
        for (int v = 0; v < nv; ++v)
          vals[static_cast<std::size_t>(v)] =
              poly::eval(std::span<const double>(coeffs.data() + static_cast<long>(v) * n, static_cast<std::size_t>(n)), xi);
        const MediumParams p = medium(center[0] + xi * dx, 0.0);
        using namespace var1d;
        const double pp = vals[P], jj = vals[J];
        if (p.omega_p == 0.0 && (pp != 0.0 || jj != 0.0)) ++out.lorentz_terms_dropped;
        const double e = vals[E];
        accumulate(energy_density(vals[H] * vals[H], e * e, jj * jj, pp * pp, vals[Q], vals[S], p, form),
                   0.5 * rule.weights[static_cast<std::size_t>(i)] * dx);
      }
    } else {
      for (int jq = 0; jq < q; ++jq) {
        const double eta = 0.5 * rule.nodes[static_cast<std::size_t>(jq)];
        for (int iq = 0; iq < q; ++iq) {
          const double xi = 0.5 * rule.nodes[static_cast<std::size_t>(iq)];
          for (int v = 0; v < nv; ++v)
            vals[static_cast<std::size_t>(v)] = poly::eval_2d(
                std::span<const double>(coeffs.data() + static_cast<long>(v) * n * n, static_cast<std::size_t>(n * n)), n,
                xi, eta);
          const MediumParams p = medium(center[0] + xi * dx, center[1] + eta * dy);
          using namespace var2d;
          const double j2 = vals[Jx] * vals[Jx] + vals[Jy] * vals[Jy];
          const double p2 = vals[Px] * vals[Px] + vals[Py] * vals[Py];
          if (p.omega_p == 0.0 && (j2 != 0.0 || p2 != 0.0)) ++out.lorentz_terms_dropped;
          const double e2 = vals[Ex] * vals[Ex] + vals[Ey] * vals[Ey];
          accumulate(energy_density(vals[Hz] * vals[Hz], e2, j2, p2, vals[Q], vals[S], p, form),
                     0.25 * rule.weights[static_cast<std::size_t>(iq)] * rule.weights[static_cast<std::size_t>(jq)] * dx *
                         dy);
        }
      }
    }
  }
  EnergyReport& r = out.report;
  r.magnetic = acc[0].value();
  r.electric = acc[1].value();
  r.current = acc[2].value();
  r.polarization = acc[3].value();
  r.sigma = acc[4].value();
  r.raman_cross = acc[5].value();
  r.kerr = acc[6].value();
  r.raman_q = acc[7].value();
  r.sum();
  return out;
}

}  // namespace hermite

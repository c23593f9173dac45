#pragma once

// Brute-force reference evaluations of the cell right-hand sides.
//
// The electric rates are recovered by Newton iteration on the implicit
// constitutive system d/dt(eps_inf E + P + theta_K |E|^2 E + theta_R Q E) = ...
// with full (untruncated) products and a dense LU solve, independently of the
// explicit recursion in the kernels. Suites draw random cell states and
// compare the two.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermite/media.hpp"
#include "hermite/polyalg.hpp"
#include "hermite/rhs1d.hpp"
#include "hermite/rhs2d.hpp"

namespace hermite::oracle {

/// First-order dual number: value and directional derivative.
struct Dual {
  double v = 0.0, d = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }

/// Full 1D product of length 2n-1, then truncated to n.
inline std::vector<Dual> product_1d(const std::vector<Dual>& a, const std::vector<Dual>& b, int n) {
  std::vector<Dual> full(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) full[static_cast<std::size_t>(i + j)] = full[static_cast<std::size_t>(i + j)] + a[i] * b[j];
  full.resize(static_cast<std::size_t>(n));
  return full;
}

/// Full 2D product on a (2n-1)^2 box, then truncated to the n^2 box.
inline std::vector<Dual> product_2d(const std::vector<Dual>& a, const std::vector<Dual>& b, int n) {
  const int w = 2 * n - 1;
  std::vector<Dual> full(static_cast<std::size_t>(w * w));
  for (int l1 = 0; l1 < n; ++l1)
    for (int k1 = 0; k1 < n; ++k1) {
      const Dual x = a[static_cast<std::size_t>(l1 * n + k1)];
      if (x.v == 0.0 && x.d == 0.0) continue;
      for (int l2 = 0; l2 < n; ++l2)
        for (int k2 = 0; k2 < n; ++k2) {
          auto& o = full[static_cast<std::size_t>((l1 + l2) * w + k1 + k2)];
          o = o + x * b[static_cast<std::size_t>(l2 * n + k2)];
        }
    }
  std::vector<Dual> out(static_cast<std::size_t>(n * n));
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(l * n + k)] = full[static_cast<std::size_t>(l * w + k)];
  return out;
}

namespace detail {

inline std::vector<Dual> lift(const double* v, const double* dv, std::size_t n) {
  std::vector<Dual> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {v[i], dv ? dv[i] : 0.0};
  return out;
}

/// Solves R(V) = 0 where residual(V, seed) returns the dual parts of the
/// constitutive rate for field rates V + t*seed. R is affine in V, so the
/// Jacobian is assembled once by unit seeds.
template <class Residual>
std::vector<double> newton(int unknowns, Residual&& residual, int iterations = 3) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(unknowns);
  std::vector<double> seed(static_cast<std::size_t>(unknowns), 0.0);
  const std::vector<double> r0 = residual(std::vector<double>(static_cast<std::size_t>(unknowns), 0.0), seed);
  Eigen::MatrixXd jac(unknowns, unknowns);
  for (int j = 0; j < unknowns; ++j) {
    seed.assign(static_cast<std::size_t>(unknowns), 0.0);
    seed[static_cast<std::size_t>(j)] = 1.0;
    const auto col = residual(std::vector<double>(static_cast<std::size_t>(unknowns), 0.0), seed);
    for (int i = 0; i < unknowns; ++i) jac(i, j) = col[static_cast<std::size_t>(i)] - r0[static_cast<std::size_t>(i)];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
  seed.assign(static_cast<std::size_t>(unknowns), 0.0);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> cur(v.data(), v.data() + unknowns);
    const auto r = residual(cur, seed);
    const Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), unknowns);
    v -= lu.solve(rv);
  }
  return {v.data(), v.data() + unknowns};
}

}  // namespace detail

/// Reference rates for a packed 1D cell state (see rhs1d.hpp for layout).
inline std::vector<double> reference_rhs_1d(std::span<const double> c, int n, double dx, const MediumParams& p,
                                            std::span<const double> forcing = {}) {
  using namespace var1d;
  auto at = [&](int v, int k) { return c[static_cast<std::size_t>(v * n + k)]; };
  auto g = [&](int v, int k) { return forcing.empty() ? 0.0 : forcing[static_cast<std::size_t>(v * n + k)]; };
  std::vector<double> r(static_cast<std::size_t>(count * n), 0.0);
  auto rt = [&](int v, int k) -> double& { return r[static_cast<std::size_t>(v * n + k)]; };

  std::vector<double> e(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k)] = at(E, k);
  const auto ee = product_1d(detail::lift(e.data(), nullptr, e.size()), detail::lift(e.data(), nullptr, e.size()), n);
  for (int k = 0; k < n; ++k) {
    rt(H, k) = ((k + 1 < n ? (k + 1) * at(E, k + 1) / dx : 0.0) + g(H, k)) / p.mu;
    rt(P, k) = at(J, k) + g(P, k);
    rt(J, k) = -p.gamma * at(J, k) - p.omega0 * p.omega0 * at(P, k) + p.omega_p * p.omega_p * at(E, k) + g(J, k);
    rt(Q, k) = at(S, k) + g(Q, k);
    rt(S, k) = -p.gamma_v * at(S, k) + p.omega_v * p.omega_v * (ee[static_cast<std::size_t>(k)].v - at(Q, k)) + g(S, k);
  }

  std::vector<double> q(static_cast<std::size_t>(n)), qdot(q.size());
  for (int k = 0; k < n; ++k) {
    q[static_cast<std::size_t>(k)] = at(Q, k);
    qdot[static_cast<std::size_t>(k)] = rt(Q, k);
  }
  const double tk = p.theta_k(), tr = p.theta_r();
  auto residual = [&](const std::vector<double>& v, const std::vector<double>& seed) {
    // Dual parts carry time derivatives: E -> (E, V), Q -> (Q, Q').
    const auto ed = detail::lift(e.data(), nullptr, e.size());
    std::vector<Dual> et(ed);
    for (std::size_t i = 0; i < et.size(); ++i) et[i].d = v[i] + seed[i];
    const auto qd = detail::lift(q.data(), qdot.data(), q.size());
    const auto cube = product_1d(product_1d(et, et, n), et, n);
    const auto qe = product_1d(qd, et, n);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double rhs = ((k + 1 < n ? (k + 1) * at(H, k + 1) / dx : 0.0) + g(E, k)) / p.eps;
      out[kk] = p.eps_inf * et[kk].d + rt(P, k) + tk * cube[kk].d + tr * qe[kk].d - rhs;
    }
    return out;
  };
  const auto ev = detail::newton(n, residual);
  for (int k = 0; k < n; ++k) rt(E, k) = ev[static_cast<std::size_t>(k)];
  return r;
}

/// Reference rates for a packed 2D cell state (see rhs2d.hpp for layout).
inline std::vector<double> reference_rhs_2d(std::span<const double> c, int n, double dx, double dy,
                                            const MediumParams& p, std::span<const double> forcing = {}) {
  using namespace var2d;
  const int nn = n * n;
  auto at = [&](int v, int k, int l) { return c[static_cast<std::size_t>(v * nn + l * n + k)]; };
  auto g = [&](int v, int k, int l) {
    return forcing.empty() ? 0.0 : forcing[static_cast<std::size_t>(v * nn + l * n + k)];
  };
  std::vector<double> r(static_cast<std::size_t>(count * nn), 0.0);
  auto rt = [&](int v, int k, int l) -> double& { return r[static_cast<std::size_t>(v * nn + l * n + k)]; };
  auto block = [&](int v) { return detail::lift(c.data() + v * nn, nullptr, static_cast<std::size_t>(nn)); };

  const auto exd = block(Ex), eyd = block(Ey);
  const auto ex2 = product_2d(exd, exd, n), ey2 = product_2d(eyd, eyd, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const double dex_dy = l + 1 < n ? (l + 1) * at(Ex, k, l + 1) / dy : 0.0;
      const double dey_dx = k + 1 < n ? (k + 1) * at(Ey, k + 1, l) / dx : 0.0;
      rt(Hz, k, l) = (dex_dy - dey_dx + g(Hz, k, l)) / p.mu;
      for (int comp = 0; comp < 2; ++comp) {
        rt(Px + comp, k, l) = at(Jx + comp, k, l) + g(Px + comp, k, l);
        rt(Jx + comp, k, l) = -p.gamma * at(Jx + comp, k, l) - p.omega0 * p.omega0 * at(Px + comp, k, l) +
                              p.omega_p * p.omega_p * at(Ex + comp, k, l) + g(Jx + comp, k, l);
      }
      const auto i = static_cast<std::size_t>(l * n + k);
      rt(Q, k, l) = at(S, k, l) + g(Q, k, l);
      rt(S, k, l) = -p.gamma_v * at(S, k, l) + p.omega_v * p.omega_v * (ex2[i].v + ey2[i].v - at(Q, k, l)) + g(S, k, l);
    }

  std::vector<double> qdot(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) qdot[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(Q * nn + i)];
  const auto qd = detail::lift(c.data() + Q * nn, qdot.data(), static_cast<std::size_t>(nn));
  const double tk = p.theta_k(), tr = p.theta_r();

  auto residual = [&](const std::vector<double>& v, const std::vector<double>& seed) {
    std::vector<Dual> ex(exd), ey(eyd);
    for (int i = 0; i < nn; ++i) {
      ex[static_cast<std::size_t>(i)].d = v[static_cast<std::size_t>(i)] + seed[static_cast<std::size_t>(i)];
      ey[static_cast<std::size_t>(i)].d = v[static_cast<std::size_t>(nn + i)] + seed[static_cast<std::size_t>(nn + i)];
    }
    auto norm2 = product_2d(ex, ex, n);
    const auto yy = product_2d(ey, ey, n);
    for (int i = 0; i < nn; ++i) norm2[static_cast<std::size_t>(i)] = norm2[static_cast<std::size_t>(i)] + yy[static_cast<std::size_t>(i)];
    const auto kx = product_2d(norm2, ex, n), ky = product_2d(norm2, ey, n);
    const auto rx = product_2d(qd, ex, n), ry = product_2d(qd, ey, n);
    std::vector<double> out(static_cast<std::size_t>(2 * nn));
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(l * n + k);
        const double dhz_dy = l + 1 < n ? (l + 1) * at(Hz, k, l + 1) / dy : 0.0;
        const double dhz_dx = k + 1 < n ? (k + 1) * at(Hz, k + 1, l) / dx : 0.0;
        out[i] = p.eps_inf * ex[i].d + rt(Px, k, l) + tk * kx[i].d + tr * rx[i].d - (dhz_dy + g(Ex, k, l)) / p.eps;
        out[static_cast<std::size_t>(nn) + i] =
            p.eps_inf * ey[i].d + rt(Py, k, l) + tk * ky[i].d + tr * ry[i].d - (-dhz_dx + g(Ey, k, l)) / p.eps;
      }
    return out;
  };
  const auto ev = detail::newton(2 * nn, residual);
  for (int i = 0; i < nn; ++i) {
    r[static_cast<std::size_t>(Ex * nn + i)] = ev[static_cast<std::size_t>(i)];
    r[static_cast<std::size_t>(Ey * nn + i)] = ev[static_cast<std::size_t>(nn + i)];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Randomized suites

using Kernel1D = std::function<void(const double*, double*, int, double, const MediumParams&, const double*)>;
using Kernel2D = std::function<void(const double*, double*, int, double, double, const MediumParams&, const double*)>;

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  int samples = 0;
  int failures = 0;
  double worst = 0.0;           // largest relative discrepancy seen
  nlohmann::json first_failure;  // replayable sample, null when all passed
  bool passed() const { return failures == 0; }
};

inline double relative_gap(std::span<const double> got, std::span<const double> want) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  if (!std::isfinite(diff)) return std::numeric_limits<double>::infinity();
  return scale > 0.0 ? diff / scale : diff;
}

inline nlohmann::json params_json(const MediumParams& p) {
  return {{"mu", p.mu},         {"eps", p.eps},         {"eps_inf", p.eps_inf}, {"a", p.a},
          {"theta", p.theta},   {"omega0", p.omega0},   {"omega_p", p.omega_p}, {"omega_v", p.omega_v},
          {"gamma", p.gamma},   {"gamma_v", p.gamma_v}};
}

namespace detail {

/// Random medium between the two presets; coefficients of a and theta keep
/// the constitutive matrix positive definite for states in [-1, 1].
inline MediumParams random_medium(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MediumParams p = u(rng) < 0.5 ? MediumParams::mms() : MediumParams::soliton();
  p.mu *= 0.5 + u(rng);
  p.eps *= 0.5 + u(rng);
  p.theta = u(rng);
  p.gamma = 0.1 * u(rng);
  p.gamma_v = 0.1 * u(rng);
  return p;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace detail

inline SuiteResult run_rhs1d_suite(std::uint64_t seed, int samples, const Kernel1D& kernel, double tol = 1e-11) {
  SuiteResult res;
  res.suite = "rhs1d";
  res.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(0, poly::kMaxOrder);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const int m = pick_m(rng);
    const int n = poly::coeff_count(m);
    const double dx = 0.25 + u(rng);
    const MediumParams p = detail::random_medium(rng);
    auto state = detail::random_vector(rng, static_cast<std::size_t>(var1d::count * n));
    std::vector<double> forcing;
    if (u(rng) < 0.5) forcing = detail::random_vector(rng, state.size());
    std::vector<double> got(state.size(), 0.0);
    kernel(state.data(), got.data(), n, dx, p, forcing.empty() ? nullptr : forcing.data());
    const auto want = reference_rhs_1d(state, n, dx, p, forcing);
    const double gap = relative_gap(got, want);
    res.worst = std::max(res.worst, gap);
    ++res.samples;
    if (!(gap <= tol)) {
      if (res.failures == 0)
        res.first_failure = {{"suite", res.suite}, {"seed", seed}, {"sample", s}, {"m", m}, {"dx", dx},
                             {"medium", params_json(p)}, {"state", state}, {"forcing", forcing},
                             {"kernel_rate", got}, {"reference_rate", want}, {"relative_gap", gap}};
      ++res.failures;
    }
  }
  return res;
}

inline SuiteResult run_rhs2d_suite(std::uint64_t seed, int samples, const Kernel2D& kernel, double tol = 1e-11,
                                   int max_order = 3) {
  SuiteResult res;
  res.suite = "rhs2d";
  res.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(0, std::min(max_order, poly::kMaxOrder));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const int m = pick_m(rng);
    const int n = poly::coeff_count(m);
    const double dx = 0.25 + u(rng), dy = 0.25 + u(rng);
    const MediumParams p = detail::random_medium(rng);
    // Half-size entries keep the 2D Kerr matrix comfortably positive definite.
    auto state = detail::random_vector(rng, static_cast<std::size_t>(var2d::count * n * n));
    for (auto& x : state) x *= 0.5;
    std::vector<double> forcing;
    if (u(rng) < 0.5) forcing = detail::random_vector(rng, state.size());
    std::vector<double> got(state.size(), 0.0);
    kernel(state.data(), got.data(), n, dx, dy, p, forcing.empty() ? nullptr : forcing.data());
    const auto want = reference_rhs_2d(state, n, dx, dy, p, forcing);
    const double gap = relative_gap(got, want);
    res.worst = std::max(res.worst, gap);
    ++res.samples;
    if (!(gap <= tol)) {
      if (res.failures == 0)
        res.first_failure = {{"suite", res.suite}, {"seed", seed}, {"sample", s}, {"m", m}, {"dx", dx}, {"dy", dy},
                             {"medium", params_json(p)}, {"state", state}, {"forcing", forcing},
                             {"kernel_rate", got}, {"reference_rate", want}, {"relative_gap", gap}};
      ++res.failures;
    }
  }
  return res;
}

/// Truncated products against full convolutions, and Hermite interpolants
/// against the endpoint data they must reproduce.
inline SuiteResult run_polyalg_suite(std::uint64_t seed, int samples, double tol = 1e-11) {
  SuiteResult res;
  res.suite = "polyalg";
  res.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(0, poly::kMaxOrder);
  for (int s = 0; s < samples; ++s) {
    const int m = pick_m(rng);
    const int n = poly::coeff_count(m);
    const int q = m + 1;
    double gap = 0.0;
    std::string what;

    // 1D product.
    {
      const auto a = detail::random_vector(rng, static_cast<std::size_t>(n));
      const auto b = detail::random_vector(rng, static_cast<std::size_t>(n));
      std::vector<double> got(static_cast<std::size_t>(n));
      poly::trunc_product(a, b, n, got);
      const auto want = product_1d(detail::lift(a.data(), nullptr, a.size()), detail::lift(b.data(), nullptr, b.size()), n);
      std::vector<double> wv(want.size());
      for (std::size_t i = 0; i < want.size(); ++i) wv[i] = want[i].v;
      const double g1 = relative_gap(got, wv);
      if (g1 > gap) {
        gap = g1;
        what = "trunc_product";
      }
    }
    // 2D product.
    {
      const auto a = detail::random_vector(rng, static_cast<std::size_t>(n * n));
      const auto b = detail::random_vector(rng, static_cast<std::size_t>(n * n));
      std::vector<double> got(static_cast<std::size_t>(n * n));
      poly::trunc_product_2d(a, b, n, got);
      const auto want = product_2d(detail::lift(a.data(), nullptr, a.size()), detail::lift(b.data(), nullptr, b.size()), n);
      std::vector<double> wv(want.size());
      for (std::size_t i = 0; i < want.size(); ++i) wv[i] = want[i].v;
      const double g2 = relative_gap(got, wv);
      if (g2 > gap) {
        gap = g2;
        what = "trunc_product_2d";
      }
    }
    // 1D interpolant reproduces both endpoint Taylor expansions.
    {
      const auto left = detail::random_vector(rng, static_cast<std::size_t>(q));
      const auto right = detail::random_vector(rng, static_cast<std::size_t>(q));
      std::vector<double> c(static_cast<std::size_t>(n));
      poly::interp_scaled(left, right, m, c);
      // j-th Taylor coefficient at x0 is sum_k C(k, j) c_k x0^(k-j); the
      // error is measured against the magnitude of that sum's terms.
      double g3 = 0.0;
      for (int side = 0; side < 2; ++side) {
        const double x0 = side == 0 ? -0.5 : 0.5;
        for (int j = 0; j < q; ++j) {
          double acc = 0.0, mag = 0.0;
          for (int k = j; k < n; ++k) {
            double binom = 1.0;
            for (int t = 1; t <= j; ++t) binom = binom * (k - j + t) / t;
            const double term = binom * c[static_cast<std::size_t>(k)] * std::pow(x0, k - j);
            acc += term;
            mag += std::abs(term);
          }
          const double want = side == 0 ? left[static_cast<std::size_t>(j)] : right[static_cast<std::size_t>(j)];
          g3 = std::max(g3, std::abs(acc - want) / std::max(mag, 1e-300));
        }
      }
      if (g3 > gap) {
        gap = g3;
        what = "interp_scaled";
      }
    }
    res.worst = std::max(res.worst, gap);
    ++res.samples;
    if (!(gap <= tol)) {
      if (res.failures == 0)
        res.first_failure = {{"suite", res.suite}, {"seed", seed}, {"sample", s}, {"m", m}, {"check", what},
                             {"relative_gap", gap}};
      ++res.failures;
    }
  }
  return res;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"rhs1d", "rhs2d", "polyalg"};
  return names;
}

inline int default_samples(const std::string& suite) {
  if (suite == "rhs1d") return 1000;
  if (suite == "rhs2d") return 500;
  return 1000;
}

/// Runs a named suite against the production kernels.
inline SuiteResult run_suite(const std::string& suite, std::uint64_t seed, int samples = -1) {
  const int ns = samples > 0 ? samples : default_samples(suite);
  if (suite == "rhs1d") return run_rhs1d_suite(seed, ns, kernel::rhs_1d);
  if (suite == "rhs2d") return run_rhs2d_suite(seed, ns, kernel::rhs_2d);
  if (suite == "polyalg") return run_polyalg_suite(seed, ns);
  throw std::invalid_argument("unknown oracle suite '" + suite + "'");
}

}  // namespace hermite::oracle

#include <gtest/gtest.h>

#include <cmath>

#include "hermite/scenarios.hpp"
#include "hermite/verification.hpp"

using namespace hermite;

namespace {
std::vector<double> point_values(const Scenario& s, double x, double y, double t) {
  std::vector<double> v(static_cast<std::size_t>(s.nvars()));
  s.taylor(x, y, t, 1, 0.1, 0.1, v.data());
  return v;
}

double max_residual(const Scenario& s, double x, double y, double t, int m, double h) {
  const auto r = residual_oracle(s, x, y, t, m, h);
  double mx = 0.0;
  for (double v : r.per_variable) mx = std::max(mx, v);
  return mx;
}
}  // namespace

TEST(Scenarios, StandingWaveSpotValues) {
  const auto s = scenario_mms1_1d();
  const auto v = point_values(s, 0.05, 0.0, 0.05);
  EXPECT_NEAR(v[var1d::H], 1.0, 1e-14);
  EXPECT_NEAR(v[var1d::E], 0.0, 1e-14);
  const auto w = point_values(s, 0.3, 0.0, 0.7);
  EXPECT_NEAR(w[var1d::E], -1.0, 1e-13);
  EXPECT_NEAR(w[var1d::Q], 1.0, 1e-13);
  EXPECT_NEAR(w[var1d::P], -1.0 / 3.0 * -1.0, 1e-13);
}

TEST(Scenarios, TravelingPulseIsPeriodic) {
  const auto s = scenario_mms2_1d();
  const auto a = point_values(s, 0.1, 0.0, 0.3);
  const auto b = point_values(s, 0.1, 0.0, 2.3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13);
  const auto peak = point_values(s, -0.1 / std::sqrt(2.0), 0.0, 0.0);
  EXPECT_NEAR(peak[var1d::E], 0.1 / std::sqrt(2.0) * std::exp(-0.5), 1e-13);
}

TEST(Scenarios, PlaneWaveSpotValues) {
  const auto s = scenario_plane_wave_1d(1, 4.0, 1.0);
  const auto v = point_values(s, 0.25, 0.0, 0.0);
  EXPECT_NEAR(v[var1d::E], 1.0, 1e-14);
  EXPECT_NEAR(v[var1d::H], -0.5, 1e-14);
  EXPECT_TRUE(s.forced.empty());
  EXPECT_FALSE(static_cast<bool>(s.forcing));
}

TEST(Scenarios, SolitonAndAirholeSetup) {
  const auto s = scenario_soliton_1d(2.0, 50.0);
  EXPECT_FALSE(s.has_exact);
  EXPECT_NEAR(point_values(s, 0.0, 0.0, 0.0)[var1d::E], 2.0, 1e-14);
  const auto a = scenario_airhole_2d(10.0, 5.0);
  ASSERT_TRUE(a.interface.has_value());
  EXPECT_NEAR(std::hypot(a.interface->center.x, a.interface->center.y), 5.0, 1e-14);
  const Grid g = a.grid(40);
  EXPECT_NEAR(a.interface_for(g).delta, 2.0 * g.h(), 1e-15);
  const auto medium = a.medium(g);
  EXPECT_EQ(medium(a.interface->center.x, a.interface->center.y).a, 0.0);
  EXPECT_EQ(medium(-9.0, -9.0).a, MediumParams::soliton().a);
  EXPECT_NEAR(point_values(a, 0.0, 0.0, 0.0)[var2d::Hz], 1.0, 1e-14);
}

TEST(Scenarios, LookupByName) {
  for (const char* n : {"mms1_1d", "mms2_1d", "plane_wave_1d", "soliton_1d", "mms1_2d", "mms2_2d", "airhole_2d"})
    EXPECT_EQ(scenario_by_name(n).name, n);
  EXPECT_THROW(scenario_by_name("nope"), ConfigError);
}

TEST(Scenarios, MediumOverrideForcesEveryEquation) {
  EXPECT_EQ(scenario_mms1_1d().forced, (std::vector<int>{var1d::J, var1d::S}));
  MediumParams p = MediumParams::mms();
  p.eps_inf = 2.0;
  const auto s = scenario_mms1_1d(p);
  EXPECT_EQ(s.forced.size(), static_cast<std::size_t>(var1d::count));
  const double coarse = max_residual(s, 0.3, 0.0, 0.7, 2, 0.01);
  const double fine = max_residual(s, 0.3, 0.0, 0.7, 2, 0.005);
  EXPECT_GT(std::log2(coarse / fine), 4.7);
}

TEST(Scenarios, ExactSolutionsSatisfyTheEquations1D) {
  for (const auto& s : {scenario_mms1_1d(), scenario_mms2_1d(), scenario_plane_wave_1d()}) {
    for (int m : {1, 2}) {
      std::vector<double> hs, rs;
      for (double h : {0.02, 0.01, 0.005}) {
        hs.push_back(h);
        rs.push_back(max_residual(s, 0.137, 0.0, 0.41, m, h));
      }
      EXPECT_GT(fit_slope(hs, rs), 2 * m + 1 - 0.3) << s.name << " m=" << m;
    }
  }
}

TEST(Scenarios, ExactSolutionsSatisfyTheEquations2D) {
  for (const auto& s : {scenario_mms1_2d(), scenario_mms2_2d()}) {
    std::vector<double> hs, rs;
    for (double h : {0.02, 0.01, 0.005}) {
      hs.push_back(h);
      rs.push_back(max_residual(s, 0.137, 0.071, 0.21, 1, h));
    }
    EXPECT_GT(fit_slope(hs, rs), 3 - 0.3) << s.name;
  }
}

TEST(Scenarios, ForcingVanishesWhereModelNeedsNone) {
  const auto s = scenario_mms1_1d();
  std::vector<double> g(6 * 4);
  s.forcing(0.3, 0.0, 0.2, 4, 0.05, 0.05, g.data());
  for (int v : {var1d::H, var1d::E, var1d::P, var1d::Q})
    for (int k = 0; k < 4; ++k) EXPECT_EQ(g[static_cast<std::size_t>(v * 4 + k)], 0.0);
}

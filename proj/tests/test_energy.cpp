#include <gtest/gtest.h>

#include <cmath>

#include "hermite/scenarios.hpp"
#include "hermite/verification.hpp"

using namespace hermite;

namespace {
MediumFn constant(const MediumParams& p) {
  return [p](double, double) { return p; };
}
}  // namespace

TEST(GaussLegendre, ExactForHighDegreePolynomials) {
  for (int q : {1, 3, 7, 27}) {
    const auto r = gauss_legendre(q);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    for (int d = 0; d <= 2 * q - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < q; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.nodes[static_cast<std::size_t>(i)], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "q=" << q << " d=" << d;
    }
  }
  EXPECT_EQ(energy_quadrature_points(3), 15);
}

TEST(Energy, ZeroFieldsHaveZeroEnergy) {
  const Grid g = Grid::line(0.0, 1.0, 10);
  const FieldFrame f(g, 6, 2, Mesh::primal, 0.0);
  const auto e = energy(f, g, constant(MediumParams::soliton()));
  EXPECT_EQ(e.report.total, 0.0);
  const Grid g2 = Grid::plane(0.0, 1.0, 0.0, 1.0, 4, 4);
  const FieldFrame f2(g2, 9, 1, Mesh::dual, 0.0);
  EXPECT_EQ(energy(f2, g2, constant(MediumParams::soliton())).report.total, 0.0);
}

TEST(Energy, UniformMagneticField) {
  const Grid g = Grid::line(0.0, 2.0, 8);
  FieldFrame f(g, 6, 3, Mesh::primal, 0.0);
  for (long i = 0; i < f.nodes(); ++i) f.node(i)[var1d::H * f.block()] = 1.0;
  const auto e = energy(f, g, constant(MediumParams::vacuum()));
  EXPECT_NEAR(e.report.magnetic, 1.0, 1e-14);
  EXPECT_NEAR(e.report.total, 1.0, 1e-14);
}

TEST(Energy, UniformKerrFieldOnPlane) {
  const Grid g = Grid::plane(0.0, 2.0, 0.0, 3.0, 4, 6);
  FieldFrame f(g, 9, 1, Mesh::primal, 0.0);
  for (long i = 0; i < f.nodes(); ++i) {
    f.node(i)[var2d::Ex * f.block()] = 1.0;
    f.node(i)[var2d::Ey * f.block()] = 1.0;
  }
  MediumParams p;
  p.a = 0.5;
  const auto e = energy(f, g, constant(p));
  EXPECT_NEAR(e.report.electric, 0.5 * 2.0 * 6.0, 1e-13);
  EXPECT_NEAR(e.report.kerr, 0.75 * 0.5 * 4.0 * 6.0, 1e-13);
}

TEST(Energy, DroppedLorentzTermsAreCounted) {
  const Grid g = Grid::line(0.0, 1.0, 4);
  FieldFrame f(g, 6, 0, Mesh::primal, 0.0);
  for (long i = 0; i < f.nodes(); ++i) f.node(i)[var1d::J * f.block()] = 1.0;
  const auto e = energy(f, g, constant(MediumParams::vacuum()));
  EXPECT_EQ(e.report.current, 0.0);
  EXPECT_GT(e.lorentz_terms_dropped, 0);
}

TEST(Energy, ConservedForLosslessPlaneWave) {
  const Scenario s = scenario_plane_wave_1d();
  RunSettings rs;
  rs.n = 20;
  rs.m_max = 3;
  rs.final_time = 2.0;
  Grid g;
  Solver solver = make_solver(s, rs, &g);
  std::vector<double> totals;
  solver.run(solver.initial_frame(s.taylor),
             [&](const FieldFrame& f, long) { totals.push_back(energy(f, g, s.medium(g)).report.total); }, 10);
  ASSERT_GE(totals.size(), 2u);
  EXPECT_NEAR(totals.front(), 0.5, 1e-10);
  const double drift = (totals.back() - totals.front()) / totals.front();
  EXPECT_LT(std::abs(drift), 1e-6);
  EXPECT_LE(drift, 1e-14);
}

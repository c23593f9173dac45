#include <gtest/gtest.h>

#include <random>

#include "hermite/oracle.hpp"
#include "hermite/rhs2d.hpp"

using namespace hermite;

namespace {
CellCoeffs2D random_cell(std::mt19937_64& rng, int m, double dx, double dy, double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CellCoeffs2D c(m, dx, dy);
  for (auto& t : c.vars)
    for (auto& x : t.coeffs) x = u(rng);
  return c;
}
}  // namespace

TEST(RhsHz2D, CurlOfLinearFields) {
  CellCoeffs2D c(1, 0.5, 0.25);
  c[var2d::Ex].at(0, 1) = 1.0;  // Ex varies in y
  c[var2d::Ey].at(1, 0) = 2.0;  // Ey varies in x
  const auto r = rhs_hz_2d(c, MediumParams::vacuum());
  EXPECT_DOUBLE_EQ(r.at(0, 0), 1.0 / 0.25 - 2.0 / 0.5);
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      if (k || l) {
        EXPECT_EQ(r.at(k, l), 0.0);
      }
}

TEST(RhsLinear2D, ZeroStateAndOscillators) {
  const auto z = rhs_linear_2d(CellCoeffs2D(2, 0.3, 0.3), MediumParams::mms());
  for (double x : z.pack()) EXPECT_EQ(x, 0.0);
  CellCoeffs2D c(1, 1.0, 1.0);
  c[var2d::Jy].at(0, 0) = 1.0;
  c[var2d::Ex].at(0, 0) = 2.0;
  const auto p = MediumParams::mms();
  const auto r = rhs_linear_2d(c, p);
  EXPECT_DOUBLE_EQ(r[var2d::Py].at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r[var2d::Jy].at(0, 0), -0.05);
  EXPECT_DOUBLE_EQ(r[var2d::Jx].at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(r[var2d::S].at(0, 0), 4.0);
}

TEST(RhsEfield2D, LinearMediumCollapses) {
  std::mt19937_64 rng(21);
  MediumParams p = MediumParams::soliton();
  p.a = 0.0;
  const auto c = random_cell(rng, 2, 0.4, 0.6);
  const auto er = rhs_efield_2d(c, p, c[var2d::S]);
  const int n = 6;
  const auto& hz = c[var2d::Hz];
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const double dhdy = l + 1 < n ? (l + 1) * hz.at(k, l + 1) / c.dy : 0.0;
      const double dhdx = k + 1 < n ? (k + 1) * hz.at(k + 1, l) / c.dx : 0.0;
      EXPECT_NEAR(er.ex.at(k, l), (dhdy / p.eps - c[var2d::Jx].at(k, l)) / p.eps_inf, 1e-13);
      EXPECT_NEAR(er.ey.at(k, l), (-dhdx / p.eps - c[var2d::Jy].at(k, l)) / p.eps_inf, 1e-13);
    }
}

TEST(RhsFull2D, AgreesWithImplicitNewtonSolve) {
  const auto res = oracle::run_rhs2d_suite(2025, 500, kernel::rhs_2d);
  EXPECT_TRUE(res.passed()) << res.first_failure.dump();
  EXPECT_LT(res.worst, 1e-11);
}

TEST(RhsFull2D, ZeroFieldFixedPoint) {
  for (int m = 0; m <= 4; ++m) {
    const auto r = rhs_full_2d(CellCoeffs2D(m, 0.1, 0.2), MediumParams::soliton());
    for (double x : r.pack()) EXPECT_EQ(x, 0.0);
  }
}

TEST(RhsFull2D, ReducesToOneDimensionForUniformFields) {
  // Ey(x) and Hz(x) with nothing else varying in y match the 1D system with H = -Hz.
  std::mt19937_64 rng(22);
  const auto p = MediumParams::mms();
  const int m = 2, n = 6;
  CellCoeffs2D c2(m, 0.3, 0.7);
  CellCoeffs1D c1(m, 0.3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < n; ++k) {
    c1.H[k] = u(rng);
    c1.E[k] = u(rng);
    c1.P[k] = u(rng);
    c1.J[k] = u(rng);
    c1.Q[k] = u(rng);
    c1.S[k] = u(rng);
    c2[var2d::Hz].at(k, 0) = -c1.H[k];
    c2[var2d::Ey].at(k, 0) = c1.E[k];
    c2[var2d::Py].at(k, 0) = c1.P[k];
    c2[var2d::Jy].at(k, 0) = c1.J[k];
    c2[var2d::Q].at(k, 0) = c1.Q[k];
    c2[var2d::S].at(k, 0) = c1.S[k];
  }
  const auto r1 = rhs_full_1d(c1, p);
  const auto r2 = rhs_full_2d(c2, p);
  for (int k = 0; k < n; ++k) {
    EXPECT_NEAR(r2[var2d::Hz].at(k, 0), -r1.H[k], 1e-13);
    EXPECT_NEAR(r2[var2d::Ey].at(k, 0), r1.E[k], 1e-13);
    EXPECT_NEAR(r2[var2d::Jy].at(k, 0), r1.J[k], 1e-13);
    EXPECT_NEAR(r2[var2d::S].at(k, 0), r1.S[k], 1e-13);
    EXPECT_NEAR(r2[var2d::Ex].at(k, 0), 0.0, 1e-15);
    for (int l = 1; l < n; ++l) EXPECT_NEAR(r2[var2d::Ey].at(k, l), 0.0, 1e-15);
  }
}

TEST(RhsFull2D, IndefiniteMatrixIsReported) {
  CellCoeffs2D c(1, 1.0, 1.0);
  c[var2d::Q].at(0, 0) = -10.0;
  EXPECT_THROW(rhs_full_2d(c, MediumParams::mms()), SolvabilityError);
}

TEST(RhsFull2D, ForcingLengthChecked) {
  EXPECT_THROW(rhs_full_2d(CellCoeffs2D(1, 1.0, 1.0), MediumParams::mms(), std::vector<double>(5, 0.0)),
               std::invalid_argument);
}

TEST(CellCoeffs2D, PackRoundTrip) {
  std::mt19937_64 rng(23);
  const auto c = random_cell(rng, 2, 0.5, 0.25);
  EXPECT_EQ(CellCoeffs2D::unpack(c.pack(), 2, 0.5, 0.25).pack(), c.pack());
}

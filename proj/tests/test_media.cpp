#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hermite/media.hpp"

using namespace hermite;

namespace {
MediumParams pure_kerr(double eps_inf, double a) {
  MediumParams p;
  p.eps_inf = eps_inf;
  p.a = a;
  p.theta = 0.0;
  return p;
}
}  // namespace

TEST(MediumParams, DerivedCouplingsSumToA) {
  const auto p = MediumParams::soliton();
  EXPECT_EQ(p.theta_k() + p.theta_r(), p.a);
  EXPECT_NEAR(p.theta_k(), 0.049, 1e-15);
  EXPECT_NEAR(p.omega_p, 5.84 * std::sqrt(3.0), 1e-12);
}

TEST(MediumParams, PresetsAreValidAndViolationsAreListed) {
  EXPECT_TRUE(MediumParams::mms().violations().empty());
  EXPECT_TRUE(MediumParams::soliton().violations().empty());
  MediumParams bad;
  bad.mu = 0.0;
  bad.theta = 2.0;
  bad.a = -1.0;
  EXPECT_EQ(bad.violations().size(), 3u);
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(MediumParams, ManufacturedPresetValues) {
  const auto p = MediumParams::mms();
  EXPECT_DOUBLE_EQ(p.a, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.theta, 0.5);
  EXPECT_DOUBLE_EQ(p.gamma, 1.0 / 20.0);
  EXPECT_DOUBLE_EQ(p.gamma_v, 1.0 / 20.0);
  EXPECT_DOUBLE_EQ(p.eps_inf, 1.0);
}

TEST(ConstitutiveMatrix1D, Values) {
  const auto p = MediumParams::soliton();
  EXPECT_DOUBLE_EQ(matrix_m_1d(0.0, 0.0, p), 2.25);
  EXPECT_NEAR(matrix_m_1d(1.0, 0.0, p), 2.397, 1e-12);
  const auto k = pure_kerr(1.5, 0.4);
  for (double e : {-3.0, -0.1, 0.0, 2.0, 10.0}) EXPECT_GE(matrix_m_1d(e, 0.0, k), 1.5);
}

TEST(ConstitutiveMatrix2D, Values) {
  const auto p = MediumParams::soliton();
  const auto z = matrix_m_2d(0, 0, 0, p);
  EXPECT_EQ(z[0][0], 2.25);
  EXPECT_EQ(z[1][1], 2.25);
  EXPECT_EQ(z[0][1], 0.0);
  const auto k = matrix_m_2d(1, 1, 0, pure_kerr(1.0, 1.0));
  EXPECT_DOUBLE_EQ(k[0][0], 5.0);
  EXPECT_DOUBLE_EQ(k[1][1], 5.0);
  EXPECT_DOUBLE_EQ(k[0][1], 2.0);
  EXPECT_DOUBLE_EQ(k[0][0] * k[1][1] - k[0][1] * k[1][0], 21.0);
  MediumParams raman = MediumParams::soliton();
  raman.theta = 1.0;
  const auto r = matrix_m_2d(0.7, -0.3, 0.2, raman);
  EXPECT_DOUBLE_EQ(r[0][0], raman.eps_inf + raman.theta_r() * 0.2);
  EXPECT_DOUBLE_EQ(r[1][1], r[0][0]);
  EXPECT_DOUBLE_EQ(r[0][1], 0.0);
}

TEST(ConstitutiveMatrix2D, KerrDeterminantIdentityUsesSquaredEpsInf) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.5, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double ei = pos(rng), a = pos(rng), ex = u(rng), ey = u(rng);
    const auto m = matrix_m_2d(ex, ey, 0.0, pure_kerr(ei, a));
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double s = ex * ex + ey * ey;
    const double identity = ei * ei + 4.0 * a * ei * s + 3.0 * a * a * s * s;
    EXPECT_NEAR(det, identity, 1e-12 * identity);
  }
}

TEST(ConstitutiveMatrix3D, ValuesAndDeterminantIdentity) {
  const auto z = matrix_m_3d(0, 0, 0, 0, MediumParams::soliton());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(z[i][j], i == j ? 2.25 : 0.0);
  const auto k = matrix_m_3d(1, 1, 1, 0, pure_kerr(1.0, 1.0));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(k[i][i], 6.0);
  EXPECT_DOUBLE_EQ(k[0][1], 2.0);
  EXPECT_TRUE(check_solvability(k).positive_definite);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.5, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double ei = pos(rng), a = pos(rng), ex = u(rng), ey = u(rng), ez = u(rng);
    const auto m = matrix_m_3d(ex, ey, ez, 0.0, pure_kerr(ei, a));
    const double s = ex * ex + ey * ey + ez * ez;
    const double identity = (ei + a * s) * (ei + a * s) * (ei + 3.0 * a * s);
    EXPECT_NEAR(det3(m), identity, 1e-12 * identity);
  }
}

TEST(ConstitutiveMatrix, ExactlySymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto p = MediumParams::mms();
  for (int i = 0; i < 1000; ++i) {
    const auto m2 = matrix_m_2d(u(rng), u(rng), u(rng), p);
    EXPECT_EQ(m2[0][1], m2[1][0]);
    const auto m3 = matrix_m_3d(u(rng), u(rng), u(rng), u(rng), p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_EQ(m3[a][b], m3[b][a]);
  }
}

TEST(CheckSolvability, Examples) {
  const Mat2 id = {{{2.25, 0.0}, {0.0, 2.25}}};
  const auto s = check_solvability(id);
  EXPECT_TRUE(s.positive_definite);
  EXPECT_DOUBLE_EQ(s.min_eigenvalue, 2.25);
  const Mat2 indefinite = {{{1.0, 2.0}, {2.0, 1.0}}};
  const auto t = check_solvability(indefinite);
  EXPECT_FALSE(t.positive_definite);
  EXPECT_NEAR(t.min_eigenvalue, -1.0, 1e-14);
  EXPECT_FALSE(check_solvability(-0.5).positive_definite);
}

TEST(CheckSolvability, PureKerrIsAlwaysPositiveDefinite) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0), a(0.0, 5.0), ei(0.1, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const auto p = pure_kerr(ei(rng), a(rng));
    EXPECT_TRUE(check_solvability(matrix_m_1d(u(rng), 0.0, p)).positive_definite);
    const auto s2 = check_solvability(matrix_m_2d(u(rng), u(rng), 0.0, p));
    EXPECT_TRUE(s2.positive_definite);
    EXPECT_GT(s2.min_eigenvalue, 0.0);
    const auto s3 = check_solvability(matrix_m_3d(u(rng), u(rng), u(rng), 0.0, p));
    EXPECT_TRUE(s3.positive_definite);
    EXPECT_GT(s3.min_eigenvalue, 0.0);
  }
}

TEST(CheckSolvability, MinEigenvalue3DMatchesCharacteristicPolynomial) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto m = matrix_m_3d(u(rng), u(rng), u(rng), u(rng), MediumParams::mms());
    const double l = check_solvability(m).min_eigenvalue;
    Mat3 shifted = m;
    for (int d = 0; d < 3; ++d) shifted[d][d] -= l;
    EXPECT_NEAR(det3(shifted), 0.0, 1e-10);
  }
}

TEST(InterfaceWeight, EndpointsMidpointAndSlopes) {
  InterfaceModel im;
  im.r_gamma = 1.0;
  im.delta = 0.4;
  EXPECT_EQ(interface_weight(im.r_gamma - im.delta, im), 0.0);
  EXPECT_EQ(interface_weight(0.0, im), 0.0);
  EXPECT_DOUBLE_EQ(interface_weight(im.r_gamma, im), 0.5);
  EXPECT_EQ(interface_weight(im.r_gamma + im.delta, im), 1.0);
  const double h = 1e-7;
  for (double r : {im.r_gamma - im.delta / 2, im.r_gamma + im.delta / 2}) {
    const double left = (interface_weight(r, im) - interface_weight(r - h, im)) / h;
    const double right = (interface_weight(r + h, im) - interface_weight(r, im)) / h;
    EXPECT_NEAR(left, 0.0, 1e-5);
    EXPECT_NEAR(right, 0.0, 1e-5);
  }
}

TEST(InterfaceWeight, MonotoneAndContinuouslyDifferentiable) {
  InterfaceModel im;
  im.r_gamma = 0.5;
  im.delta = 0.1;
  double prev = -1.0, prev_slope = 0.0;
  const double step = 1e-4;
  for (double r = 0.3; r < 0.7; r += step) {
    const double w = interface_weight(r, im);
    EXPECT_GE(w, prev);
    const double slope = (interface_weight(r + step, im) - w) / step;
    if (prev >= 0.0) {
      EXPECT_LE(std::abs(slope - prev_slope), 9.0 * step / (im.delta * im.delta));
    }
    prev = w;
    prev_slope = slope;
  }
}

TEST(BlendParams, AirGlassAndMidpoint) {
  InterfaceModel im;
  im.center = {0.0, 0.0};
  im.r_gamma = 0.5;
  im.delta = 0.2;
  const auto air = blend_params(0.0, 0.0, im);
  EXPECT_EQ(air.a, 0.0);
  EXPECT_EQ(air.eps_inf, 1.0);
  EXPECT_EQ(air.omega_p, 0.0);
  const auto glass = blend_params(3.0, 4.0, im);
  const auto ref = MediumParams::soliton();
  EXPECT_EQ(glass.a, ref.a);
  EXPECT_EQ(glass.eps_inf, ref.eps_inf);
  EXPECT_EQ(glass.omega0, ref.omega0);
  EXPECT_EQ(glass.omega_p, ref.omega_p);
  EXPECT_EQ(glass.omega_v, ref.omega_v);
  EXPECT_EQ(glass.theta, ref.theta);
  const auto mid = blend_params(0.5, 0.0, im);
  EXPECT_NEAR(mid.a, 0.035, 1e-15);
  EXPECT_NEAR(mid.eps_inf, 1.625, 1e-15);
  EXPECT_EQ(mid.mu, ref.mu);
  EXPECT_EQ(mid.eps, ref.eps);
}

TEST(EnergyDensity, ComponentsSumToTotal) {
  const auto p = MediumParams::soliton();
  const auto e = energy_density(0.3, 1.2, 0.5, 0.7, 0.2, -0.4, p);
  const double parts = e.magnetic + e.electric + e.current + e.polarization + e.sigma + e.raman_cross + e.kerr + e.raman_q;
  EXPECT_NEAR(e.total, parts, 1e-12 * std::abs(parts));
  EXPECT_DOUBLE_EQ(e.magnetic, 0.15);
  EXPECT_DOUBLE_EQ(e.electric, 0.5 * 2.25 * 1.2);
  const double aet = p.a * p.eps * p.theta;
  EXPECT_DOUBLE_EQ(e.sigma, aet / (4.0 * p.omega_v * p.omega_v) * 0.16);
  const auto printed = energy_density(0.3, 1.2, 0.5, 0.7, 0.2, -0.4, p, SigmaTermForm::as_printed);
  EXPECT_DOUBLE_EQ(printed.sigma, aet / (4.0 * p.omega_p * p.omega_p) * 0.16);
}

TEST(EnergyDensity, NoLorentzTermsWithoutPlasmaFrequency) {
  MediumParams p = MediumParams::vacuum();
  const auto e = energy_density(0.0, 0.0, 4.0, 9.0, 0.0, 0.0, p);
  EXPECT_EQ(e.current, 0.0);
  EXPECT_EQ(e.polarization, 0.0);
  EXPECT_EQ(e.total, 0.0);
}

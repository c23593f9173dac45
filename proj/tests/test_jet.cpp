#include <gtest/gtest.h>

#include <cmath>

#include "hermite/jet.hpp"

using namespace hermite;

using J = Jet<double, 12>;

TEST(Jet, ProductOfVariablesMatchesBinomialSeries) {
  const J x = J::variable(0.5, 1.0, 8);
  const J y = x * x * x;
  // (0.5 + s)^3 = 0.125 + 0.75 s + 1.5 s^2 + s^3
  EXPECT_DOUBLE_EQ(y.get(0), 0.125);
  EXPECT_DOUBLE_EQ(y.get(1), 0.75);
  EXPECT_DOUBLE_EQ(y.get(2), 1.5);
  EXPECT_DOUBLE_EQ(y.get(3), 1.0);
  EXPECT_DOUBLE_EQ(y.get(4), 0.0);
}

TEST(Jet, SinCosExpSechTaylorCoefficients) {
  const double x0 = 0.3;
  const J x = J::variable(x0, 1.0, 10);
  const J s = sin(x), c = cos(x), e = exp(x), h = sech(x);
  double fact = 1.0;
  for (int k = 0; k < 10; ++k) {
    if (k) fact *= k;
    EXPECT_NEAR(s.get(k), std::sin(x0 + k * M_PI / 2) / fact, 1e-15);
    EXPECT_NEAR(c.get(k), std::cos(x0 + k * M_PI / 2) / fact, 1e-15);
    EXPECT_NEAR(e.get(k), std::exp(x0) / fact, 1e-15);
  }
  // sech' = -sech tanh
  EXPECT_NEAR(h.get(0), 1.0 / std::cosh(x0), 1e-15);
  EXPECT_NEAR(h.get(1), -std::tanh(x0) / std::cosh(x0), 1e-15);
}

TEST(Jet, QuotientInvertsProduct) {
  const J x = J::variable(1.3, 0.7, 9);
  const J a = exp(x) + 2.0;
  const J q = (a * x) / a;
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(q.get(k), x.get(k), 1e-14);
}

TEST(Jet, NestedJetsCarryMixedDerivatives) {
  using T = Jet<double, 3>;
  using L = Jet<T, 6>;
  // f(x, t) = x^2 t expanded about (1, 2): coefficient of s^1 t^1 is 2x = 2.
  const L x = L::variable(T(1.0), T(1.0), 4);
  const L t(T::variable(2.0, 1.0, 2));
  const L f = x * x * t;
  EXPECT_DOUBLE_EQ(f.get(0).get(0), 2.0);
  EXPECT_DOUBLE_EQ(f.get(1).get(0), 4.0);
  EXPECT_DOUBLE_EQ(f.get(1).get(1), 2.0);
  EXPECT_DOUBLE_EQ(f.get(2).get(1), 1.0);
}

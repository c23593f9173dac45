#include <gtest/gtest.h>

#include "hermite/padapt.hpp"

using namespace hermite;

TEST(SelectM, DropsNegligibleTail) {
  AdaptConfig cfg;
  cfg.eps_ptol = 1e-6;
  std::vector<double> stack = {1.0, 0.5, 1e-3, 1e-8};
  EXPECT_EQ(select_m(stack, 1, 4, 1, 3, cfg), 2);
  stack = {1.0, 1e-9, 1e-9, 1e-9};
  EXPECT_EQ(select_m(stack, 1, 4, 1, 3, cfg), 0);
  stack = {1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(select_m(stack, 1, 4, 1, 3, cfg), 3);
}

TEST(SelectM, TailMustVanishInEveryVariable) {
  AdaptConfig cfg;
  cfg.eps_ptol = 1e-6;
  std::vector<double> stack = {1.0, 0.0, 0.0, 1.0, 0.0, 0.5};
  EXPECT_EQ(select_m(stack, 2, 3, 1, 2, cfg), 2);
  stack[5] = 0.0;
  EXPECT_EQ(select_m(stack, 2, 3, 1, 2, cfg), 0);
}

TEST(SelectM, TwoDimensionsUseLargerIndex) {
  AdaptConfig cfg;
  cfg.eps_ptol = 1e-6;
  std::vector<double> stack(9, 0.0);  // side 3
  stack[0] = 1.0;
  stack[2 * 3 + 0] = 0.1;  // (k=0, l=2)
  EXPECT_EQ(select_m(stack, 1, 3, 2, 2, cfg), 2);
  stack[2 * 3 + 0] = 0.0;
  stack[1 * 3 + 1] = 0.1;
  EXPECT_EQ(select_m(stack, 1, 3, 2, 2, cfg), 1);
}

TEST(SelectM, RespectsBoundsAndRejectsBadInput) {
  AdaptConfig cfg;
  cfg.eps_ptol = 1e-6;
  cfg.m_min = 1;
  std::vector<double> zeros(4, 0.0);
  EXPECT_EQ(select_m(zeros, 1, 4, 1, 3, cfg), 1);
  cfg.m_min = 0;
  cfg.m_max = 2;
  std::vector<double> ones(4, 1.0);
  EXPECT_EQ(select_m(ones, 1, 4, 1, 3, cfg), 2);
  EXPECT_THROW(select_m(ones, 1, 3, 1, 3, cfg), std::invalid_argument);
  EXPECT_THROW(select_m(ones, 1, 2, 3, 3, cfg), std::invalid_argument);
  cfg.m_min = 5;
  EXPECT_FALSE(cfg.violations().empty());
}

TEST(SelectM, NeverRaisesOrder) {
  AdaptConfig cfg;
  std::vector<double> stack(7, 1.0);
  for (int m_in = 0; m_in <= 6; ++m_in) EXPECT_LE(select_m(stack, 1, 7, 1, m_in, cfg), m_in);
}

TEST(CellMbar, MinimumOfVertices) {
  EXPECT_EQ(cell_mbar(std::vector<int>{2, 3}), 2);
  EXPECT_EQ(cell_mbar(std::vector<int>{5, 5, 5, 5}), 5);
  EXPECT_EQ(cell_mbar(std::vector<int>{0, 6, 3, 1}), 0);
  EXPECT_THROW(cell_mbar(std::vector<int>{}), std::invalid_argument);
}

TEST(MStatistics, CountsDegreesOfFreedom) {
  const std::vector<int> ms(51, 3);
  const auto s = m_statistics(ms, 1, 6);
  EXPECT_EQ(s.dof, 1224);
  EXPECT_EQ(s.min, 3);
  EXPECT_EQ(s.max, 3);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  const auto t = m_statistics(std::vector<int>{0, 2}, 2, 9);
  EXPECT_EQ(t.dof, 9 * (1 + 9));
  EXPECT_DOUBLE_EQ(t.mean, 1.0);
  EXPECT_THROW(m_statistics(std::vector<int>{}, 1, 6), std::invalid_argument);
}

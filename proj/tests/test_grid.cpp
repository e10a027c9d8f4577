#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vspec/grid.hpp"

using vspec::RadialGrid;

TEST(Grid, NodesIncreasingWeightsPositive) {
  const auto g = RadialGrid::default_grid();
  EXPECT_LE(g.r_min(), 1e-4);
  EXPECT_DOUBLE_EQ(g.r_max(), 60.0);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_GT(g.r(i), g.r(i - 1));
  for (double w : g.weights()) ASSERT_GT(w, 0.0);
}

TEST(Grid, SpacingGeometricThenUniform) {
  const auto g = RadialGrid::default_grid();
  // ratio r_{i+1}/r_i constant near 0, difference constant far out
  EXPECT_NEAR(g.r(1) / g.r(0), g.r(11) / g.r(10), 1e-6);
  std::size_t i = g.size() - 100;
  EXPECT_NEAR(g.r(i + 1) - g.r(i), g.r(i + 51) - g.r(i + 50), 1e-12);
  EXPECT_LT(g.r(i + 1) - g.r(i), 0.021);
}

TEST(Grid, MeasureReproduced) {
  for (double rmax : {40.0, 60.0, 200.0}) {
    const auto g = RadialGrid::make(1e-4, rmax, 0.02);
    const std::vector<double> one(g.size(), 1.0);
    const double exact = 0.5 * (rmax * rmax - 1e-8);
    EXPECT_NEAR(g.integrate(one) / exact, 1.0, 1e-10) << rmax;
  }
}

TEST(Grid, SmoothIntegrands) {
  const auto g = RadialGrid::default_grid();
  std::vector<double> f(g.size()), h(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r(i);
    f[i] = std::exp(-r * r);
    h[i] = std::cos(r) * std::exp(-0.1 * r);
  }
  const double rmin = g.r_min(), rmax = g.r_max();
  EXPECT_NEAR(g.integrate(f), 0.5 * (std::exp(-rmin * rmin) - std::exp(-rmax * rmax)), 1e-12);
  // int r cos r e^{-r/10} dr, antiderivative by parts
  auto anti = [](double r) {
    const double a = -0.1;
    const std::complex<double> z(a, 1.0);
    const auto v = std::exp(z * r) * (r / z - 1.0 / (z * z));
    return v.real();
  };
  EXPECT_NEAR(g.integrate(h), anti(rmax) - anti(rmin), 1e-10);
}

TEST(Grid, GregoryExactForPolynomials) {
  const auto c = vspec::gregory_corrections(8);
  const int n = 20;
  for (int d = 0; d < 8; ++d) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      double w = (j == 0 || j == n) ? 0.5 : 1.0;
      if (j < 8) w += c[j];
      if (n - j < 8) w += c[n - j];
      s += w * std::pow(static_cast<double>(j), d);
    }
    const double exact = std::pow(static_cast<double>(n), d + 1) / (d + 1);
    EXPECT_NEAR(s / exact, 1.0, 1e-12) << d;
  }
}

TEST(Grid, FornbergClassicStencils) {
  const auto w = vspec::fornberg_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  EXPECT_NEAR(w[1][0], -0.5, 1e-15);
  EXPECT_NEAR(w[1][2], 0.5, 1e-15);
  EXPECT_NEAR(w[2][0], 1.0, 1e-15);
  EXPECT_NEAR(w[2][1], -2.0, 1e-15);
}

TEST(Grid, DifferencesConverge) {
  const auto g = RadialGrid::make(1e-4, 40.0, 0.02);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::sin(g.r(i)) * std::exp(-0.05 * g.r(i));
  for (int order : {4, 6}) {
    const auto d1 = g.d_dr(f, order);
    const auto d2 = g.d2_dr2(f, order);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r(i), ex = std::exp(-0.05 * r);
      const double fp = ex * (std::cos(r) - 0.05 * std::sin(r));
      const double fpp = ex * (-std::sin(r) - 0.1 * std::cos(r) + 0.0025 * std::sin(r));
      // near the origin the map amplifies s-differences by 1/r and 1/r^2
      e1 = std::max(e1, std::min(1.0, r) * std::abs(d1[i] - fp));
      e2 = std::max(e2, std::min(1.0, r * r) * std::abs(d2[i] - fpp));
    }
    EXPECT_LT(e1, order == 4 ? 1e-7 : 1e-9) << order;
    EXPECT_LT(e2, order == 4 ? 1e-5 : 1e-7) << order;
  }
}

TEST(Grid, RandomPolynomialMomentsProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = RadialGrid::make(1e-4, 10.0, 0.02);
  for (int trial = 0; trial < 20; ++trial) {
    double c[4];
    for (double& v : c) v = u(gen);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r(i);
      f[i] = c[0] + c[1] * r + c[2] * r * r + c[3] * r * r * r;
    }
    auto mom = [&](double r) {
      return c[0] * r * r / 2 + c[1] * std::pow(r, 3) / 3 + c[2] * std::pow(r, 4) / 4 + c[3] * std::pow(r, 5) / 5;
    };
    const double exact = mom(10.0) - mom(1e-4);
    EXPECT_NEAR(g.integrate(f), exact, 1e-9 * (1.0 + std::abs(exact)));
  }
}

TEST(Grid, InvalidParametersThrow) {
  EXPECT_THROW(RadialGrid::make(0.0, 10.0, 0.02), std::invalid_argument);
  EXPECT_THROW(RadialGrid::make(1.0, 0.5, 0.02), std::invalid_argument);
}

TEST(Grid, EveryOtherKeepsEvenNodes) {
  for (double ds : {0.02, 0.037, 0.1}) {
    const auto g = RadialGrid::make(1e-4, 30.0, ds);
    ASSERT_EQ(g.size() % 2, 1u) << ds;
    const auto c = g.every_other();
    ASSERT_EQ(c.size(), (g.size() + 1) / 2);
    EXPECT_DOUBLE_EQ(c.ds(), 2.0 * g.ds());
    for (std::size_t i = 0; i < c.size(); ++i) ASSERT_EQ(c.r(i), g.r(2 * i)) << ds << " " << i;
    EXPECT_EQ(c.r_max(), g.r_max());
  }
}

TEST(Grid, EveryOtherQuadratureConverges) {
  const auto g = RadialGrid::make(1e-4, 20.0, 0.2);
  const auto c = g.every_other();
  // int exp(-r^2) cos(2 r) r dr over the grid range
  auto err = [](const RadialGrid& grid) {
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::exp(-grid.r(i) * grid.r(i)) * std::cos(2 * grid.r(i));
    const double a = grid.r_min();
    // composite Simpson reference
    double ref = 0.0;
    const int n = 2000000;
    const double h = (20.0 - a) / n;
    for (int j = 0; j <= n; ++j) {
      const double r = a + h * j;
      const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      ref += w * std::exp(-r * r) * std::cos(2 * r) * r;
    }
    ref *= h / 3.0;
    return std::abs(grid.integrate(f) - ref);
  };
  const double ef = err(g), ec = err(c);
  EXPECT_LT(ef, 1e-8);
  EXPECT_GT(ec, 4.0 * ef);
}

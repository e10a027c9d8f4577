#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "vspec/eigen.hpp"

using namespace vspec;

// Regression of log|b_flat - 1| against 2 log xi + 2 log|ln xi| over [1e-3, 0.3].
// With b^2 + c^2 = 1 and |c| = O(xi^2 ln^2 xi), b - 1 = -c^2/2 + O(c^4) is an
// order smaller, and near 1e-3 it sits at the rounding floor. Kept as stated.
TEST(CoefficientLaw, FlatSlopeAgainstLogSquare) {
  const auto& p = vspec::testing::shared_profile();
  std::vector<double> x, y;
  for (double xi = 1e-3; xi <= 0.3 * (1 + 1e-12); xi *= std::pow(300.0, 1.0 / 24.0)) {
    const auto d = decompose(eigenfunction(SpectralPoint::from_xi(xi), p, p.grid), Regime::FlatLow);
    const double dev = std::abs(d.b - 1.0);
    if (dev == 0.0) continue;
    x.push_back(2.0 * std::log(xi) + 2.0 * std::log(std::abs(std::log(xi))));
    y.push_back(std::log(dev));
  }
  ASSERT_GE(x.size(), 10u);
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  RecordProperty("slope", std::to_string(slope));
  EXPECT_NEAR(slope, 1.0, 0.3);
}

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "support.hpp"
#include "vspec/eigen.hpp"
#include "vspec/special.hpp"

using namespace vspec;
using vspec::testing::shared_profile;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const RadialGrid> grid_of(const VortexProfile& p) { return p.grid; }

Eigenfunction eig_xi(double xi, const EigenOptions& opt = {}) {
  const auto& p = shared_profile();
  return eigenfunction(SpectralPoint::from_xi(xi), p, grid_of(p), opt);
}

std::size_t node_at(const RadialGrid& g, double r) {
  const auto& rs = g.r();
  return static_cast<std::size_t>(std::lower_bound(rs.begin(), rs.end(), r) - rs.begin());
}

}  // namespace

TEST(Cutoff, SupportAndSmoothness) {
  EXPECT_EQ(cutoff(0.0), 1.0);
  EXPECT_EQ(cutoff(1.0), 1.0);
  EXPECT_EQ(cutoff(2.0), 0.0);
  EXPECT_EQ(cutoff(5.0), 0.0);
  EXPECT_NEAR(cutoff(1.5), 0.5, 1e-15);
  for (double x = 1.0; x < 2.0; x += 0.01) ASSERT_GE(cutoff(x), cutoff(x + 0.01));
}

TEST(MatchRadius, Defaults) {
  EXPECT_DOUBLE_EQ(default_match_radius(10.0, 60.0), 2.0);
  EXPECT_DOUBLE_EQ(default_match_radius(0.5, 60.0), 4.0);
  EXPECT_DOUBLE_EQ(default_match_radius(1e-3, 60.0), 20.0);
}

TEST(Match, HighFrequencyLimitVector) {
  // direction of (alpha3, alpha4, beta1, beta2) -> (1, 0, 0, 1)/sqrt(2) + O(1/xi)
  const auto& p = shared_profile();
  for (double lam : {4.0, 16.0, 64.0, 400.0}) {
    const auto sp = SpectralPoint::from_lambda(lam);
    const auto b = fundamental_basis(sp, p, *p.grid, default_match_radius(sp.xi, p.grid->r_max()));
    const auto m = match(b, p);
    const Eigen::Vector4d v(m.coeffs.alpha3, m.coeffs.alpha4, m.coeffs.beta1, m.coeffs.beta2);
    const Eigen::Vector4d ref = Eigen::Vector4d(1.0, 0.0, 0.0, 1.0) / std::sqrt(2.0);
    EXPECT_LE((v.normalized() - ref).norm() * sp.xi, 2.0) << lam;
    EXPECT_NEAR(v.norm(), std::sqrt(kPi), 2.0 / sp.xi) << lam;
    // the decaying part carries a negligible share at the matching radius
    const double k1 = special::bessel({special::Family::K, 1}, sp.kappa * b.r_match);
    EXPECT_LE(std::abs(m.coeffs.alpha2) * k1, 1.0 / sp.xi) << lam;
  }
}

TEST(Match, LowFrequencyLimitVector) {
  const auto& p = shared_profile();
  const double lam = 0.05;
  const auto sp = SpectralPoint::from_lambda(lam);
  const auto b = fundamental_basis(sp, p, *p.grid, default_match_radius(sp.xi, p.grid->r_max()));
  const auto c = match(b, p).coeffs;
  const double bound = lam * lam * std::pow(std::log(lam), 2);
  const double s = std::sqrt(kPi);
  EXPECT_LE(std::abs(c.alpha3 - s), 3.0 * bound);
  EXPECT_LE(std::abs(c.alpha4), 3.0 * bound);
  EXPECT_LE(std::abs(c.beta2 - s), 3.0 * bound);
}

TEST(Match, LowFrequencyLawAfterNormalizationDrift) {
  // alpha3^2 + alpha4^2 = pi/(2 C^2) moves the weights by O(lambda) through C;
  // with that factor removed the approach to sqrt(pi) is O(lambda^2 ln^2 lambda)
  const auto& p = shared_profile();
  for (double lam : {1e-3, 1e-2, 5e-2}) {
    const auto sp = SpectralPoint::from_lambda(lam);
    const auto b = fundamental_basis(sp, p, *p.grid, default_match_radius(sp.xi, p.grid->r_max()));
    const auto c = match(b, p).coeffs;
    const double f = std::sqrt(2.0) * std::abs(c_lambda(sp));
    const double bound = lam * lam * std::pow(std::log(lam), 2);
    EXPECT_LE(std::abs(f * c.alpha3 - std::sqrt(kPi)), 2.0 * bound) << lam;
    EXPECT_LE(std::abs(f * c.beta2 - std::sqrt(kPi)), 2.0 * bound) << lam;
  }
}

TEST(Match, RankGapAndResidual) {
  const auto& p = shared_profile();
  for (double xi : {1e-3, 0.05, 0.5, 2.0, 20.0}) {
    const auto sp = SpectralPoint::from_xi(xi);
    const auto b = fundamental_basis(sp, p, *p.grid, default_match_radius(xi, p.grid->r_max()));
    const auto m = match(b, p);
    EXPECT_GE(m.gap, 1e3) << xi;
    EXPECT_LE(m.residual, 1e-8) << xi;
    EXPECT_GT(m.coeffs.alpha3 * m.coeffs.alpha3 + m.coeffs.alpha4 * m.coeffs.alpha4, 0.0);
  }
  EigenOptions strict;
  strict.rank_gap = 1e300;
  const auto sp = SpectralPoint::from_xi(1.0);
  EXPECT_THROW(match(fundamental_basis(sp, p, *p.grid, 2.0, strict), p, strict), RankDeficiency);
}

TEST(Match, TwoRadiusConsistency) {
  const auto& p = shared_profile();
  for (double xi : {1e-3, 0.03, 0.3, 1.0, 5.0, 20.0}) {
    EXPECT_LE(two_radius_consistency(SpectralPoint::from_xi(xi), p, *p.grid), 1e-4) << xi;
  }
}

TEST(Eigenfunction, NormalizationAndGluing) {
  for (double xi : {1e-3, 0.1, 1.0, 7.0, 20.0}) {
    const auto e = eig_xi(xi);
    EXPECT_NEAR(e.gamma1 * e.gamma1 + e.gamma2 * e.gamma2, 1.0, 1e-10) << xi;
    const double a = e.coeffs.alpha3 * e.coeffs.alpha3 + e.coeffs.alpha4 * e.coeffs.alpha4;
    EXPECT_NEAR(a, kPi / (2.0 * std::pow(c_lambda(e.sp), 2)), 1e-10 * a);
    EXPECT_LE(e.match_jump, 1e-7) << xi;
    EXPECT_GT(e.origin_slope, 0.0);
    for (std::size_t i = 0; i < e.size(); ++i) ASSERT_TRUE(e.states[i].allFinite());
  }
}

TEST(Eigenfunction, ZeroFrequencyLimit) {
  const auto& p = shared_profile();
  const auto e = eig_xi(1e-3);
  const std::size_t i = node_at(*p.grid, 1.0);
  const double ref = std::sqrt(kPi / 4.0) * p.at(p.grid->r(i)).f;
  EXPECT_NEAR(e.value(i)(0), ref, 0.02);
  EXPECT_NEAR(e.value(i)(1), -ref, 0.02);
}

TEST(Eigenfunction, FarFieldSinusoid) {
  // least-squares fit of A sin + B cos to sqrt(xi r) psi.e over xi r in [30, 60]
  const auto& p = shared_profile();
  for (double xi : {2.0, 5.0}) {
    const auto e = eig_xi(xi);
    Eigen::MatrixXd a(0, 2);
    Eigen::VectorXd y(0);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double x = xi * p.grid->r(i);
      if (x >= 30.0 && x <= 60.0) idx.push_back(i);
    }
    a.resize(static_cast<Eigen::Index>(idx.size()), 2);
    y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double x = xi * p.grid->r(idx[k]);
      a(static_cast<Eigen::Index>(k), 0) = std::sin(x);
      a(static_cast<Eigen::Index>(k), 1) = std::cos(x);
      y(static_cast<Eigen::Index>(k)) = std::sqrt(x) * e.value(idx[k]).dot(e.sp.e);
    }
    const Eigen::Vector2d fit = a.colPivHouseholderQr().solve(y);
    EXPECT_LE((a * fit - y).cwiseAbs().maxCoeff(), 0.05) << xi;
    // the fitted phase pair agrees with the normalization data
    EXPECT_NEAR(fit(0), e.gamma1, 0.05);
    EXPECT_NEAR(fit(1), e.gamma2, 0.05);
  }
}

TEST(Eigenfunction, EnvelopeExponent) {
  const auto& p = shared_profile();
  const double xi = 2.0;
  const auto e = eig_xi(xi);
  // amplitude from the eigenfunction and its conjugate Jost partner
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = e.match_index; i < e.size(); ++i) {
    const double r = p.grid->r(i);
    if (xi * r < 10.0) continue;
    const Eigen::Vector2d c(e.conjugate[i](0), e.conjugate[i](2));
    const double amp = std::hypot(e.value(i).dot(e.sp.e), c.dot(e.sp.e));
    const double lx = std::log(r), ly = std::log(amp);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(Eigenfunction, ParityByConstruction) {
  const auto a = eig_xi(1.3), b = eig_xi(-1.3);
  for (std::size_t i = 0; i < a.size(); i += 11) {
    ASSERT_EQ(b.value(i)(0), -a.value(i)(1));
    ASSERT_EQ(b.value(i)(1), -a.value(i)(0));
  }
  EXPECT_NEAR(b.sp.e(0), -a.sp.e(1), 1e-15);
}

TEST(Eigenfunction, ConjugateWronskianIsOne) {
  for (double xi : {0.05, 1.0, 10.0}) {
    const auto e = eig_xi(xi);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = e.match_index; i < e.size(); i += 5) {
      const double w = wronskian(e.conjugate_sample(i), e.sample(i)).real();
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    EXPECT_NEAR(lo, 1.0, 1e-6) << xi;
    EXPECT_NEAR(hi, 1.0, 1e-6) << xi;
  }
}

TEST(Eigenfunction, OutgoingJostWronskian) {
  // W(F1, G1) = i xi / 2 for G1 = sqrt(xi) psi, F1 = sqrt(xi)/2 (psi + i psi_perp)
  const auto sp = SpectralPoint::from_lambda(1.0);
  const auto e = eig_xi(sp.xi);
  const std::size_t i = (e.match_index + e.size()) / 2;
  SolutionSample g = e.sample(i), f = e.sample(i);
  const auto perp = e.conjugate_sample(i);
  g.value *= std::sqrt(sp.xi);
  f.value = 0.5 * std::sqrt(sp.xi) * (f.value + std::complex<double>(0.0, 1.0) * perp.value);
  const auto w = wronskian(f, g);
  EXPECT_NEAR(w.real(), 0.0, 1e-3);
  EXPECT_NEAR(w.imag(), sp.xi / 2.0, 1e-3);
}

TEST(Eigenfunction, FarSeedRadiusInsensitive) {
  EigenOptions a, b;
  b.far_radius = 2.0 * a.far_radius;
  for (double xi : {0.01, 1.0, 15.0}) {
    const auto ea = eig_xi(xi, a), eb = eig_xi(xi, b);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      num = std::max(num, (ea.value(i) - eb.value(i)).norm());
      den = std::max(den, ea.value(i).norm());
    }
    EXPECT_LE(num / den, 1e-4) << xi;
  }
}

TEST(Eigenfunction, ZeroFrequencyRejected) {
  EXPECT_THROW(eig_xi(0.0), std::invalid_argument);
}

TEST(Scattering, LowFrequencyCoefficients) {
  const double xi = 0.01;
  const auto d = scattering_coeffs(eig_xi(xi));
  EXPECT_EQ(d.regime, Regime::FlatLow);
  EXPECT_NEAR(d.b * d.b + d.c * d.c, 1.0, 1e-8);
  EXPECT_LE(std::abs(d.b - 1.0), 50.0 * xi * xi * std::pow(std::log(xi), 2));
  EXPECT_LE(std::abs(d.c), 50.0 * xi * xi * std::pow(std::log(xi), 2));
}

TEST(Scattering, HighFrequencyCoefficients) {
  const auto& p = shared_profile();
  const double xi = 20.0;
  const auto e = eig_xi(xi);
  const auto d = scattering_coeffs(e);
  EXPECT_EQ(d.regime, Regime::SharpHigh);
  EXPECT_NEAR(d.b * d.b + d.c * d.c, 1.0, 1e-8);
  EXPECT_NEAR(d.b, -1.0 / std::sqrt(2.0), 0.1);
  EXPECT_NEAR(d.c, 1.0 / std::sqrt(2.0), 0.1);
  EXPECT_NEAR(d.a, std::sqrt(kPi / 2.0), 0.1);
  // |psi^R| <= 2 / (xi <r> <xi r>^{1/2}) for xi r >= 10
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double r = p.grid->r(i);
    if (xi * r < 10.0) continue;
    const double env = 1.0 / (xi * std::sqrt(1.0 + r * r) * std::pow(1.0 + xi * xi * r * r, 0.25));
    worst = std::max(worst, d.regular_part[i].norm() / env);
  }
  EXPECT_LE(worst, 2.0);
}

TEST(Scattering, SharpCoefficientRate) {
  for (double xi : {5.0, 10.0, 20.0}) {
    const auto d = decompose(eig_xi(xi), Regime::SharpHigh);
    EXPECT_LE(std::abs(d.b + 1.0 / std::sqrt(2.0)) + std::abs(d.c - 1.0 / std::sqrt(2.0)), 5.0 / xi) << xi;
  }
}

TEST(Scattering, GapRegimePicksSmallerRemainder) {
  const auto e = eig_xi(1.0);
  const auto d = scattering_coeffs(e);
  const auto lo = decompose(e, Regime::FlatLow), hi = decompose(e, Regime::SharpHigh);
  EXPECT_EQ(d.regular_sup, std::min(lo.regular_sup, hi.regular_sup));
}

TEST(Scattering, ParityOfParts) {
  const auto a = decompose(eig_xi(0.2), Regime::FlatLow), b = decompose(eig_xi(-0.2), Regime::FlatLow);
  for (std::size_t i = 0; i < a.singular_part.size(); i += 13) {
    ASSERT_NEAR(b.singular_part[i](0), -a.singular_part[i](1), 1e-14);
    ASSERT_NEAR(b.regular_part[i](1), -a.regular_part[i](0), 1e-14);
  }
}

TEST(FrequencyGrid, QuadratureAndSpacing) {
  const auto g = FrequencyGrid::make(1e-3, 20.0, 0.04);
  EXPECT_DOUBLE_EQ(g.xi.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.xi.back(), 20.0);
  // geometric near 0, uniform far out
  EXPECT_NEAR(g.xi[1] / g.xi[0], g.xi[2] / g.xi[1], 1e-3);
  const std::size_t n = g.size();
  EXPECT_NEAR(g.xi[n - 1] - g.xi[n - 2], g.xi[n - 2] - g.xi[n - 3], 1e-9);
  double s = 0.0, t = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    s += g.weights[k] * g.xi[k] * std::exp(-g.xi[k]);
    t += g.weights[k];
  }
  const auto anti = [](double x) { return -(x + 1.0) * std::exp(-x); };
  EXPECT_NEAR(s, anti(20.0) - anti(1e-3), 1e-9);
  EXPECT_NEAR(t, 20.0 - 1e-3, 1e-9);
  EXPECT_GT(g.refined().size(), 2 * n - 3);
}

TEST(Table, SymmetryCacheAndErrors) {
  const auto& p = shared_profile();
  const auto xg = FrequencyGrid::make(0.01, 4.0, 0.5);
  TableOptions opt;
  opt.threads = 2;
  const auto t = build_table(p, xg, p.grid, opt);
  ASSERT_EQ(t.size(), xg.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t i = 0; i < p.grid->size(); i += 101) {
      const auto plus = t.value(k, 1, i), minus = t.value(k, -1, i);
      ASSERT_EQ(minus(0), -plus(1));
      ASSERT_EQ(minus(1), -plus(0));
    }
    EXPECT_GE(t.entry(k).gap, 1e3);
  }
  EXPECT_NEAR(t.zero_u()[500], -t.zero_v()[500], 0.0);

  const auto path = (std::filesystem::temp_directory_path() / "vspec_table_test.bin").string();
  save_table(t, path, "key-1");
  EigenTable back;
  EXPECT_FALSE(load_table(path, "key-2", back));
  ASSERT_TRUE(load_table(path, "key-1", back));
  ASSERT_EQ(back.size(), t.size());
  EXPECT_TRUE(back.grid()->same_as(*t.grid()));
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(back.entry(k).xi, t.entry(k).xi);
    EXPECT_TRUE(back.entry(k).u == t.entry(k).u);
    EXPECT_TRUE(back.entry(k).v == t.entry(k).v);
    EXPECT_EQ(back.entry(k).gamma2, t.entry(k).gamma2);
  }
  std::filesystem::remove(path);

  TableOptions bad;
  bad.eigen.rank_gap = 1e300;
  try {
    build_table(p, xg, p.grid, bad);
    FAIL() << "expected TableBuildError";
  } catch (const TableBuildError& e) {
    EXPECT_EQ(e.failed().size(), xg.size());
  }
}

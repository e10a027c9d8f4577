#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support.hpp"
#include "vspec/evolve.hpp"

using namespace vspec;
using vspec::testing::evolve_profile;
using vspec::testing::evolve_table;

namespace {

RadialField gaussian_data(double s) {
  RadialField f(evolve_profile().grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f.grid->r(i), g = std::exp(-r * r / (2.0 * s * s));
    f.u[i] = r * g * (1.0 + 0.2 * r * r / (s * s));
    f.v[i] = 0.5 * r * g;
  }
  return f;
}

// Band-limited initial density (content below xi = 2.5) of Gaussian data.
SpectralDensity initial_density(double s, bool orthogonal) {
  auto f = gaussian_data(s);
  if (orthogonal) f = project_orthogonal(f, evolve_profile());
  return band_limit(forward(f, evolve_table()), 2.5);
}

std::vector<double> log_times(double t0, double t1, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = t0 * std::pow(t1 / t0, j / double(n - 1));
  return t;
}

RadialField sigma1(const RadialField& f) {
  RadialField g = f;
  std::swap(g.u, g.v);
  return g;
}

}  // namespace

TEST(FitDecay, SyntheticPowerLaw) {
  const auto t = log_times(1.0, 100.0, 9);
  std::vector<double> n;
  for (double x : t) n.push_back(3.0 / x);
  const auto f = fit_decay(t, n);
  EXPECT_NEAR(f.exponent, -1.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_THROW(fit_decay({1, 2, 3, 4}, {1, 1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(fit_decay({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(fit_decay({1, 2, 4, 8, 10}, {1, 1, 0, 1, 1}), std::invalid_argument);
}

TEST(Orthogonality, Pairings) {
  const auto& p = evolve_profile();
  RadialField a(p.grid), x1(p.grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = p.grid->r(i), g = std::exp(-r * r / 10.0) + 0.5;
    a.u[i] = p.rho[i] * g;
    a.v[i] = -p.rho[i] * g;
    x1.u[i] = x1.v[i] = r * p.drho[i] + p.rho[i];
  }
  EXPECT_EQ(orthogonality(a, p).first, cplx(0.0));
  // independent Simpson quadrature of int 2 rho (r rho' + rho) r dr from the
  // continuous profile, on the same interval
  const std::size_t n = 400000;
  const double lo = p.grid->r_min(), hi = p.grid->r_max(), h = (hi - lo) / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double r = lo + h * static_cast<double>(j);
    const auto jet = p.at(r);
    const double c = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    s += c * 2.0 * jet.f * (r * jet.df + jet.f) * r;
  }
  s *= h / 3.0;
  const auto pr = orthogonality(x1, p);
  EXPECT_GT(pr.first.real(), 0.0);
  EXPECT_NEAR(pr.first.real(), s, 1e-8 * s);
  const auto z = orthogonality(RadialField(p.grid), p);
  EXPECT_EQ(z.first, cplx(0.0));
  EXPECT_EQ(z.second, cplx(0.0));
  const auto proj = project_orthogonal(gaussian_data(1.5), p);
  EXPECT_LE(std::abs(orthogonality(proj, p).first), 1e-12 * std::abs(orthogonality(gaussian_data(1.5), p).first));
}

TEST(Propagate, IdentityAtZero) {
  const auto& t = evolve_table();
  const auto f0 = inverse(initial_density(1.5, false), t);
  const auto r = propagate(f0, 0.0, t);
  EXPECT_LE((r.field - f0).l2_norm() / f0.l2_norm(), 1e-3);
  EXPECT_EQ(l2_growth(f0, {0.0}, t).front(), f0.l2_norm());
}

TEST(Propagate, SpectralNormInvariant) {
  const auto z = initial_density(1.5, false);
  const auto norm = [](const SpectralDensity& d, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const cplx m = std::polar(1.0, t * lambda_of_xi(d.grid.xi[k]));
      s += d.grid.weights[k] * d.grid.xi[k] * (std::norm(m * d.plus[k]) + std::norm(std::conj(m) * d.minus[k]));
    }
    return s;
  };
  EXPECT_NEAR(norm(z, 37.0), norm(z, 0.0), 1e-14 * norm(z, 0.0));
}

TEST(Propagate, PairingConserved) {
  const auto& t = evolve_table();
  const auto& p = evolve_profile();
  const auto z = initial_density(1.5, true);
  const auto f0 = inverse(z, t);
  const auto scale = std::abs(orthogonality(inverse(initial_density(1.5, false), t), p).first);
  EXPECT_LE(std::abs(orthogonality(f0, p).first), 1e-4 * scale);
  for (double time : {1.0, 5.0, 20.0}) {
    EXPECT_LE(std::abs(orthogonality(propagate_density(z, time, t).field, p).first), 1e-4 * scale) << time;
  }
}

TEST(Propagate, GroupProperty) {
  const auto& t = evolve_table();
  const auto z = initial_density(1.5, false);
  const auto direct = propagate_density(z, 3.0, t).field;
  const auto half = propagate_density(z, 1.0, t).field;
  const auto twice = propagate(half, 2.0, t).field;
  EXPECT_LE((twice - direct).l2_norm() / direct.l2_norm(), 1e-3);
}

TEST(Propagate, Sigma1Conjugation) {
  const auto& t = evolve_table();
  const auto f = inverse(initial_density(1.5, false), t);
  const auto a = propagate(sigma1(f), 4.0, t).field;
  const auto b = sigma1(propagate(f, -4.0, t).field);
  EXPECT_LE((a - b).l2_norm(), 1e-10 * f.l2_norm());
}

TEST(Propagate, RefusesUnresolvedPhase) {
  const auto& t = evolve_table();
  const auto f = gaussian_data(1.5);
  try {
    propagate(f, 400.0, t);
    FAIL() << "expected UnresolvedPhase";
  } catch (const UnresolvedPhase& e) {
    EXPECT_GT(e.step(), std::numbers::pi / 4.0);
  }
  PropagateOptions lax;
  lax.refuse = false;
  EXPECT_GT(propagate(f, 400.0, t, lax).phase_step, std::numbers::pi / 4.0);
}

TEST(Propagate, ShortTimeBound) {
  const auto& t = evolve_table();
  const auto z = initial_density(1.5, false);
  const auto f0 = inverse(z, t);
  double weighted = 0.0;  // |phi|_{L^{2,2}}
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const double r = f0.grid->r(i);
    weighted += f0.grid->weights()[i] * (1.0 + r * r) * (1.0 + r * r) * (std::norm(f0.u[i]) + std::norm(f0.v[i]));
  }
  weighted = std::sqrt(weighted);
  double c = 0.0;
  for (double time : log_times(0.05, 1.0, 6)) c = std::max(c, time * propagate_density(z, time, t).sup_norm);
  EXPECT_LE(c, weighted);
}

TEST(Dispersion, GenericDataDecaysLikeTwoThirds) {
  const auto& t = evolve_table();
  const auto z = initial_density(1.0, false);
  std::vector<double> times = log_times(10.0, 100.0, 9), sup;
  EvolutionResult last;
  for (double time : times) {
    last = propagate_density(z, time, t);
    sup.push_back(last.sup_norm);
  }
  const auto fit = fit_decay(times, sup);
  EXPECT_GE(fit.exponent, -0.75);
  EXPECT_LE(fit.exponent, -0.58);
  EXPECT_GE(last.argmax_r / last.t, 1.2);
  EXPECT_LE(last.argmax_r / last.t, 1.7);
}

TEST(Dispersion, OrthogonalDataDecaysLikeOne) {
  const auto& t = evolve_table();
  const auto z = initial_density(1.0, true);
  std::vector<double> times = log_times(10.0, 100.0, 9), sup;
  for (double time : times) sup.push_back(propagate_density(z, time, t).sup_norm);
  const auto fit = fit_decay(times, sup);
  EXPECT_GE(fit.exponent, -1.1);
  EXPECT_LE(fit.exponent, -0.85);
}

TEST(Dispersion, L2Dichotomy) {
  const auto& t = evolve_table();
  const auto times = log_times(10.0, 100.0, 7);
  const auto grow = l2_growth(inverse(initial_density(3.0, false), t), times, t);
  EXPECT_GE(grow.back() / grow.front(), 1.05);
  EXPECT_LE(grow.back() / grow.front(), 2.5);
  // norm^2 grows against ln t
  std::vector<double> sq;
  for (double g : grow) sq.push_back(g * g);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = std::log(times[i]);
    sx += x;
    sy += sq[i];
    sxx += x * x;
    sxy += x * sq[i];
  }
  EXPECT_GT(static_cast<double>(times.size()) * sxy - sx * sy, 0.0);
  const auto flat = l2_growth(inverse(initial_density(3.0, true), t), times, t);
  EXPECT_LE(*std::max_element(flat.begin(), flat.end()) / *std::min_element(flat.begin(), flat.end()), 1.2);
}

TEST(ModelIntegral, StationaryPoint) {
  EXPECT_EQ(stationary_point(10.0, 10.0), -1.0);
  EXPECT_NEAR(stationary_point(10.0, 10.0 * std::sqrt(2.0)), 0.0, 1e-7);
  for (double q : {1.5, 2.0, 3.0}) {
    EXPECT_NEAR(dlambda_of_xi(stationary_point(1.0, q)), q, 1e-12);
  }
  // xi0 ~ (r/t - sqrt 2)^{1/2}
  const double a = stationary_point(1.0, std::sqrt(2.0) + 1e-4), b = stationary_point(1.0, std::sqrt(2.0) + 4e-4);
  EXPECT_NEAR(b / a, 2.0, 1e-3);
}

namespace {

double bump_phi(double x) {
  const double y = x / 1.5;
  return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) * (1.0 + 0.3 * x) : 0.0;
}

double weight(double x, double r) { return std::pow(1.0 + x * x * r * r, -0.25); }

}  // namespace

TEST(ModelIntegral, MatchesBruteForce) {
  for (double q : {0.5, std::sqrt(2.0), 1.6}) {
    const double t = 50.0, r = q * t;
    const auto m = model_integral(t, r, bump_phi, weight);
    const cplx ref = model_integral_reference(t, r, bump_phi, weight, 1.5, 1000000);
    EXPECT_LE(std::abs(m.value - ref), 1e-6 * std::max(1.0, std::abs(ref))) << q;
  }
}

TEST(ModelIntegral, OffConeDecay) {
  double c = 0.0;
  std::vector<double> scaled;
  for (double t : {20.0, 40.0, 80.0, 160.0}) {
    const double v = std::abs(model_integral(t, 0.8 * t, bump_phi, weight).value);
    scaled.push_back(t * v);
  }
  c = *std::max_element(scaled.begin(), scaled.end());
  EXPECT_LE(scaled.back(), c);
  EXPECT_LE(scaled.back(), 2.0 * scaled.front());
}

#include "vspec/odesys.hpp"

#include <cmath>
#include <stdexcept>

#include "vspec/special.hpp"

namespace vspec {

Eigen::Matrix4d phipsi_state_matrix(const SpectralPoint& sp) {
  const Eigen::Matrix2d m = phipsi_matrix(sp);
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      t(2 * i, 2 * j) = m(i, j);
      t(2 * i + 1, 2 * j + 1) = m(i, j);
    }
  }
  return t;
}

SolutionSample to_phipsi(const SpectralPoint& sp, const SolutionSample& s) {
  if (s.rep == Representation::PhiPsi) return s;
  SolutionSample out = s;
  out.value = phipsi_state_matrix(sp).cast<std::complex<double>>() * s.value;
  out.rep = Representation::PhiPsi;
  return out;
}

SolutionSample to_uv(const SpectralPoint& sp, const SolutionSample& s) {
  if (s.rep == Representation::UV) return s;
  SolutionSample out = s;
  out.value = phipsi_state_matrix(sp).inverse().cast<std::complex<double>>() * s.value;
  out.rep = Representation::UV;
  return out;
}

SolutionSample convert(const SpectralPoint& sp, const SolutionSample& s, Representation rep) {
  return rep == Representation::UV ? to_uv(sp, s) : to_phipsi(sp, s);
}

Representation preferred_representation(const SpectralPoint& sp, double lambda_switch) {
  return sp.abs_lam() >= lambda_switch ? Representation::PhiPsi : Representation::UV;
}

EigenSystem::EigenSystem(const SpectralPoint& sp, const VortexProfile& profile, Representation rep)
    : sp_(sp), fn_(profile.fn.get()), rep_(rep) {
  if (fn_ == nullptr) throw std::invalid_argument("EigenSystem: profile has no continuous representation");
  if (rep_ == Representation::UV) {
    base_ << -1.0 - sp.lam, 0.0, 0.0, -1.0 + sp.lam;
    coupling_ << 2.0, 1.0, 1.0, 2.0;
  } else {
    base_ << sp.kappa * sp.kappa, 0.0, 0.0, -sp.xi * sp.xi;
    coupling_ = coupling_matrix(sp);
  }
}

Eigen::Matrix2d EigenSystem::potential(double r) const {
  const double f = fn_->eval(r).f;
  const double w = rep_ == Representation::UV ? f * f : f * f - 1.0;
  return base_ + w * coupling_;
}

std::vector<double> profile_taylor(double slope, int terms) {
  // rho = r S(r^2):  ((2j+1)^2 - 1) c_j = -c_{j-1} + [S^3]_{j-2}
  const auto n = static_cast<std::size_t>(terms);
  std::vector<double> c(n, 0.0), sq(n, 0.0);
  c[0] = slope;
  sq[0] = slope * slope;
  for (std::size_t j = 1; j < n; ++j) {
    double cube = 0.0;
    if (j >= 2) {
      for (std::size_t i = 0; i <= j - 2; ++i) cube += sq[i] * c[j - 2 - i];
    }
    const double k = static_cast<double>(2 * j + 1);
    c[j] = (-c[j - 1] + cube) / (k * k - 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i <= j; ++i) s += c[i] * c[j - i];
    sq[j] = s;
  }
  return c;
}

SolutionSample seed_origin(const SpectralPoint& sp, const VortexProfile& profile, int which, double r0) {
  if (which != 1 && which != 2) throw std::invalid_argument("seed_origin: which must be 1 or 2");
  if (!(r0 > 0.0) || r0 > 0.05) throw std::invalid_argument("seed_origin: r0 must lie in (0, 0.05]");
  constexpr int kMax = 400;
  const auto rc = profile_taylor(profile.slope_a, kMax);
  // q = coefficients of S^2, rho^2 = r^2 S^2(r^2)
  std::vector<double> q(kMax, 0.0);
  for (int m = 0; m < kMax; ++m) {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += rc[static_cast<std::size_t>(i)] * rc[static_cast<std::size_t>(m - i)];
    q[static_cast<std::size_t>(m)] = s;
  }
  Eigen::Matrix2d p0, p1;
  p0 << -1.0 - sp.lam, 0.0, 0.0, -1.0 + sp.lam;
  p1 << 2.0, 1.0, 1.0, 2.0;

  // U = sum_k c_k r^{2k+1}:  ((2k+1)^2 - 1) c_k = P0 c_{k-1} + P1 sum_m q_m c_{k-2-m}
  std::vector<Eigen::Vector2d> c;
  c.emplace_back(which == 1 ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0));
  Eigen::Vector2d u = c[0] * r0, du = c[0];
  const double t = r0 * r0;
  double tk = 1.0;  // r0^{2k}
  int small = 0;
  for (int k = 1; k < kMax && small < 3; ++k) {
    Eigen::Vector2d rhs = p0 * c[static_cast<std::size_t>(k - 1)];
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int m = 0; m <= k - 2; ++m) acc += q[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(k - 2 - m)];
    rhs += p1 * acc;
    const double kk = 2.0 * k + 1.0;
    c.emplace_back(rhs / (kk * kk - 1.0));
    tk *= t;
    const Eigen::Vector2d term = c.back() * tk;
    u += term * r0;
    du += kk * term;
    small = term.norm() * r0 <= 1e-18 * u.norm() ? small + 1 : 0;
  }
  SolutionSample s;
  s.r = r0;
  s.rep = Representation::UV;
  s.value << u(0), du(0), u(1), du(1);
  return s;
}

SolutionSample seed_jost(const SpectralPoint& sp, JostKind kind, double R) {
  using special::BesselKind;
  using special::Family;
  SolutionSample s;
  s.r = R;
  s.rep = Representation::PhiPsi;
  if (kind == JostKind::Decaying) {
    if (!(sp.kappa * R >= 20.0)) throw std::invalid_argument("seed_jost: need kappa R >= 20");
    const BesselKind k1{Family::K, 1};
    s.value << special::bessel(k1, sp.kappa * R), sp.kappa * special::bessel_prime(k1, sp.kappa * R), 0.0, 0.0;
  } else {
    const double x = sp.abs_xi() * R;
    if (!(x >= 20.0)) throw std::invalid_argument("seed_jost: need |xi| R >= 20");
    const BesselKind j1{Family::J, 1}, y1{Family::Y, 1};
    const bool re = kind == JostKind::OscCos;
    const BesselKind b = re ? j1 : y1;
    s.value << 0.0, 0.0, special::bessel(b, x), sp.abs_xi() * special::bessel_prime(b, x);
  }
  return to_uv(sp, s);
}

namespace {

ode::State<8> pack(const Vector4c& v) {
  ode::State<8> y{};
  for (int i = 0; i < 4; ++i) {
    y[static_cast<std::size_t>(i)] = v(i).real();
    y[static_cast<std::size_t>(i + 4)] = v(i).imag();
  }
  return y;
}

Vector4c unpack(const ode::State<8>& y) {
  Vector4c v;
  for (int i = 0; i < 4; ++i) v(i) = {y[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i + 4)]};
  return v;
}

}  // namespace

std::vector<SolutionSample> integrate(const SpectralPoint& sp, const VortexProfile& profile,
                                      const SolutionSample& seed, const std::vector<double>& nodes,
                                      double tol) {
  const Representation rep = preferred_representation(sp);
  const EigenSystem sys(sp, profile, rep);
  const SolutionSample start = convert(sp, seed, rep);
  const double lo = profile.grid->r_min(), hi = profile.grid->r_max();
  auto inside = [&](double r) { return r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12); };
  if (!inside(seed.r)) throw std::invalid_argument("integrate: seed radius outside the grid");

  ode::Driver<8> drv({tol, tol});
  ode::State<8> y = pack(start.value);
  double r = seed.r, h = 0.0;
  std::vector<SolutionSample> out;
  out.reserve(nodes.size());
  for (double target : nodes) {
    if (!inside(target)) throw std::invalid_argument("integrate: node outside the grid");
    drv.advance(sys, y, r, target, h);
    r = target;
    SolutionSample s;
    s.r = r;
    s.rep = rep;
    s.value = unpack(y);
    out.push_back(convert(sp, s, seed.rep));
  }
  return out;
}

SolutionSample integrate_to(const SpectralPoint& sp, const VortexProfile& profile,
                            const SolutionSample& seed, double r_target, double tol) {
  return integrate(sp, profile, seed, {r_target}, tol).front();
}

std::complex<double> wronskian(const SolutionSample& a, const SolutionSample& b) {
  if (a.r != b.r) throw std::invalid_argument("wronskian: samples at different radii");
  if (a.rep != Representation::UV || b.rep != Representation::UV) {
    throw std::invalid_argument("wronskian: samples must be in UV representation");
  }
  const auto& x = a.value;
  const auto& y = b.value;
  return a.r * (x(1) * y(0) + x(3) * y(2) - y(1) * x(0) - y(3) * x(2));
}

}  // namespace vspec

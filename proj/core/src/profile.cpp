#include "vspec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "vspec/ode.hpp"
#include "vspec/special.hpp"

namespace vspec {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double k1s(double r) { return special::bessel({special::Family::K, 1}, kSqrt2 * r); }

// K1(sqrt2 r) and its first two r-derivatives.
Jet k1_jet(double r) {
  const double z = kSqrt2 * r;
  const double k = special::bessel({special::Family::K, 1}, z);
  const double kp = special::bessel_prime({special::Family::K, 1}, z);
  const double kpp = -kp / z + (1.0 + 1.0 / (z * z)) * k;
  return {k, kSqrt2 * kp, 2.0 * kpp};
}

std::vector<double> tail_series_coefficients(int n_max) {
  // 1 - rho = sum_{k>=1} b_k x^k, x = r^{-2}
  std::vector<double> b(n_max + 1, 0.0), f2(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double f3 = 0.0;
    for (int i = 1; i <= n - 2; ++i) f3 += b[i] * f2[n - i];
    const double sq = f2[n];  // depends on b_1..b_{n-1} only
    b[n] = ((4.0 * (n - 1) * (n - 1) - 1.0) * b[n - 1] + (n == 1 ? 1.0 : 0.0) + 3.0 * sq - f3) / 2.0;
    // update f2 for indices reached with the new coefficient
    for (int m = n + 1; m <= n_max; ++m) {
      const int j = m - n;
      if (j < 1 || j > n) continue;
      f2[m] += (j == n) ? b[n] * b[n] : 2.0 * b[n] * b[j];
    }
  }
  return b;
}

using State2 = ode::State<2>;
using State4 = ode::State<4>;

void rho_rhs(const State2& y, State2& dy, double r) {
  dy[0] = y[1];
  dy[1] = -y[1] / r + y[0] / (r * r) - (1.0 - y[0] * y[0]) * y[0];
}

// +1 overshoot (rho > 1), -1 crash (rho' < 0), 0 undecided by r_stop.
int classify(double a, double r0, double r_stop, ode::Tolerance tol) {
  State2 y{a * r0 * (1.0 - r0 * r0 / 8.0), a * (1.0 - 3.0 * r0 * r0 / 8.0)};
  ode::Driver<2> drv(tol);
  double h = 1e-3;
  double r = r0;
  const double chunk = 0.05;
  try {
    while (r < r_stop) {
      const double r1 = std::min(r_stop, r + chunk);
      drv.advance(rho_rhs, y, r, r1, h);
      r = r1;
      if (y[0] > 1.0) return 1;
      if (y[1] < 0.0) return -1;
    }
  } catch (const ode::Overflow&) {
    return y[0] > 0.0 ? 1 : -1;
  }
  return 0;
}

}  // namespace

ProfileFunction::ProfileFunction(double a, QuinticHermite table, std::vector<double> tail_coeffs, double tail_c)
    : a_(a), table_(std::move(table)), tail_(std::move(tail_coeffs)), tail_c_(tail_c) {
  k_ref_ = k1s(table_.x_max());
}

Jet ProfileFunction::tail_series(double r) const {
  const double x = 1.0 / (r * r);
  Jet j{1.0, 0.0, 0.0};
  double xk = 1.0;
  double prev = INFINITY;
  for (std::size_t k = 1; k < tail_.size(); ++k) {
    xk *= x;
    const double term = tail_[k] * xk;
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    const double kk = static_cast<double>(k);
    j.f -= term;
    j.df += 2.0 * kk * term / r;
    j.d2f -= 2.0 * kk * (2.0 * kk + 1.0) * term / (r * r);
    if (prev < 1e-18) break;
  }
  return j;
}

Jet ProfileFunction::eval(double r) const {
  if (!(r >= 0.0)) throw std::domain_error("ProfileFunction::eval: r < 0");
  if (r <= table_.x_max()) return table_.eval(r);
  Jet j = tail_series(r);
  if (tail_c_ != 0.0) {
    const Jet k = k1_jet(r);
    const double s = tail_c_ / k_ref_;
    j.f += s * k.f;
    j.df += s * k.df;
    j.d2f += s * k.d2f;
  }
  return j;
}

VortexProfile solve_profile(std::shared_ptr<const RadialGrid> grid, double tol, const ProfileOptions& opt) {
  if (!grid) throw std::invalid_argument("solve_profile: null grid");
  if (grid->r_max() < 40.0) throw std::invalid_argument("solve_profile: grid r_max must be >= 40");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_profile: tol must be positive");

  const ode::Tolerance otol{1e-15, std::min(1e-13, tol * 1e-3)};
  const double r0 = opt.r_launch;

  // bisection on the origin slope
  double a_lo = 0.3, a_hi = 1.0;
  if (classify(a_lo, r0, 25.0, otol) != -1 || classify(a_hi, r0, 25.0, otol) != 1) {
    throw ShootingFailure("solve_profile: slope bracket [0.3, 1.0] does not straddle the separatrix");
  }
  int it = 0;
  for (; it < opt.max_bisection; ++it) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (mid <= a_lo || mid >= a_hi) break;
    const int c = classify(mid, r0, 25.0, otol);
    if (c == 1) {
      a_hi = mid;
    } else if (c == -1) {
      a_lo = mid;
    } else {
      a_lo = a_hi = mid;
      break;
    }
  }
  if (it >= opt.max_bisection) throw ShootingFailure("solve_profile: bisection did not converge");
  double a = 0.5 * (a_lo + a_hi);

  // Multiple shooting on (a, s_1, ..., s_{m-1}, c): an outward leg from the
  // Frobenius seed, forward legs from unknown states at the breakpoints, and an
  // inward leg from the large-r series plus c times the decaying mode. Legs are
  // short so the e^{sqrt2 r} growth of integration errors stays small, and every
  // leg lands on the Hermite nodes so that the tabulated values are exactly the
  // trajectories whose mismatch the Newton iteration drives to zero.
  const double h = opt.table_h;
  const auto c_idx = static_cast<std::size_t>(std::lround(opt.r_c / h));
  const double r_c = static_cast<double>(c_idx) * h;
  const int legs = std::max(2, static_cast<int>(std::ceil(r_c / opt.leg_length)));
  std::vector<std::size_t> bp_idx(legs + 1);
  for (int i = 0; i <= legs; ++i) bp_idx[i] = static_cast<std::size_t>(std::lround(r_c * i / legs / h));
  std::vector<double> bp(legs + 1);
  for (int i = 0; i <= legs; ++i) bp[i] = static_cast<double>(bp_idx[i]) * h;

  const auto b = tail_series_coefficients(40);
  ProfileFunction series_only(a, QuinticHermite(0.0, r_c, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}), b, 0.0);
  const Jet s_c = series_only.tail_series(r_c);
  const Jet k_c = k1_jet(r_c);
  const double k_log = k_c.df / k_c.f;

  const std::size_t n = c_idx + 1;
  std::vector<double> f(n), df(n), d2f(n);
  auto second = [](double r, double p, double dp) { return -dp / r + p / (r * r) - (1.0 - p * p) * p; };

  using State6 = ode::State<6>;
  // (rho, rho', two columns of the linearized flow)
  auto var6 = [](const State6& y, State6& dy, double r) {
    const double r2 = r * r;
    const double pot = 1.0 - 3.0 * y[0] * y[0];
    dy[0] = y[1];
    dy[1] = -y[1] / r + y[0] / r2 - (1.0 - y[0] * y[0]) * y[0];
    dy[2] = y[3];
    dy[3] = -y[3] / r + y[2] / r2 - pot * y[2];
    dy[4] = y[5];
    dy[5] = -y[5] / r + y[4] / r2 - pot * y[4];
  };
  // integrate from r_from to node index k_to through every node in between,
  // storing rho on the nodes
  auto run = [&](State6 y, double r_from, std::size_t k_from, std::size_t k_to) {
    ode::Driver<6> drv(otol);
    const bool fwd = k_to > k_from;
    double hh = fwd ? 1e-3 : -1e-3;
    double r = r_from;
    for (std::size_t k = fwd ? k_from + 1 : k_from - 1;; k = fwd ? k + 1 : k - 1) {
      const double rk = static_cast<double>(k) * h;
      drv.advance(var6, y, r, rk, hh);
      r = rk;
      f[k] = y[0];
      df[k] = y[1];
      d2f[k] = second(rk, y[0], y[1]);
      if (k == k_to) break;
    }
    return y;
  };
  auto seed_out = [&](double slope) {
    return State6{slope * r0 * (1.0 - r0 * r0 / 8.0), slope * (1.0 - 3.0 * r0 * r0 / 8.0), r0 * (1.0 - r0 * r0 / 8.0),
                  1.0 - 3.0 * r0 * r0 / 8.0, 0.0, 0.0};
  };

  // unknowns: a, states at bp[1..legs-1], c
  const int nu = 2 * legs;
  Eigen::VectorXd x(nu);
  x(0) = a;
  for (int i = 1; i < legs; ++i) {
    const Jet s = bp[i] < 12.0 ? Jet{} : series_only.tail_series(bp[i]);
    x(2 * i - 1) = s.f;
    x(2 * i) = s.df;
  }
  {
    // early breakpoints from the bisection trajectory, which is accurate there
    State6 y = run(seed_out(a), r0, 0, bp_idx[1]);
    for (int i = 1; i < legs && bp[i] < 12.0; ++i) {
      x(2 * i - 1) = y[0];
      x(2 * i) = y[1];
      if (i + 1 < legs) y = run(y, bp[i], bp_idx[i], bp_idx[i + 1]);
    }
  }
  x(nu - 1) = 0.0;

  auto evaluate = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& res, Eigen::MatrixXd& jac) {
    res.setZero(nu);
    jac.setZero(nu, nu);
    for (int i = 0; i < legs - 1; ++i) {
      State6 y;
      if (i == 0) {
        y = run(seed_out(xv(0)), r0, 0, bp_idx[1]);
        jac(0, 0) = y[2];
        jac(1, 0) = y[3];
      } else {
        f[bp_idx[i]] = xv(2 * i - 1);
        df[bp_idx[i]] = xv(2 * i);
        d2f[bp_idx[i]] = second(bp[i], xv(2 * i - 1), xv(2 * i));
        y = run(State6{xv(2 * i - 1), xv(2 * i), 1.0, 0.0, 0.0, 1.0}, bp[i], bp_idx[i], bp_idx[i + 1]);
        jac(2 * i, 2 * i - 1) = y[2];
        jac(2 * i + 1, 2 * i - 1) = y[3];
        jac(2 * i, 2 * i) = y[4];
        jac(2 * i + 1, 2 * i) = y[5];
      }
      if (i + 1 < legs - 1) {
        res(2 * i) = y[0] - xv(2 * i + 1);
        res(2 * i + 1) = y[1] - xv(2 * i + 2);
        jac(2 * i, 2 * i + 1) = -1.0;
        jac(2 * i + 1, 2 * i + 2) = -1.0;
      } else {
        // the inward leg overwrites the shared breakpoint node
        const double c = xv(nu - 1);
        const State6 seed{s_c.f + c, s_c.df + c * k_log, 1.0, k_log, 0.0, 0.0};
        f[c_idx] = seed[0];
        df[c_idx] = seed[1];
        d2f[c_idx] = second(r_c, seed[0], seed[1]);
        const State6 yi = run(seed, r_c, c_idx, bp_idx[legs - 1]);
        res(2 * i) = y[0] - yi[0];
        res(2 * i + 1) = y[1] - yi[1];
        jac(2 * i, nu - 1) = -yi[2];
        jac(2 * i + 1, nu - 1) = -yi[3];
      }
    }
    return res.lpNorm<Eigen::Infinity>();
  };

  Eigen::VectorXd res;
  Eigen::MatrixXd jac;
  double best = INFINITY;
  Eigen::VectorXd x_best = x;
  for (int iter = 0; iter < 40; ++iter) {
    const double norm = evaluate(x, res, jac);
    if (norm < best) {
      best = norm;
      x_best = x;
    } else if (best < 1e-11) {
      break;
    }
    if (norm < 1e-15) break;
    x -= jac.fullPivLu().solve(res);
  }
  if (!(best < 1e-11) || !(x_best(0) > 0.0)) throw ShootingFailure("solve_profile: matching Newton did not converge");
  evaluate(x_best, res, jac);  // leaves the table at the best iterate
  a = x_best(0);
  const double c = x_best(nu - 1);
  f[0] = 0.0;
  df[0] = a;
  d2f[0] = 0.0;

  auto fn = std::make_shared<const ProfileFunction>(a, QuinticHermite(0.0, h, f, df, d2f), b, c);
  VortexProfile p;
  p.slope_a = a;
  p.tol = tol;
  p.fn = fn;
  return resample(p, std::move(grid));
}

VortexProfile resample(const VortexProfile& p, std::shared_ptr<const RadialGrid> grid) {
  VortexProfile out;
  out.grid = std::move(grid);
  out.slope_a = p.slope_a;
  out.tol = p.tol;
  out.fn = p.fn;
  const std::size_t n = out.grid->size();
  out.rho.resize(n);
  out.drho.resize(n);
  out.d2rho.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Jet j = out.fn->eval(out.grid->r(i));
    out.rho[i] = j.f;
    out.drho[i] = j.df;
    out.d2rho[i] = j.d2f;
  }
  return out;
}

ResonancePair resonance_vectors(const VortexProfile& p) {
  ResonancePair rp{RadialField(p.grid), RadialField(p.grid)};
  for (std::size_t i = 0; i < p.grid->size(); ++i) {
    const double r = p.grid->r(i);
    rp.xi0.u[i] = p.rho[i];
    rp.xi0.v[i] = -p.rho[i];
    const double w = r * p.drho[i] + p.rho[i];
    rp.xi1.u[i] = w;
    rp.xi1.v[i] = w;
  }
  return rp;
}

KernelSolutions kernel_solutions(const VortexProfile& p) {
  const auto& g = *p.grid;
  const std::size_t n = g.size();
  KernelSolutions ks;
  ks.p0.resize(n);
  ks.dp0.resize(n);
  ks.q0.resize(n);
  ks.dq0.resize(n);
  ks.q0_tilde.resize(n);
  ks.dq0_tilde.resize(n);

  // P0: g(r) = int_1^r ds/(s rho^2), per-interval Gauss-Legendre in the map variable
  using GL = boost::math::quadrature::gauss<double, 10>;
  const auto& map = g.map();
  auto piece = [&](double ra, double rb) {
    const double sa = map.s_of(ra), sb = map.s_of(rb);
    return GL::integrate(
        [&](double s) {
          const double r = map.x(s);
          const double rho = p.fn->eval(r).f;
          return map.dx(s) / (r * rho * rho);
        },
        sa, sb);
  };
  std::size_t j1 = 0;
  while (j1 + 1 < n && g.r(j1 + 1) <= 1.0) ++j1;
  std::vector<double> gi(n);
  gi[j1] = -piece(g.r(j1), 1.0);
  for (std::size_t k = j1; k-- > 0;) gi[k] = gi[k + 1] - piece(g.r(k), g.r(k + 1));
  for (std::size_t k = j1 + 1; k < n; ++k) gi[k] = gi[k - 1] + piece(g.r(k - 1), g.r(k));
  for (std::size_t k = 0; k < n; ++k) {
    const double r = g.r(k);
    ks.p0[k] = p.rho[k] * gi[k];
    ks.dp0[k] = p.drho[k] * gi[k] + 1.0 / (r * p.rho[k]);
  }

  // Q0 outward with per-interval integrals of 1/(r Q0^2)
  using State3 = ode::State<3>;
  auto rhs = [&](const State3& y, State3& dy, double r) {
    const double rho = p.fn->eval(r).f;
    dy[0] = y[1];
    dy[1] = -y[1] / r + y[0] / (r * r) - (1.0 - 3.0 * rho * rho) * y[0];
    dy[2] = 1.0 / (r * y[0] * y[0]);
  };
  const double r0 = g.r(0);
  State3 y{r0 - r0 * r0 * r0 / 8.0, 1.0 - 3.0 * r0 * r0 / 8.0, 0.0};
  ks.q0[0] = y[0];
  ks.dq0[0] = y[1];
  std::vector<double> piece_t(n, 0.0);
  ode::Driver<3> drv({1e-30, 1e-13});
  double hh = 0.1 * r0;
  for (std::size_t k = 1; k < n; ++k) {
    y[2] = 0.0;
    drv.advance(rhs, y, g.r(k - 1), g.r(k), hh);
    ks.q0[k] = y[0];
    ks.dq0[k] = y[1];
    piece_t[k - 1] = y[2];
  }
  // tail beyond r_max from Q0 ~ C1 e^{sqrt2 r}/sqrt(r)
  const double rm = g.r_max();
  double t = 1.0 / (rm * ks.q0[n - 1] * ks.q0[n - 1] * 2.0 * kSqrt2);
  for (std::size_t k = n; k-- > 0;) {
    if (k + 1 < n) t += piece_t[k];
    const double r = g.r(k);
    ks.q0_tilde[k] = ks.q0[k] * t;
    ks.dq0_tilde[k] = ks.dq0[k] * t - 1.0 / (r * ks.q0[k]);
  }
  return ks;
}

namespace {

double weight(double r) { return std::min(1.0, r * r); }

}  // namespace

std::vector<double> profile_residual(const VortexProfile& p) {
  const auto& g = *p.grid;
  const auto d1 = g.d_dr(p.rho, 6);
  const auto d2 = g.d2_dr2(p.rho, 6);
  std::vector<double> res(g.size(), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double r = g.r(i), f = p.rho[i];
    res[i] = weight(r) * std::abs(d2[i] + d1[i] / r - f / (r * r) + (1.0 - f * f) * f);
  }
  return res;
}

std::vector<double> derivative_identity_residual(const VortexProfile& p) {
  const auto& g = *p.grid;
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = g.r(i) * p.drho[i];
  const auto d1 = g.d_dr(w, 6);
  const auto d2 = g.d2_dr2(w, 6);
  std::vector<double> res(g.size(), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double r = g.r(i), rho = p.rho[i];
    const double lhs = d2[i] + d1[i] / r - w[i] / (r * r) + (1.0 - 3.0 * rho * rho) * w[i];
    res[i] = weight(r) * std::abs(lhs - 2.0 * (rho * rho - 1.0) * rho);
  }
  return res;
}

std::vector<double> kernel_residual(const VortexProfile& p, const std::vector<double>& f, double q) {
  const auto& g = *p.grid;
  const auto d1 = g.d_dr(f, 6);
  const auto d2 = g.d2_dr2(f, 6);
  std::vector<double> res(g.size(), 0.0);
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double r = g.r(i), rho = p.rho[i];
    const double pot = 1.0 - (1.0 + q) * rho * rho;
    const double terms[] = {d2[i], d1[i] / r, -f[i] / (r * r), pot * f[i]};
    double sum = 0.0, scale = 0.0;
    for (double tm : terms) {
      sum += tm;
      scale += std::abs(tm);
    }
    res[i] = scale > 0.0 ? std::abs(sum) / scale : 0.0;
  }
  return res;
}

double tail_constant(const VortexProfile& p, double r_from) {
  double c = 0.0;
  for (std::size_t i = 0; i < p.grid->size(); ++i) {
    const double r = p.grid->r(i);
    if (r < r_from) continue;
    c = std::max(c, std::pow(r, 4) * std::abs(1.0 - p.rho[i] - 0.5 / (r * r)));
  }
  return c;
}

}  // namespace vspec

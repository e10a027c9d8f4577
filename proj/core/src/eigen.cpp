#include "vspec/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>

#include "vspec/parallel.hpp"
#include "vspec/special.hpp"

namespace vspec {

namespace {

constexpr double kPi = std::numbers::pi;

template <int K>
using Frame = Eigen::Matrix<double, 4, K>;

// Modified Gram-Schmidt, applied twice: Y = Q R with R upper triangular.
template <int K>
void orthonormalize(const Frame<K>& y, Frame<K>& q, Eigen::Matrix<double, K, K>& r) {
  q = y;
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < K; ++j) {
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      const double nrm = q.col(j).norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::runtime_error("eigen: degenerate solution frame");
      q.col(j) /= nrm;
    }
  }
  r = (q.transpose() * y).template triangularView<Eigen::Upper>();
}

template <int K>
ode::State<4 * K> pack(const Frame<K>& q) {
  ode::State<4 * K> s{};
  for (int j = 0; j < K; ++j) {
    for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(4 * j + i)] = q(i, j);
  }
  return s;
}

template <int K>
Frame<K> unpack(const ode::State<4 * K>& s) {
  Frame<K> q;
  for (int j = 0; j < K; ++j) {
    for (int i = 0; i < 4; ++i) q(i, j) = s[static_cast<std::size_t>(4 * j + i)];
  }
  return q;
}

// Reduced scalar equation for the oscillating channel at large r, with phi
// slaved to psi:  psi'' + psi'/r + (xi^2 - 1/r^2 - w (B22 + B21 s)) psi = 0,
// s = -w B12 / (xi^2 + kappa^2 + w B11),  w = rho^2 - 1.
struct ReducedChannel {
  SpectralPoint sp;
  Eigen::Matrix2d b;
  const ProfileFunction* fn;

  [[nodiscard]] double slave(double w) const {
    return -w * b(0, 1) / (sp.xi * sp.xi + sp.kappa * sp.kappa + w * b(0, 0));
  }
  [[nodiscard]] double slave_prime(double w, double dw) const {
    const double d = sp.xi * sp.xi + sp.kappa * sp.kappa + w * b(0, 0);
    return -(dw * b(0, 1) * d - w * b(0, 1) * dw * b(0, 0)) / (d * d);
  }
  void operator()(const ode::State<4>& y, ode::State<4>& dy, double r) const {
    const double f = fn->eval(r).f;
    const double w = f * f - 1.0;
    const double k2 = sp.xi * sp.xi - 1.0 / (r * r) - w * (b(1, 1) + b(1, 0) * slave(w));
    dy[0] = y[1];
    dy[1] = -y[1] / r - k2 * y[0];
    dy[2] = y[3];
    dy[3] = -y[3] / r - k2 * y[2];
  }
};

// Outgoing oscillating Jost data psi_+ ~ sqrt(2/(pi x)) e^{i(x - pi/4)} at r_j,
// returned as (phi, phi', psi, psi') for the real and imaginary parts.
std::pair<Eigen::Vector4d, Eigen::Vector4d> oscillating_seed(const SpectralPoint& sp, const ProfileFunction& fn,
                                                             double r_j, const EigenOptions& opt) {
  ReducedChannel ch{sp, coupling_matrix(sp), &fn};
  const double xi = sp.xi;
  const double r_far = std::max(r_j + 10.0, opt.far_radius / std::min(1.0, xi));
  const double nu2 = 1.0 - ch.b(1, 1);
  const auto h = special::hankel_asymptotic(4.0 * nu2, xi * r_far);
  ode::State<4> y{h.value.real(), xi * h.derivative.real(), h.value.imag(), xi * h.derivative.imag()};
  ode::Driver<4> drv({1e-14, 1e-13});
  double step = 0.0;
  drv.advance(ch, y, r_far, r_j, step);

  const Jet j = fn.eval(r_j);
  const double w = j.f * j.f - 1.0, dw = 2.0 * j.f * j.df;
  const double s = ch.slave(w), ds = ch.slave_prime(w, dw);
  auto full = [&](double p, double dp) { return Eigen::Vector4d(s * p, ds * p + s * dp, p, dp); };
  return {full(y[0], y[1]), full(y[2], y[3])};
}

}  // namespace

double default_match_radius(double xi, double r_max, double y0) {
  const double r = std::max(2.0, 4.0 * y0 / std::abs(xi));
  return std::min(r, r_max / 3.0);
}

double cutoff(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double t = x - 1.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

FundamentalBasis fundamental_basis(const SpectralPoint& sp, const VortexProfile& profile, const RadialGrid& grid,
                                   double r_match, const EigenOptions& opt) {
  if (!(sp.xi > 0.0)) throw std::invalid_argument("fundamental_basis: requires xi > 0");
  if (!(r_match > grid.r_min() && r_match < grid.r_max())) {
    throw std::invalid_argument("fundamental_basis: matching radius outside the grid");
  }
  FundamentalBasis b;
  b.sp = sp;
  b.rep = preferred_representation(sp, opt.lambda_switch);
  b.high = b.rep == Representation::PhiPsi;

  const auto& rs = grid.r();
  const std::size_t n = rs.size();
  std::size_t m = static_cast<std::size_t>(std::lower_bound(rs.begin(), rs.end(), r_match) - rs.begin());
  if (m > 0 && r_match - rs[m - 1] < rs[m] - r_match) --m;
  b.r_match = rs[m];

  const EigenSystem sys(sp, profile, b.rep);
  const Eigen::Matrix4d to_rep = b.rep == Representation::PhiPsi ? phipsi_state_matrix(sp) : Eigen::Matrix4d::Identity();
  const Eigen::Matrix4d to_pp = phipsi_state_matrix(sp);
  const ode::Tolerance tol{opt.tol, opt.tol};

  // origin side
  {
    Frame<2> y;
    for (int w = 1; w <= 2; ++w) {
      const auto s = seed_origin(sp, profile, w, rs[0]);
      y.col(w - 1) = to_rep * s.value.real();
    }
    b.r_in.reserve(m + 1);
    b.q_in.reserve(m + 1);
    b.rf_in.reserve(m + 1);
    Frame<2> q;
    Eigen::Matrix2d r;
    orthonormalize<2>(y, q, r);
    b.r_in.push_back(rs[0]);
    b.q_in.push_back(q);
    b.rf_in.push_back(r);
    Eigen::Matrix2d acc = r;
    ode::Driver<8> drv(tol);
    double h = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      auto st = pack<2>(q);
      drv.advance(sys, st, rs[k - 1], rs[k], h);
      orthonormalize<2>(unpack<2>(st), q, r);
      b.r_in.push_back(rs[k]);
      b.q_in.push_back(q);
      b.rf_in.push_back(r);
      acc = r * acc;
    }
    b.origin_factor = acc;
  }

  // infinity side
  {
    const double r_j = grid.r_max() + opt.jost_offset / sp.kappa;
    Frame<3> y;
    Eigen::Vector4d dec(1.0, -sp.kappa - 0.5 / r_j, 0.0, 0.0);
    const auto [re, im] = oscillating_seed(sp, *profile.fn, r_j, opt);
    const Eigen::Matrix4d pp_to_rep = to_rep * to_pp.inverse();
    y.col(0) = pp_to_rep * dec;
    if (b.high) {
      y.col(1) = pp_to_rep * im;   // J1-like
      y.col(2) = -(pp_to_rep * re);  // Y1-like
    } else {
      y.col(1) = pp_to_rep * re;  // J0-like
      y.col(2) = pp_to_rep * im;  // Y0-like
    }
    const std::size_t count = n - m + 1;
    b.r_out.reserve(count);
    b.q_out.reserve(count);
    b.rf_out.reserve(count);
    Frame<3> q;
    Eigen::Matrix3d r;
    orthonormalize<3>(y, q, r);
    b.r_out.push_back(r_j);
    b.q_out.push_back(q);
    b.rf_out.push_back(r);
    Eigen::Matrix2d acc = r.bottomRightCorner<2, 2>();
    ode::Driver<12> drv(tol);
    double h = 0.0, prev = r_j;
    for (std::size_t k = n; k-- > m;) {
      auto st = pack<3>(q);
      drv.advance(sys, st, prev, rs[k], h);
      prev = rs[k];
      orthonormalize<3>(unpack<3>(st), q, r);
      b.r_out.push_back(rs[k]);
      b.q_out.push_back(q);
      b.rf_out.push_back(r);
      acc = r.bottomRightCorner<2, 2>() * acc;
    }
    b.osc_factor = acc;
    const Eigen::Vector4d q1 = to_pp * to_rep.inverse() * b.q_out.back().col(0);
    b.decaying_phi = q1(0);
  }
  return b;
}

namespace {

// Normalizes the null vector (alpha3^2 + alpha4^2 = pi/(2 C^2), lim U.e/r > 0)
// and expresses it in the reporting bases, still in the convention of the map M.
MatchResult normalize(const FundamentalBasis& b, const Eigen::Matrix<double, 5, 1>& x, double slope_a) {
  MatchResult res;
  const SpectralPoint& sp = b.sp;
  const double c = c_lambda(sp);
  const Eigen::Vector2d raw = b.osc_factor.triangularView<Eigen::Upper>().solve(x.segment<2>(1));
  double scale = std::sqrt(kPi / 2.0) / std::abs(c) / raw.norm();
  Eigen::Vector2d slope_uv = b.origin_factor.triangularView<Eigen::Upper>().solve(x.segment<2>(3));
  if (slope_uv.dot(sp.e) * scale < 0.0) scale = -scale;
  slope_uv *= scale;

  MatchingCoefficients& mc = res.coeffs;
  const double k1 = special::bessel({special::Family::K, 1}, sp.kappa * b.r_match);
  mc.alpha2 = x(0) * scale * b.decaying_phi / k1;
  mc.alpha3 = raw(0) * scale;
  mc.alpha4 = raw(1) * scale;
  const Eigen::Vector2d s = phipsi_matrix(sp) * slope_uv;
  if (b.high) {
    mc.beta1 = 2.0 * s(0) / sp.xi;
    mc.beta2 = 2.0 * s(1) / sp.xi;
  } else {
    // slopes (1, 0) and a (-lam/(2<lam>), 1)
    mc.beta2 = s(1) / slope_a;
    mc.beta1 = s(0) + s(1) * sp.lam / (2.0 * sp.jlam);
  }
  res.scale = scale;
  res.origin_slope = slope_uv.dot(sp.e);
  return res;
}

}  // namespace

MatchResult match(const FundamentalBasis& b, const VortexProfile& profile, const EigenOptions& opt) {
  Eigen::Matrix<double, 5, 5> a = Eigen::Matrix<double, 5, 5>::Zero();
  a.block<4, 3>(0, 0) = b.q_out.back();
  a.block<4, 2>(0, 3) = -b.q_in.back();
  Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Matrix<double, 5, 1> x = svd.matrixV().col(4);
  const double eps = std::numeric_limits<double>::epsilon() * sv(0);
  const double gap = sv(3) / std::max(sv(4), eps);
  if (gap < opt.rank_gap) {
    throw RankDeficiency("match: singular-value gap " + std::to_string(gap) + " below threshold at xi = " +
                         std::to_string(b.sp.xi));
  }
  MatchResult res = normalize(b, x, profile.slope_a);
  res.null_vector = x;
  res.singular_values = sv;
  res.gap = gap;
  res.residual = (a * x).norm() / sv(0);
  // report in the convention of the map -M, for which C(lambda) > 0
  auto& mc = res.coeffs;
  for (double* v : {&mc.alpha2, &mc.alpha3, &mc.alpha4, &mc.beta1, &mc.beta2}) *v = -*v;
  return res;
}

RadialField Eigenfunction::field() const {
  RadialField f(grid);
  for (std::size_t i = 0; i < states.size(); ++i) {
    f.u[i] = states[i](0);
    f.v[i] = states[i](2);
  }
  return f;
}

SolutionSample Eigenfunction::sample(std::size_t i) const {
  SolutionSample s;
  s.r = grid->r(i);
  s.value = states[i].cast<std::complex<double>>();
  return s;
}

SolutionSample Eigenfunction::conjugate_sample(std::size_t i) const {
  SolutionSample s;
  s.r = grid->r(i);
  s.value = conjugate[i].cast<std::complex<double>>();
  return s;
}

Eigenfunction eigenfunction(const SpectralPoint& sp_in, const VortexProfile& profile,
                            std::shared_ptr<const RadialGrid> grid, const EigenOptions& opt) {
  if (sp_in.xi == 0.0) throw std::invalid_argument("eigenfunction: xi = 0 is excluded; use the stored zero limit");
  const bool negative = sp_in.xi < 0.0;
  const SpectralPoint sp = negative ? SpectralPoint::from_xi(-sp_in.xi) : sp_in;
  const double rm = opt.r_match > 0.0 ? opt.r_match : default_match_radius(sp.xi, grid->r_max(), opt.y0);
  const FundamentalBasis b = fundamental_basis(sp, profile, *grid, rm, opt);
  const MatchResult mr = match(b, profile, opt);

  Eigenfunction e;
  e.sp = sp;
  e.grid = grid;
  e.profile = profile.fn;
  e.coeffs = mr.coeffs;
  e.r_match = b.r_match;
  e.gap = mr.gap;
  e.residual = mr.residual;
  e.origin_slope = mr.origin_slope;
  const double cabs = std::abs(c_lambda(sp));
  const double a3 = mr.coeffs.alpha3, a4 = mr.coeffs.alpha4;
  if (b.high) {
    e.gamma2 = cabs * (-a3 - a4) / std::sqrt(kPi);
    e.gamma1 = cabs * (a3 - a4) / std::sqrt(kPi);
  } else {
    e.gamma2 = cabs * (a3 - a4) / std::sqrt(kPi);
    e.gamma1 = cabs * (a3 + a4) / std::sqrt(kPi);
  }

  const std::size_t n = grid->size();
  const std::size_t m = b.r_in.size() - 1;
  e.match_index = m;
  e.states.assign(n, Eigen::Vector4d::Zero());
  e.conjugate.assign(n, Eigen::Vector4d::Zero());
  const Eigen::Matrix4d from_rep =
      b.rep == Representation::PhiPsi ? Eigen::Matrix4d(phipsi_state_matrix(sp).inverse()) : Eigen::Matrix4d::Identity();

  const Eigen::Matrix<double, 5, 1> x = mr.null_vector * mr.scale;
  // origin side, inward back-substitution
  Eigen::Vector2d ai = x.segment<2>(3);
  Eigen::Vector4d inner_m = Eigen::Vector4d::Zero();
  for (std::size_t k = m + 1; k-- > 0;) {
    const Eigen::Vector4d st = from_rep * (b.q_in[k] * ai);
    if (k == m) inner_m = st;
    else e.states[k] = st;
    ai = b.rf_in[k].triangularView<Eigen::Upper>().solve(ai);
  }
  // infinity side, outward back-substitution
  const Eigen::Vector2d ap(-mr.coeffs.alpha3, -mr.coeffs.alpha4);  // map-M convention
  Eigen::Vector3d ao = x.segment<3>(0);
  Eigen::Vector3d aperp(0.0, 0.0, 0.0);
  aperp.segment<2>(1) = b.osc_factor * Eigen::Vector2d(-ap(1), ap(0));
  const std::size_t last = b.r_out.size() - 1;
  for (std::size_t j = last; j >= 1; --j) {
    const std::size_t node = n - j;
    e.states[node] = from_rep * (b.q_out[j] * ao);
    e.conjugate[node] = from_rep * (b.q_out[j] * aperp);
    ao = b.rf_out[j].triangularView<Eigen::Upper>().solve(ao);
    aperp = b.rf_out[j].triangularView<Eigen::Upper>().solve(aperp);
  }
  const Eigen::Vector4d outer_m = e.states[m];
  e.match_jump = (outer_m - inner_m).norm() / std::max(1e-300, outer_m.norm());

  if (negative) {
    // psi(-xi) = -sigma1 psi(xi)
    for (auto* v : {&e.states, &e.conjugate}) {
      for (auto& s : *v) s = Eigen::Vector4d(-s(2), -s(3), -s(0), -s(1));
    }
    e.sp = sp_in;
  }
  return e;
}

}  // namespace vspec

namespace vspec {

EigenDecomposition decompose(const Eigenfunction& eig, Regime regime) {
  using special::BesselKind;
  using special::Family;
  EigenDecomposition d;
  d.regime = regime;
  const double xi = eig.sp.abs_xi();
  const Eigen::Vector2d e = eig.sp.e;
  const std::size_t n = eig.size();
  d.singular_part.resize(n);
  d.regular_part.resize(n);
  if (regime == Regime::FlatLow) {
    d.b = (eig.gamma1 + eig.gamma2) / std::sqrt(2.0);
    d.c = (eig.gamma1 - eig.gamma2) / std::sqrt(2.0);
  } else {
    d.a = 2.0 * eig.origin_slope / xi;
    d.b = eig.gamma2;
    d.c = eig.gamma1;
  }
  // psi(-xi) = -sigma1 psi(xi) and e(-xi) = -sigma1 e(xi): the scalar profile is shared
  for (std::size_t i = 0; i < n; ++i) {
    const double r = eig.grid->r(i), x = xi * r;
    double s = 0.0;
    if (regime == Regime::FlatLow) {
      const double rho = eig.profile->eval(r).f;
      const double chi = cutoff(x);
      s = std::sqrt(kPi / 2.0) * d.b * ((rho - 1.0) * chi + special::bessel(BesselKind{Family::J, 0}, x));
      if (chi < 1.0) s += d.c * std::sin(x - kPi / 4.0) / std::sqrt(x) * (1.0 - chi);
    } else {
      const double chi = cutoff(r);
      s = d.a * special::bessel(BesselKind{Family::J, 1}, x) * chi;
      if (chi < 1.0) s += (d.b * std::cos(x) + d.c * std::sin(x)) / std::sqrt(x) * (1.0 - chi);
    }
    d.singular_part[i] = s * e;
    d.regular_part[i] = eig.value(i) - d.singular_part[i];
    d.regular_sup = std::max(d.regular_sup, d.regular_part[i].norm());
  }
  return d;
}

EigenDecomposition scattering_coeffs(const Eigenfunction& eig) {
  const double xi = eig.sp.abs_xi();
  if (xi <= 0.5) return decompose(eig, Regime::FlatLow);
  if (xi >= 2.0) return decompose(eig, Regime::SharpHigh);
  auto lo = decompose(eig, Regime::FlatLow);
  auto hi = decompose(eig, Regime::SharpHigh);
  return lo.regular_sup <= hi.regular_sup ? lo : hi;
}

FrequencyGrid FrequencyGrid::make(double xi_min, double xi_max, double ds, double c) {
  if (!(xi_min > 0.0) || !(xi_max > xi_min) || !(ds > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("FrequencyGrid::make: invalid parameters");
  }
  FrequencyGrid g;
  g.xi_min = xi_min;
  g.xi_max = xi_max;
  g.ds = ds;
  g.c = c;
  const SoftplusMap map{c};
  const double s0 = map.s_of(xi_min), s1 = map.s_of(xi_max);
  const auto intervals = static_cast<std::size_t>(std::ceil((s1 - s0) / ds * (1.0 - 1e-12)));
  if (intervals < 16) throw std::invalid_argument("FrequencyGrid::make: too few nodes");
  const double h = (s1 - s0) / static_cast<double>(intervals);
  const std::size_t n = intervals + 1;
  g.xi.resize(n);
  g.weights.resize(n);
  const auto corr = gregory_corrections(8);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = s0 + h * static_cast<double>(j);
    g.xi[j] = j + 1 == n ? xi_max : map.x(s);
    double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    if (j < corr.size()) w += corr[j];
    if (n - 1 - j < corr.size()) w += corr[n - 1 - j];
    g.weights[j] = w * h * map.dx(s);
  }
  g.xi.front() = xi_min;
  return g;
}

FrequencyGrid FrequencyGrid::every_other() const {
  const std::size_t n = xi.size();
  if (n % 2 == 0) throw std::invalid_argument("FrequencyGrid::every_other: even node count");
  const SoftplusMap map{c};
  const double s0 = map.s_of(xi_min), s1 = map.s_of(xi_max);
  const std::size_t m = (n - 1) / 2 + 1;
  if (m < 17) throw std::invalid_argument("FrequencyGrid::every_other: too few nodes");
  const double h = (s1 - s0) / static_cast<double>(m - 1);
  const auto corr = gregory_corrections(8);
  FrequencyGrid g = *this;
  g.ds = h;
  g.xi.resize(m);
  g.weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    g.xi[j] = xi[2 * j];
    double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
    if (j < corr.size()) w += corr[j];
    if (m - 1 - j < corr.size()) w += corr[m - 1 - j];
    g.weights[j] = w * h * map.dx(s0 + h * static_cast<double>(j));
  }
  return g;
}

EigenTable EigenTable::every_other() const {
  std::vector<EigenTableEntry> e;
  for (std::size_t k = 0; k < entries_.size(); k += 2) e.push_back(entries_[k]);
  return {xg_.every_other(), grid_, std::move(e), zero_u_, zero_v_};
}

EigenTable EigenTable::coarsened() const {
  auto half = [](const std::vector<double>& x) {
    std::vector<double> y;
    for (std::size_t i = 0; i < x.size(); i += 2) y.push_back(x[i]);
    return y;
  };
  auto grid = std::make_shared<const RadialGrid>(grid_->every_other());
  std::vector<EigenTableEntry> e;
  for (std::size_t k = 0; k < entries_.size(); k += 2) {
    e.push_back(entries_[k]);
    e.back().u = half(e.back().u);
    e.back().v = half(e.back().v);
  }
  return {xg_.every_other(), std::move(grid), std::move(e), half(zero_u_), half(zero_v_)};
}

EigenTable::EigenTable(FrequencyGrid xg, std::shared_ptr<const RadialGrid> grid, std::vector<EigenTableEntry> entries,
                       std::vector<double> zero_u, std::vector<double> zero_v)
    : xg_(std::move(xg)),
      grid_(std::move(grid)),
      entries_(std::move(entries)),
      zero_u_(std::move(zero_u)),
      zero_v_(std::move(zero_v)) {}

Eigen::Vector2d EigenTable::value(std::size_t k, int sign, std::size_t node) const {
  const auto& en = entries_[k];
  if (sign >= 0) return {en.u[node], en.v[node]};
  return {-en.v[node], -en.u[node]};
}

double two_radius_consistency(const SpectralPoint& sp, const VortexProfile& profile, const RadialGrid& grid,
                              const EigenOptions& opt) {
  const double r1 = opt.r_match > 0.0 ? opt.r_match : default_match_radius(sp.abs_xi(), grid.r_max(), opt.y0);
  const SpectralPoint p = sp.xi < 0 ? SpectralPoint::from_xi(-sp.xi) : sp;
  auto coeffs = [&](double r) {
    const auto b = fundamental_basis(p, profile, grid, r, opt);
    const auto c = match(b, profile, opt).coeffs;
    return Eigen::Vector4d(c.alpha3, c.alpha4, c.beta1, c.beta2);
  };
  const Eigen::Vector4d a = coeffs(r1), b = coeffs(std::min(2.0 * r1, 0.9 * grid.r_max()));
  return (a - b).norm() / a.norm();
}

EigenTable build_table(const VortexProfile& profile, const FrequencyGrid& xg, std::shared_ptr<const RadialGrid> grid,
                       const TableOptions& opt) {
  const std::size_t n = xg.size();
  std::vector<EigenTableEntry> entries(n);
  std::vector<std::string> errors(n);
  parallel_for(n, opt.threads, [&](std::size_t k) {
    try {
      const auto sp = SpectralPoint::from_xi(xg.xi[k]);
      const auto e = eigenfunction(sp, profile, grid, opt.eigen);
      auto& en = entries[k];
      en.xi = xg.xi[k];
      en.u.resize(e.size());
      en.v.resize(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) {
        en.u[i] = e.states[i](0);
        en.v[i] = e.states[i](2);
      }
      en.coeffs = e.coeffs;
      en.gamma1 = e.gamma1;
      en.gamma2 = e.gamma2;
      en.origin_slope = e.origin_slope;
      en.gap = e.gap;
      en.residual = e.residual;
      en.match_jump = e.match_jump;
      for (std::size_t i = e.match_index; i < e.size(); ++i)
        en.wronskian_drift =
            std::max(en.wronskian_drift, std::abs(wronskian(e.conjugate_sample(i), e.sample(i)) - 1.0));
      if (opt.two_radius) en.two_radius = two_radius_consistency(sp, profile, *grid, opt.eigen);
    } catch (const std::exception& ex) {
      errors[k] = ex.what();
    }
  });

  std::vector<std::size_t> failed;
  std::string msg;
  for (std::size_t k = 0; k < n; ++k) {
    if (!errors[k].empty()) {
      failed.push_back(k);
      if (failed.size() <= 5) msg += "\n  [" + std::to_string(k) + "] " + errors[k];
    }
  }
  if (!failed.empty()) {
    throw TableBuildError("build_table: " + std::to_string(failed.size()) + " frequency nodes failed" + msg, failed);
  }

  std::vector<double> zu(grid->size()), zv(grid->size());
  const double c0 = std::sqrt(kPi / 4.0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double rho = profile.fn->eval(grid->r(i)).f;
    zu[i] = c0 * rho;
    zv[i] = -c0 * rho;
  }
  return {xg, std::move(grid), std::move(entries), std::move(zu), std::move(zv)};
}

namespace {

constexpr char kMagic[8] = {'V', 'S', 'P', 'E', 'C', 'T', 'B', '2'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
void put_vec(std::ostream& os, const std::vector<double>& v) {
  put(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void get_vec(std::istream& is, std::vector<double>& v) {
  std::uint64_t n = 0;
  get(is, n);
  if (n > (1ull << 32)) throw std::runtime_error("load_table: corrupt vector length");
  v.resize(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
}

}  // namespace

void save_table(const EigenTable& t, const std::string& path, const std::string& key) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_table: cannot open " + tmp);
    os.write(kMagic, sizeof kMagic);
    put(os, static_cast<std::uint64_t>(key.size()));
    os.write(key.data(), static_cast<std::streamsize>(key.size()));
    const auto& xg = t.xi_grid();
    put(os, xg.xi_min);
    put(os, xg.xi_max);
    put(os, xg.ds);
    put(os, xg.c);
    const auto& g = *t.grid();
    put(os, g.r_min());
    put(os, g.r_max());
    put(os, g.ds());
    put(os, g.map().c);
    put(os, static_cast<std::uint64_t>(g.size()));
    put_vec(os, t.zero_u());
    put_vec(os, t.zero_v());
    put(os, static_cast<std::uint64_t>(t.size()));
    for (const auto& e : t.entries()) {
      put(os, e.xi);
      put_vec(os, e.u);
      put_vec(os, e.v);
      const double meta[] = {e.coeffs.beta1, e.coeffs.beta2, e.coeffs.alpha2, e.coeffs.alpha3, e.coeffs.alpha4,
                             e.gamma1,       e.gamma2,       e.origin_slope,  e.gap,           e.residual,
                             e.match_jump,   e.two_radius,   e.wronskian_drift};
      for (double m : meta) put(os, m);
    }
    if (!os) throw std::runtime_error("save_table: write failed for " + tmp);
  }
  std::rename(tmp.c_str(), path.c_str());
}

namespace {

// Positions the stream after the key; false for a missing file or another format.
bool read_key(std::ifstream& is, std::string& key) {
  if (!is) return false;
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) return false;
  std::uint64_t klen = 0;
  get(is, klen);
  if (!is || klen > 4096) return false;
  key.assign(klen, '\0');
  is.read(key.data(), static_cast<std::streamsize>(klen));
  return static_cast<bool>(is);
}

}  // namespace

std::optional<std::string> table_key(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::string k;
  if (!read_key(is, k)) return std::nullopt;
  return k;
}

bool load_table(const std::string& path, const std::string& key, EigenTable& out) {
  std::ifstream is(path, std::ios::binary);
  std::string k;
  if (!read_key(is, k) || k != key) return false;
  double xmin, xmax, xds, xc, rmin, rmax, rds, rc;
  std::uint64_t nodes = 0;
  get(is, xmin);
  get(is, xmax);
  get(is, xds);
  get(is, xc);
  get(is, rmin);
  get(is, rmax);
  get(is, rds);
  get(is, rc);
  get(is, nodes);
  auto grid = std::make_shared<const RadialGrid>(RadialGrid::make(rmin, rmax, rds * (1.0 + 1e-12), rc));
  if (grid->size() != nodes) throw std::runtime_error("load_table: grid reconstruction mismatch");
  std::vector<double> zu, zv;
  get_vec(is, zu);
  get_vec(is, zv);
  std::uint64_t count = 0;
  get(is, count);
  std::vector<EigenTableEntry> entries(count);
  for (auto& e : entries) {
    get(is, e.xi);
    get_vec(is, e.u);
    get_vec(is, e.v);
    double meta[13];
    for (double& m : meta) get(is, m);
    e.coeffs = {meta[0], meta[1], meta[2], meta[3], meta[4]};
    e.gamma1 = meta[5];
    e.gamma2 = meta[6];
    e.origin_slope = meta[7];
    e.gap = meta[8];
    e.residual = meta[9];
    e.match_jump = meta[10];
    e.two_radius = meta[11];
    e.wronskian_drift = meta[12];
  }
  if (!is) throw std::runtime_error("load_table: truncated file " + path);
  out = EigenTable(FrequencyGrid::make(xmin, xmax, xds, xc), std::move(grid), std::move(entries), std::move(zu),
                   std::move(zv));
  if (out.xi_grid().size() != out.size()) throw std::runtime_error("load_table: frequency grid mismatch");
  return true;
}

}  // namespace vspec

#include "vspec/flat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vspec/parallel.hpp"
#include "vspec/special.hpp"
#include "vspec/spectral.hpp"

namespace vspec {

namespace {

const double kSqrtHalfPi = std::sqrt(0.5 * std::numbers::pi);

void require_grid(const RadialField& f, const RadialGrid& g, const char* who) {
  if (!f.grid || !f.grid->same_as(g)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

double bessel_j0(double x) { return special::bessel({special::Family::J, 0}, x); }

std::vector<double> component(const std::vector<cplx>& f, bool imag) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = imag ? f[i].imag() : f[i].real();
  return out;
}

// f'' + f'/r
std::vector<cplx> laplacian0(const RadialGrid& g, const std::vector<cplx>& f) {
  std::vector<cplx> out(f.size());
  for (bool im : {false, true}) {
    const auto c = component(f, im);
    const auto d1 = g.d_dr(c, 6), d2 = g.d2_dr2(c, 6);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double l = d2[i] + d1[i] / g.r(i);
      out[i] += im ? cplx(0.0, l) : cplx(l, 0.0);
    }
  }
  return out;
}

}  // namespace

FlatMultiplier FlatMultiplier::at(double xi) {
  if (xi == 0.0) throw std::invalid_argument("FlatMultiplier: xi must be nonzero");
  FlatMultiplier m;
  m.xi = xi;
  m.lambda = lambda_of_xi(xi);
  m.u_symbol = xi / std::sqrt(2.0 + xi * xi);
  const double c = dlambda_of_xi(xi) / xi;
  const Eigen::Vector2d em = SpectralPoint::from_xi(-xi).e, ep = SpectralPoint::from_xi(xi).e;
  const Eigen::Vector2d sm(em(0), -em(1)), sp(ep(0), -ep(1));
  m.m_plus = -c * em * sm.transpose();
  m.m_minus = c * ep * sp.transpose();
  return m;
}

Eigen::Matrix2cd FlatMultiplier::propagator(double t) const {
  const cplx a = std::polar(0.5, -t * lambda), b = std::conj(a);
  return a * m_plus.cast<cplx>() + b * m_minus.cast<cplx>();
}

Eigen::Vector2d flat_eigenfunction(double xi, double r) {
  return kSqrtHalfPi * bessel_j0(std::abs(xi) * r) * SpectralPoint::from_xi(xi).e;
}

FlatBasis::FlatBasis(FrequencyGrid xg, std::shared_ptr<const RadialGrid> grid, unsigned threads)
    : xg_(std::move(xg)), grid_(std::move(grid)), threads_(threads) {
  const std::size_t nr = grid_->size();
  j0_.resize(xg_.size() * nr);
  parallel_for(xg_.size(), threads_, [&](std::size_t k) {
    for (std::size_t i = 0; i < nr; ++i) j0_[k * nr + i] = bessel_j0(xg_.xi[k] * grid_->r(i));
  });
}

std::vector<cplx> FlatBasis::hankel(const std::vector<cplx>& f) const {
  const std::size_t nr = grid_->size();
  if (f.size() != nr) throw std::invalid_argument("hankel: size mismatch");
  const auto& w = grid_->weights();
  // origin cell (0, r_min) with f constant: fields here need not vanish at 0
  const double w0 = 0.5 * grid_->r_min() * grid_->r_min();
  std::vector<cplx> h(xg_.size());
  parallel_for(xg_.size(), threads_, [&](std::size_t k) {
    const double* row = &j0_[k * nr];
    cplx s = w0 * row[0] * f[0];
    for (std::size_t i = 0; i < nr; ++i) s += w[i] * row[i] * f[i];
    h[k] = s;
  });
  return h;
}

std::vector<cplx> FlatBasis::hankel_inverse(const std::vector<cplx>& h) const {
  if (h.size() != xg_.size()) throw std::invalid_argument("hankel_inverse: size mismatch");
  const std::size_t nr = grid_->size(), block = 256;
  std::vector<cplx> a(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) a[k] = xg_.weights[k] * xg_.xi[k] * h[k];
  a[0] += 0.5 * xg_.xi_min * xg_.xi_min * h[0];
  std::vector<cplx> f(nr);
  parallel_for((nr + block - 1) / block, threads_, [&](std::size_t blk) {
    const std::size_t lo = blk * block, hi = std::min(nr, lo + block);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double* row = &j0_[k * nr];
      for (std::size_t i = lo; i < hi; ++i) f[i] += a[k] * row[i];
    }
  });
  return f;
}

SpectralDensity FlatBasis::forward(const RadialField& field) const {
  require_grid(field, *grid_, "FlatBasis::forward");
  const auto hu = hankel(field.u), hv = hankel(field.v);
  SpectralDensity d(xg_);
  for (std::size_t k = 0; k < xg_.size(); ++k) {
    const Eigen::Vector2d ep = SpectralPoint::from_xi(xg_.xi[k]).e, em = SpectralPoint::from_xi(-xg_.xi[k]).e;
    d.plus[k] = kSqrtHalfPi * (ep(0) * hu[k] - ep(1) * hv[k]);
    d.minus[k] = kSqrtHalfPi * (em(0) * hu[k] - em(1) * hv[k]);
  }
  return d;
}

RadialField FlatBasis::inverse(const SpectralDensity& density) const {
  if (density.grid.xi != xg_.xi) throw std::invalid_argument("FlatBasis::inverse: frequency grid mismatch");
  // J0 is even, so both signs share the Hankel kernel:
  // phi = (1/pi) int_0^inf sqrt(pi/2) J0(xi r) [zeta(xi) e(xi) - zeta(-xi) e(-xi)] lambda' dxi
  const auto wk = spectral_weights(xg_);
  std::vector<cplx> gu(xg_.size()), gv(xg_.size());
  for (std::size_t k = 0; k < xg_.size(); ++k) {
    const Eigen::Vector2d ep = SpectralPoint::from_xi(xg_.xi[k]).e, em = SpectralPoint::from_xi(-xg_.xi[k]).e;
    const double c = kSqrtHalfPi * wk[k] / std::numbers::pi;
    gu[k] = c * (density.plus[k] * ep(0) - density.minus[k] * em(0));
    gv[k] = c * (density.plus[k] * ep(1) - density.minus[k] * em(1));
  }
  const std::size_t nr = grid_->size(), block = 256;
  RadialField out(grid_);
  parallel_for((nr + block - 1) / block, threads_, [&](std::size_t blk) {
    const std::size_t lo = blk * block, hi = std::min(nr, lo + block);
    for (std::size_t k = 0; k < xg_.size(); ++k) {
      const double* row = &j0_[k * nr];
      for (std::size_t i = lo; i < hi; ++i) {
        out.u[i] += gu[k] * row[i];
        out.v[i] += gv[k] * row[i];
      }
    }
  });
  return out;
}

EvolutionResult FlatBasis::propagate(const RadialField& field, double t, const PropagateOptions& opt) const {
  require_grid(field, *grid_, "FlatBasis::propagate");
  auto hu = hankel(field.u), hv = hankel(field.v);
  SpectralDensity support(xg_);
  for (std::size_t k = 0; k < xg_.size(); ++k) support.plus[k] = std::sqrt(std::norm(hu[k]) + std::norm(hv[k]));
  const double step = max_phase_step(support, t, opt.support_threshold);
  if (opt.refuse && step > opt.max_phase_step) {
    throw UnresolvedPhase("flat propagate: phase step " + std::to_string(step) + " exceeds " +
                              std::to_string(opt.max_phase_step) + " at t = " + std::to_string(t),
                          step);
  }
  for (std::size_t k = 0; k < xg_.size(); ++k) {
    const Eigen::Vector2cd y = FlatMultiplier::at(xg_.xi[k]).propagator(t) * Eigen::Vector2cd(hu[k], hv[k]);
    hu[k] = y(0);
    hv[k] = y(1);
  }
  RadialField out(grid_);
  out.u = hankel_inverse(hu);
  out.v = hankel_inverse(hv);
  auto res = summarize(t, std::move(out));
  res.phase_step = step;
  return res;
}

EvolutionResult FlatBasis::propagate_density(const SpectralDensity& z0, double t, const PropagateOptions& opt) const {
  const double step = max_phase_step(z0, t, opt.support_threshold);
  if (opt.refuse && step > opt.max_phase_step) {
    throw UnresolvedPhase("flat propagate: phase step " + std::to_string(step) + " exceeds " +
                              std::to_string(opt.max_phase_step) + " at t = " + std::to_string(t),
                          step);
  }
  SpectralDensity z = z0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const cplx m = std::polar(1.0, t * lambda_of_xi(z.grid.xi[k]));
    z.plus[k] *= m;
    z.minus[k] *= std::conj(m);
  }
  auto res = summarize(t, inverse(z));
  res.phase_step = step;
  return res;
}

RadialField apply_G(const RadialField& field) {
  const auto& g = *field.grid;
  const auto lu = laplacian0(g, field.u), lv = laplacian0(g, field.v);
  RadialField out(field.grid);
  for (std::size_t i = 0; i < field.size(); ++i) {
    out.u[i] = -lu[i] + field.u[i] + field.v[i];
    out.v[i] = lv[i] - field.v[i] - field.u[i];
  }
  return out;
}

double flat_diag_defect(const RadialField& field, const FlatBasis& basis) {
  const auto gf = basis.forward(apply_G(field));
  const auto f = basis.forward(field);
  const auto wk = spectral_weights(basis.xi_grid());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double lam = lambda_of_xi(basis.xi_grid().xi[k]);
    num += wk[k] * (std::norm(gf.plus[k] - lam * f.plus[k]) + std::norm(gf.minus[k] + lam * f.minus[k]));
    den += wk[k] * (std::norm(gf.plus[k]) + std::norm(gf.minus[k]));
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double flat_plancherel_defect(const RadialField& f1, const RadialField& f2, const FlatBasis& basis) {
  require_grid(f1, *basis.grid(), "flat_plancherel_defect");
  require_grid(f2, *basis.grid(), "flat_plancherel_defect");
  RadialField s2 = f2;
  for (auto& x : s2.v) x = -x;
  const cplx lhs = std::numbers::pi * pairing(f1, s2);
  const auto z1 = basis.forward(f1), z2 = basis.forward(f2);
  const auto wk = spectral_weights(basis.xi_grid());
  cplx rhs = 0.0;
  for (std::size_t k = 0; k < z1.size(); ++k) rhs += wk[k] * (z1.plus[k] * z2.plus[k] - z1.minus[k] * z2.minus[k]);
  if (lhs == 0.0 && rhs == 0.0) return 0.0;
  const double scale = std::abs(lhs) > 0.0 ? std::abs(lhs) : std::numbers::pi * f1.l2_norm() * f2.l2_norm();
  return std::abs(lhs - rhs) / scale;
}

cplx flat_pairing(const RadialField& field) {
  std::vector<cplx> s(field.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = field.u[i] + field.v[i];
  return field.grid->integrate(s);
}

RadialField flat_project_orthogonal(const RadialField& field) {
  RadialField tmpl(field.grid);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const double r = tmpl.grid->r(i);
    tmpl.u[i] = tmpl.v[i] = std::exp(-r * r / 8.0);
  }
  return field - (flat_pairing(field) / flat_pairing(tmpl)) * tmpl;
}

double cross_check(double xi, const std::vector<double>& u, const std::vector<double>& v, const RadialGrid& grid,
                   double r_lo, double r_hi) {
  if (!(xi > 0.0)) throw std::invalid_argument("cross_check: xi must be positive");
  if (!(r_lo > 0.0 && r_hi > r_lo && r_hi <= grid.r_max())) throw std::invalid_argument("cross_check: bad window");
  if (u.size() != grid.size() || v.size() != grid.size()) throw std::invalid_argument("cross_check: size mismatch");
  const Eigen::Vector2d e = SpectralPoint::from_xi(xi).e;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.r(i) >= r_lo && grid.r(i) <= r_hi) idx.push_back(i);
  }
  if (idx.size() < 8) throw std::invalid_argument("cross_check: window holds too few nodes");
  const auto& w = grid.weights();
  Eigen::MatrixXd a(idx.size(), 2);
  Eigen::VectorXd y(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const std::size_t i = idx[j];
    const double x = xi * grid.r(i), s = std::sqrt(w[i] / grid.r(i)), amp = std::sqrt(x) * kSqrtHalfPi;
    y(static_cast<Eigen::Index>(j)) = s * std::sqrt(x) * (u[i] * e(0) + v[i] * e(1));
    a(static_cast<Eigen::Index>(j), 0) = s * amp * bessel_j0(x);
    a(static_cast<Eigen::Index>(j), 1) = s * amp * special::bessel({special::Family::Y, 0}, x);
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  const double ny = y.norm();
  return ny == 0.0 ? 0.0 : (y - a * c).norm() / ny;
}

double cross_check(double xi, const EigenTable& table, double r_lo, double r_hi) {
  if (table.size() == 0) throw std::invalid_argument("cross_check: empty table");
  const auto& x = table.xi_grid().xi;
  std::size_t best = 0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::abs(x[k] - xi) < std::abs(x[best] - xi)) best = k;
  }
  const auto& e = table.entry(best);
  return cross_check(e.xi, e.u, e.v, *table.grid(), r_lo, r_hi);
}

}  // namespace vspec

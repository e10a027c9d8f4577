#include "vspec/dft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vspec/parallel.hpp"

namespace vspec {

namespace {

void require_grid(const RadialField& f, const RadialGrid& g, const char* who) {
  if (!f.grid || !f.grid->same_as(g)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

void require_density(const SpectralDensity& d, const EigenTable& t, const char* who) {
  if (d.size() != t.size() || d.grid.xi != t.xi_grid().xi) {
    throw std::invalid_argument(std::string(who) + ": frequency grid mismatch");
  }
}

std::vector<double> component(const std::vector<cplx>& f, bool imag) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = imag ? f[i].imag() : f[i].real();
  return out;
}

// f'' + f'/r - f/r^2
std::vector<cplx> radial_laplacian(const RadialGrid& g, const std::vector<cplx>& f) {
  std::vector<cplx> out(f.size());
  for (bool im : {false, true}) {
    const auto c = component(f, im);
    const auto d1 = g.d_dr(c, 6), d2 = g.d2_dr2(c, 6);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = g.r(i);
      const double l = d2[i] + d1[i] / r - c[i] / (r * r);
      out[i] += im ? cplx(0.0, l) : cplx(l, 0.0);
    }
  }
  return out;
}

}  // namespace

SpectralDensity::SpectralDensity(FrequencyGrid g)
    : grid(std::move(g)), plus(grid.size(), 0.0), minus(grid.size(), 0.0), tail(grid.size(), 0.0) {}

std::vector<double> SpectralDensity::xi_signed() const {
  const std::size_t n = size();
  std::vector<double> x(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    x[n - 1 - k] = -grid.xi[k];
    x[n + k] = grid.xi[k];
  }
  return x;
}

std::vector<cplx> SpectralDensity::values() const {
  const std::size_t n = size();
  std::vector<cplx> v(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    v[n - 1 - k] = minus[k];
    v[n + k] = plus[k];
  }
  return v;
}

double SpectralDensity::tail_budget() const {
  double m = 0.0;
  for (double t : tail) m = std::max(m, t);
  return m;
}

SpectralDensity forward(const RadialField& field, const EigenTable& table, unsigned threads) {
  const auto& g = *table.grid();
  require_grid(field, g, "forward");
  const auto& w = g.weights();
  const std::size_t nr = g.size();
  std::size_t i_tail = nr;
  while (i_tail > 0 && g.r(i_tail - 1) >= 0.9 * g.r_max()) --i_tail;
  double phi_tail = 0.0;
  for (std::size_t i = i_tail; i < nr; ++i) phi_tail += w[i] * (std::norm(field.u[i]) + std::norm(field.v[i]));
  phi_tail = std::sqrt(phi_tail);

  SpectralDensity d(table.xi_grid());
  parallel_for(table.size(), threads, [&](std::size_t k) {
    const auto& e = table.entry(k);
    cplx p = 0.0, m = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      // psi(-xi) = (-v, -u); sigma3 phi = (phi_u, -phi_v)
      p += w[i] * (e.u[i] * field.u[i] - e.v[i] * field.v[i]);
      m += w[i] * (-e.v[i] * field.u[i] + e.u[i] * field.v[i]);
    }
    double psi_tail = 0.0;
    for (std::size_t i = i_tail; i < nr; ++i) psi_tail += w[i] * (e.u[i] * e.u[i] + e.v[i] * e.v[i]);
    d.plus[k] = p;
    d.minus[k] = m;
    d.tail[k] = phi_tail * std::sqrt(psi_tail);
  });
  return d;
}

cplx forward_at(const RadialField& field, const Eigenfunction& eig) {
  require_grid(field, *eig.grid, "forward_at");
  const auto& w = eig.grid->weights();
  cplx s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    s += w[i] * (eig.states[i](0) * field.u[i] - eig.states[i](2) * field.v[i]);
  }
  return s;
}

std::vector<double> spectral_weights(const FrequencyGrid& grid) {
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) w[k] = grid.weights[k] * dlambda_of_xi(grid.xi[k]);
  w[0] += 0.5 * grid.xi_min * dlambda_of_xi(grid.xi_min);
  return w;
}

RadialField inverse(const SpectralDensity& density, const EigenTable& table, unsigned threads) {
  require_density(density, table, "inverse");
  const auto wk = spectral_weights(table.xi_grid());
  RadialField out(table.grid());
  const std::size_t nr = out.size(), block = 256;
  const std::size_t nblocks = (nr + block - 1) / block;
  std::vector<cplx> a(table.size()), b(table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    a[k] = wk[k] * density.plus[k] / std::numbers::pi;
    b[k] = wk[k] * density.minus[k] / std::numbers::pi;
  }
  parallel_for(nblocks, threads, [&](std::size_t blk) {
    const std::size_t lo = blk * block, hi = std::min(nr, lo + block);
    for (std::size_t k = 0; k < table.size(); ++k) {
      const auto& e = table.entry(k);
      // zeta(xi) psi(xi) - zeta(-xi) psi(-xi) with psi(-xi) = -(v, u)
      for (std::size_t i = lo; i < hi; ++i) {
        out.u[i] += a[k] * e.u[i] + b[k] * e.v[i];
        out.v[i] += a[k] * e.v[i] + b[k] * e.u[i];
      }
    }
  });
  return out;
}

RadialField apply_H(const RadialField& field, const VortexProfile& profile) {
  const auto& g = *profile.grid;
  require_grid(field, g, "apply_H");
  const auto lu = radial_laplacian(g, field.u), lv = radial_laplacian(g, field.v);
  RadialField out(field.grid);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double q = profile.rho[i] * profile.rho[i];
    out.u[i] = -lu[i] + (2.0 * q - 1.0) * field.u[i] + q * field.v[i];
    out.v[i] = lv[i] - (2.0 * q - 1.0) * field.v[i] - q * field.u[i];
  }
  return out;
}

double diag_defect(const RadialField& field, const EigenTable& table, const VortexProfile& profile) {
  const auto hf = forward(apply_H(field, profile), table);
  const auto f = forward(field, table);
  const auto wk = spectral_weights(table.xi_grid());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double lam = lambda_of_xi(table.xi_grid().xi[k]);
    num += wk[k] * (std::norm(hf.plus[k] - lam * f.plus[k]) + std::norm(hf.minus[k] + lam * f.minus[k]));
    den += wk[k] * (std::norm(hf.plus[k]) + std::norm(hf.minus[k]));
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double plancherel_defect(const RadialField& f1, const RadialField& f2, const EigenTable& table) {
  const auto& g = *table.grid();
  require_grid(f1, g, "plancherel_defect");
  require_grid(f2, g, "plancherel_defect");
  RadialField s2 = f2;
  for (auto& x : s2.v) x = -x;
  const cplx lhs = std::numbers::pi * pairing(f1, s2);
  const auto z1 = forward(f1, table), z2 = forward(f2, table);
  const auto wk = spectral_weights(table.xi_grid());
  cplx rhs = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) rhs += wk[k] * (z1.plus[k] * z2.plus[k] - z1.minus[k] * z2.minus[k]);
  if (lhs == 0.0 && rhs == 0.0) return 0.0;
  const double scale = std::abs(lhs) > 0.0 ? std::abs(lhs) : std::numbers::pi * f1.l2_norm() * f2.l2_norm();
  return std::abs(lhs - rhs) / scale;
}

TildeNorm tilde_norm(const SpectralDensity& density) {
  TildeNorm t;
  const auto& x = density.grid.xi;
  const auto& w = density.grid.weights;
  double e = 0.0, o = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    e += 2.0 * w[k] * x[k] * std::norm(density.even(k));
    const double weight = (1.0 + x[k] * x[k]) / (x[k] * x[k]);
    const double term = 2.0 * w[k] * x[k] * weight * std::norm(density.odd(k));
    if (k == 0) {
      t.excluded = std::sqrt(term);
    } else {
      o += term;
    }
  }
  t.even = std::sqrt(e);
  t.odd = std::sqrt(o);
  t.value = t.even + t.odd;
  return t;
}

}  // namespace vspec

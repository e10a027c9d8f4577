#include "vspec/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vspec/spectral.hpp"

namespace vspec {

double max_phase_step(const SpectralDensity& z, double t, double support_threshold) {
  double peak = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) peak = std::max({peak, std::abs(z.plus[k]), std::abs(z.minus[k])});
  const double floor = support_threshold * peak;
  double step = 0.0;
  for (std::size_t k = 0; k + 1 < z.size(); ++k) {
    const double a = std::max(std::abs(z.plus[k]), std::abs(z.minus[k]));
    const double b = std::max(std::abs(z.plus[k + 1]), std::abs(z.minus[k + 1]));
    if (std::max(a, b) <= floor) continue;
    step = std::max(step, std::abs(t * (lambda_of_xi(z.grid.xi[k + 1]) - lambda_of_xi(z.grid.xi[k]))));
  }
  return step;
}

EvolutionResult summarize(double t, RadialField field) {
  EvolutionResult res;
  res.t = t;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double m = std::sqrt(std::norm(field.u[i]) + std::norm(field.v[i]));
    if (m > res.sup_norm) {
      res.sup_norm = m;
      res.argmax_r = field.grid->r(i);
    }
  }
  res.l2_norm = field.l2_norm();
  res.field = std::move(field);
  return res;
}

EvolutionResult propagate_density(const SpectralDensity& z0, double t, const EigenTable& table,
                                  const PropagateOptions& opt) {
  const double step = max_phase_step(z0, t, opt.support_threshold);
  if (opt.refuse && step > opt.max_phase_step) {
    throw UnresolvedPhase("propagate: phase step " + std::to_string(step) + " exceeds " +
                              std::to_string(opt.max_phase_step) + " at t = " + std::to_string(t),
                          step);
  }
  SpectralDensity z = z0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const cplx m = std::polar(1.0, t * lambda_of_xi(z.grid.xi[k]));
    z.plus[k] *= m;
    z.minus[k] *= std::conj(m);
  }
  auto res = summarize(t, inverse(z, table, opt.threads));
  res.phase_step = step;
  return res;
}

EvolutionResult propagate(const RadialField& field, double t, const EigenTable& table, const PropagateOptions& opt) {
  return propagate_density(forward(field, table, opt.threads), t, table, opt);
}

SpectralDensity band_limit(SpectralDensity z, double xi_cut) {
  if (!(xi_cut > 0.0)) throw std::invalid_argument("band_limit: xi_cut must be positive");
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double c = cutoff(2.0 * z.grid.xi[k] / xi_cut);
    z.plus[k] *= c;
    z.minus[k] *= c;
  }
  return z;
}

std::pair<cplx, cplx> orthogonality(const RadialField& field, const VortexProfile& profile) {
  if (!field.grid->same_as(*profile.grid)) throw std::invalid_argument("orthogonality: grid mismatch");
  RadialField a(field.grid), b(field.grid);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double rho = profile.rho[i], x1 = field.grid->r(i) * profile.drho[i] + rho;
    a.u[i] = a.v[i] = rho;
    b.u[i] = x1;
    b.v[i] = -x1;
  }
  return {pairing(field, a), pairing(field, b)};
}

RadialField orthogonality_template(std::shared_ptr<const RadialGrid> grid) {
  RadialField t(std::move(grid));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = t.grid->r(i);
    t.u[i] = t.v[i] = r * std::exp(-r * r / 8.0);
  }
  return t;
}

RadialField project_orthogonal(const RadialField& field, const VortexProfile& profile) {
  const auto tmpl = orthogonality_template(field.grid);
  const cplx c = orthogonality(field, profile).first / orthogonality(tmpl, profile).first;
  return field - c * tmpl;
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& norms) {
  if (times.size() != norms.size() || times.size() < 5) throw std::invalid_argument("fit_decay: need >= 5 samples");
  double lo = times.front(), hi = times.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(norms[i] > 0.0)) throw std::invalid_argument("fit_decay: samples must be positive");
    lo = std::min(lo, times[i]);
    hi = std::max(hi, times[i]);
  }
  if (hi < 10.0 * lo * (1.0 - 1e-12)) throw std::invalid_argument("fit_decay: times must span a decade");
  const double n = static_cast<double>(times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = std::log(times[i]), y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = n * sxx - sx * sx, vy = n * syy - sy * sy, cxy = n * sxy - sx * sy;
  DecayFit f;
  f.exponent = cxy / vx;
  f.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

std::vector<double> l2_growth(const RadialField& field, const std::vector<double>& times, const EigenTable& table,
                              const PropagateOptions& opt) {
  const auto z0 = forward(field, table, opt.threads);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(t == 0.0 ? field.l2_norm() : propagate_density(z0, t, table, opt).l2_norm);
  return out;
}

double stationary_point(double t, double r) {
  // lambda'(xi) = q  <=>  4 y^2 + (8 - q^2) y + 4 - 2 q^2 = 0,  y = xi^2
  const double q = r / t;
  if (q < std::sqrt(2.0)) return -1.0;
  const double y = (q * q - 8.0 + q * std::sqrt(q * q + 16.0)) / 8.0;
  return std::sqrt(std::max(0.0, y));
}

ModelIntegral model_integral(double t, double r, const std::function<double(double)>& phi,
                             const std::function<double(double, double)>& w, const ModelIntegralOptions& opt) {
  if (!(t > 0.0) || r < 0.0) throw std::invalid_argument("model_integral: need t > 0, r >= 0");
  ModelIntegral out;
  const double s = opt.support;
  out.xi0 = stationary_point(t, r);
  std::vector<double> br = {-s, 0.0, s};
  if (out.xi0 >= 0.0) {
    const double x0 = out.xi0;
    const double cube = std::cbrt(1.0 / t);
    out.scale = x0 > cube ? 1.0 / std::sqrt(t * x0) : cube;
    for (double c : {-x0, x0}) {
      for (double d : {-out.scale, out.scale}) br.push_back(c + d);
      br.push_back(c);
    }
  }
  for (auto& b : br) b = std::clamp(b, -s, s);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), br.end());
  out.breaks = br;

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto part = [&](bool imag) {
    return [&, imag](double x) {
      const double ph = t * lambda_of_xi(x) - r * x;
      const double amp = x * phi(x) * w(x, r);
      return amp * (imag ? std::sin(ph) : std::cos(ph));
    };
  };
  double scale = 0.0;
  for (std::size_t j = 0; j + 1 < br.size(); ++j) {
    for (bool imag : {false, true}) {
      double err = 0.0, l1 = 0.0;
      const double v = GK::integrate(part(imag), br[j], br[j + 1], static_cast<unsigned>(opt.max_depth), opt.tol,
                                     &err, &l1);
      out.value += imag ? cplx(0.0, v) : cplx(v, 0.0);
      out.error += err;
      scale += l1;
    }
  }
  if (out.error > std::max(opt.tol * scale, 1e-300) * 10.0) {
    throw std::runtime_error("model_integral: unresolved oscillation (error " + std::to_string(out.error) + ")");
  }
  return out;
}

cplx model_integral_reference(double t, double r, const std::function<double(double)>& phi,
                              const std::function<double(double, double)>& w, double support, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("model_integral_reference: n must be even");
  const double h = 2.0 * support / static_cast<double>(n);
  cplx sum = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double x = -support + h * static_cast<double>(j);
    const double c = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    sum += c * x * phi(x) * w(x, r) * std::polar(1.0, t * lambda_of_xi(x) - r * x);
  }
  return sum * h / 3.0;
}

}  // namespace vspec

#include "vspec/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vspec/dft.hpp"
#include "vspec/evolve.hpp"
#include "vspec/flat.hpp"
#include "vspec/io.hpp"

namespace vspec {

namespace {

constexpr double kPi = std::numbers::pi;

Check at_most(std::string name, double value, double limit, std::string note = {}) {
  return Check{std::move(name), value, Bound::AtMost, limit, 0.0, value <= limit, std::move(note)};
}

Check at_least(std::string name, double value, double limit, std::string note = {}) {
  return Check{std::move(name), value, Bound::AtLeast, limit, 0.0, value >= limit, std::move(note)};
}

Check within(std::string name, double value, double lo, double hi, std::string note = {}) {
  return Check{std::move(name), value, Bound::Window, lo, hi, value >= lo && value <= hi, std::move(note)};
}

std::string num(double x) {
  std::ostringstream ss;
  ss.precision(4);
  ss << x;
  return ss.str();
}

std::vector<double> log_times(double t0, double t1, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = t0 * std::pow(t1 / t0, j / double(n - 1));
  return t;
}

template <class U, class V>
RadialField sample(std::shared_ptr<const RadialGrid> g, U u, V v) {
  RadialField f(std::move(g));
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.u[i] = u(f.grid->r(i));
    f.v[i] = v(f.grid->r(i));
  }
  return f;
}

// Smooth first-harmonic fields: r times an even function of r.
std::vector<RadialField> vortex_battery(std::shared_ptr<const RadialGrid> g) {
  const cplx i1(0.0, 1.0);
  return {
      sample(g, [](double r) { return cplx(r * std::exp(-r * r / 2) * (1 + r * r / 2)); },
             [](double r) { return cplx(0.5 * r * std::exp(-r * r / 2) * (1 - r * r / 4)); }),
      sample(g, [](double r) { return cplx(r * std::exp(-r * r / 3)); },
             [](double r) { return cplx(r * std::exp(-r * r / 3)); }),
      sample(g, [](double r) { return cplx(r * r * r * std::exp(-r * r / 2)); },
             [](double r) { return cplx(-r * r * r * std::exp(-r * r / 2)); }),
      sample(g, [](double r) { return cplx(r * std::exp(-(r * r - 4) * (r * r - 4) / 8)); },
             [i1](double r) { return i1 * r * std::exp(-(r * r - 4) * (r * r - 4) / 8); }),
      sample(g, [](double r) { return cplx(r * std::exp(-r * r / 4) * std::cos(r)); },
             [](double r) { return cplx(0.3 * r * std::exp(-r * r / 4) * std::cos(r)); })};
}

// Smooth radial fields for the flat case.
std::vector<RadialField> flat_battery(std::shared_ptr<const RadialGrid> g) {
  const cplx i1(0.0, 1.0);
  return {
      sample(g, [](double r) { return cplx(std::exp(-r * r / 2) * (1 + 0.2 * r * r)); },
             [](double r) { return cplx(0.5 * std::exp(-r * r / 2)); }),
      sample(g, [](double r) { return cplx(std::exp(-r * r / 3)); },
             [](double r) { return cplx(std::exp(-r * r / 3)); }),
      sample(g, [](double r) { return cplx(r * r * std::exp(-r * r / 3)); },
             [](double r) { return cplx(-r * r * std::exp(-r * r / 3)); }),
      sample(g, [](double r) { return cplx(std::exp(-(r * r - 4) * (r * r - 4) / 8)); },
             [i1](double r) { return i1 * std::exp(-(r * r - 4) * (r * r - 4) / 8); }),
      sample(g, [](double r) { return cplx(std::exp(-r * r / 4) * std::cos(r)); },
             [](double r) { return cplx(0.3 * std::exp(-r * r / 4) * std::cos(r)); })};
}

// Smooth densities vanishing to fourth order at xi = 0, so the synthesized
// fields decay well inside r_max.
std::vector<SpectralDensity> density_battery(const FrequencyGrid& xg) {
  struct Bump {
    double a, c;
    cplx s;
  };
  const Bump plus[5] = {{2.0, 2.0, 1.0}, {1.0, 1.0, 1.0}, {4.0, 0.5, {0.0, 1.0}}, {0.5, 3.0, 1.0}, {3.0, 1.5, {1.0, 1.0}}};
  const Bump minus[5] = {{3.0, 1.5, {0.0, 0.5}}, {1.0, 1.0, -1.0}, {4.0, 0.5, 0.0}, {0.5, 2.5, 0.3}, {2.0, 1.0, -1.0}};
  std::vector<SpectralDensity> out;
  for (int j = 0; j < 5; ++j) {
    SpectralDensity z(xg);
    for (std::size_t k = 0; k < xg.size(); ++k) {
      const double x = xg.xi[k];
      z.plus[k] = plus[j].s * x * x * x * x * std::exp(-plus[j].a * (x - plus[j].c) * (x - plus[j].c));
      z.minus[k] = minus[j].s * x * x * x * x * std::exp(-minus[j].a * (x - minus[j].c) * (x - minus[j].c));
    }
    out.push_back(std::move(z));
  }
  return out;
}

double rel_l2(const RadialField& a, const RadialField& b) { return (a - b).l2_norm() / b.l2_norm(); }

// Relative L2(lambda' dxi) distance over both signs.
double rel_density(const SpectralDensity& a, const SpectralDensity& ref) {
  const auto w = spectral_weights(ref.grid);
  double err = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    err += w[k] * (std::norm(a.plus[k] - ref.plus[k]) + std::norm(a.minus[k] - ref.minus[k]));
    den += w[k] * (std::norm(ref.plus[k]) + std::norm(ref.minus[k]));
  }
  return std::sqrt(err / den);
}

cplx sigma3_pairing(const RadialField& phi, const RadialField& x) {
  RadialField s = x;
  for (auto& v : s.v) v = -v;
  return pairing(phi, s);
}

// Battery maxima of the four transform defects.
struct TransformDefects {
  double left = 0.0, right = 0.0, plancherel = 0.0, diag = 0.0;
};

struct Transform {
  std::function<SpectralDensity(const RadialField&)> forward;
  std::function<RadialField(const SpectralDensity&)> inverse;
  std::function<double(const RadialField&, const RadialField&)> plancherel;
  std::function<double(const RadialField&)> diag;
};

TransformDefects transform_defects(const Transform& t, const std::vector<RadialField>& fields,
                                   const std::vector<SpectralDensity>& densities) {
  TransformDefects d;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    d.left = std::max(d.left, rel_l2(t.inverse(t.forward(fields[j])), fields[j]));
    d.plancherel = std::max(d.plancherel, t.plancherel(fields[j], fields[(j + 1) % fields.size()]));
    d.diag = std::max(d.diag, t.diag(fields[j]));
  }
  for (const auto& z : densities) d.right = std::max(d.right, rel_density(t.forward(t.inverse(z)), z));
  return d;
}

void transform_checks(std::vector<Check>& out, const std::string& prefix, const TransformDefects& fine,
                      const TransformDefects& coarse, double tol) {
  const std::pair<const char*, double TransformDefects::*> kinds[] = {{"left inverse", &TransformDefects::left},
                                                                      {"right inverse", &TransformDefects::right},
                                                                      {"plancherel", &TransformDefects::plancherel},
                                                                      {"diagonalization", &TransformDefects::diag}};
  for (const auto& [name, m] : kinds) out.push_back(at_most(prefix + name + " defect", fine.*m, tol, "battery max"));
  for (const auto& [name, m] : kinds) {
    out.push_back(at_least(prefix + name + " halving gain", coarse.*m / fine.*m, 2.0,
                           "coarse " + num(coarse.*m) + " / fine " + num(fine.*m)));
  }
}

struct Dispersion {
  double exponent = 0.0, argmax_ratio = 0.0;
};

Dispersion dispersion(const std::function<EvolutionResult(double)>& run, const std::vector<double>& times) {
  std::vector<double> sup;
  EvolutionResult last;
  for (double t : times) {
    last = run(t);
    sup.push_back(last.sup_norm);
  }
  return {fit_decay(times, sup).exponent, last.argmax_r / last.t};
}

class Context {
 public:
  Context(const RunConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {}

  const RunConfig& cfg() const { return cfg_; }

  const VortexProfile& profile() {
    if (!profile_) profile_ = get_profile(false);
    return *profile_;
  }
  const EigenTable& table() {
    if (!table_) table_ = get_table(profile(), false, true);
    return *table_;
  }
  const VortexProfile& long_profile() {
    if (!long_profile_) long_profile_ = get_profile(true);
    return *long_profile_;
  }
  const EigenTable& long_table() {
    if (!long_table_) long_table_ = get_table(long_profile(), true, false);
    return *long_table_;
  }

  void note(const std::string& s) {
    if (log_) *log_ << "  " << s << std::endl;
  }

 private:
  VortexProfile get_profile(bool long_time) {
    note(std::string("profile (") + (long_time ? "long-time" : "default") + " grid)...");
    auto c = obtain_profile(cfg_, long_time);
    note(std::string(c.hit ? "cache hit " : "solved and stored ") + c.path);
    return std::move(c.value);
  }
  EigenTable get_table(const VortexProfile& p, bool long_time, bool two_radius) {
    note(std::string("eigen table (") + (long_time ? "long-time" : "default") + " grid)...");
    auto c = obtain_table(cfg_, p, long_time, two_radius);
    note(std::string(c.hit ? "cache hit " : "built and stored ") + c.path + " (" + std::to_string(c.value.size()) +
         " nodes)");
    return std::move(c.value);
  }

  RunConfig cfg_;
  std::ostream* log_;
  std::optional<VortexProfile> profile_, long_profile_;
  std::optional<EigenTable> table_, long_table_;
};

// 1
void profile_fidelity(Context& ctx, std::vector<Check>& out) {
  const auto& p = ctx.profile();
  const auto res = profile_residual(p);
  out.push_back(at_most("ode residual", *std::max_element(res.begin(), res.end()), 1e-8));
  out.push_back(at_most("|1 - rho(10) - 0.005|", std::abs(1.0 - p.at(10.0).f - 0.005), 5e-4));
  const auto id = derivative_identity_residual(p);
  double m = 0.0;
  for (std::size_t i = 0; i < id.size(); ++i) {
    const double r = p.grid->r(i);
    if (r >= 2.0 * p.grid->r_min() && r <= 0.5 * p.grid->r_max()) m = std::max(m, id[i]);
  }
  out.push_back(at_most("derivative identity", m, 1e-6, "r in [2 r_min, r_max / 2]"));
}

// 2
void resonance_algebra(Context& ctx, std::vector<Check>& out) {
  const auto& p = ctx.profile();
  const auto rv = resonance_vectors(p);
  const double n0 = rv.xi0.l2_norm();
  out.push_back(at_most("|H Xi0| / |Xi0|", apply_H(rv.xi0, p).l2_norm() / n0, 1e-6));
  out.push_back(at_most("|H Xi1 - 2 Xi0| / |Xi0|", (apply_H(rv.xi1, p) - cplx(2.0) * rv.xi0).l2_norm() / n0, 1e-6));
}

// 3
void eigen_structure(Context& ctx, std::vector<Check>& out) {
  const auto& t = ctx.table();
  double gap = INFINITY, norm = 0.0, wr = 0.0, tr = 0.0;
  std::size_t tr_missing = 0;
  for (const auto& e : t.entries()) {
    gap = std::min(gap, e.gap);
    norm = std::max(norm, std::abs(e.gamma1 * e.gamma1 + e.gamma2 * e.gamma2 - 1.0));
    wr = std::max(wr, e.wronskian_drift);
    if (e.two_radius < 0.0) ++tr_missing;
    tr = std::max(tr, e.two_radius);
  }
  const std::string nodes = std::to_string(t.size()) + " nodes";
  out.push_back(at_least("min singular-value gap", gap, 1e3, nodes));
  out.push_back(at_most("max |gamma1^2 + gamma2^2 - 1|", norm, 1e-10, nodes));
  out.push_back(at_most("max Wronskian drift", wr, 1e-6, nodes));
  out.push_back(at_most("max two-radius deviation", tr_missing ? INFINITY : tr, 1e-4, nodes));
}

// 4
void scattering_asymptotics(Context& ctx, std::vector<Check>& out) {
  const auto& p = ctx.profile();
  const auto opt = ctx.cfg().eigen_options();
  double flat = 0.0, flat_at = 0.0;
  for (int j = 0; j <= 24; ++j) {
    const double xi = 1e-3 * std::pow(300.0, j / 24.0);
    const auto d = decompose(eigenfunction(SpectralPoint::from_xi(xi), p, p.grid, opt), Regime::FlatLow);
    const double ratio = std::abs(d.b - 1.0) / (50.0 * xi * xi * std::pow(std::log(xi), 2));
    if (ratio >= flat) {
      flat = ratio;
      flat_at = xi;
    }
  }
  out.push_back(at_most("max |b_flat - 1| / (50 xi^2 ln^2 xi)", flat, 1.0,
                        "25 points in [1e-3, 0.3], worst at xi = " + num(flat_at)));
  double sharp = 0.0, sharp_at = 0.0;
  for (int j = 0; j <= 15; ++j) {
    const double xi = 5.0 + j;
    const auto d = decompose(eigenfunction(SpectralPoint::from_xi(xi), p, p.grid, opt), Regime::SharpHigh);
    const double ratio = (std::abs(d.b + 1.0 / std::sqrt(2.0)) + std::abs(d.c - 1.0 / std::sqrt(2.0))) * xi / 5.0;
    if (ratio >= sharp) {
      sharp = ratio;
      sharp_at = xi;
    }
  }
  out.push_back(at_most("max (|b_sharp + 1/sqrt2| + |c_sharp - 1/sqrt2|) / (5 / xi)", sharp, 1.0,
                        "xi = 5, 6, ..., 20, worst at xi = " + num(sharp_at)));
}

// 5
void transform_identities(Context& ctx, std::vector<Check>& out) {
  const auto& p = ctx.profile();
  const auto& t = ctx.table();
  const unsigned th = ctx.cfg().threads;
  auto vortex = [th](const EigenTable& tab, const VortexProfile& prof) {
    return Transform{[&tab, th](const RadialField& f) { return forward(f, tab, th); },
                     [&tab, th](const SpectralDensity& z) { return inverse(z, tab, th); },
                     [&tab](const RadialField& a, const RadialField& b) { return plancherel_defect(a, b, tab); },
                     [&tab, &prof](const RadialField& f) { return diag_defect(f, tab, prof); }};
  };
  const auto fine = transform_defects(vortex(t, p), vortex_battery(p.grid), density_battery(t.xi_grid()));
  ctx.note("coarse grids (every other node in r and xi)...");
  const EigenTable coarse = t.coarsened();
  const VortexProfile cp = resample(p, coarse.grid());
  const auto crs =
      transform_defects(vortex(coarse, cp), vortex_battery(coarse.grid()), density_battery(coarse.xi_grid()));
  transform_checks(out, "", fine, crs, 1e-3);
}

// 6
void zero_frequency(Context& ctx, std::vector<Check>& out) {
  const auto& p = ctx.profile();
  const auto& t = ctx.table();
  const auto rv = resonance_vectors(p);
  const auto battery = vortex_battery(p.grid);
  const double x0 = t.xi_grid().xi[0];
  const double c = std::sqrt(kPi / 4.0);
  double value = 0.0, deriv = 0.0, deriv_ratio = 0.0;
  int nv = 0, nd = 0;
  for (const auto& phi : battery) {
    const auto z = forward(phi, t, ctx.cfg().threads);
    const cplx r0 = sigma3_pairing(phi, rv.xi0), r1 = sigma3_pairing(phi, rv.xi1);
    const double scale = phi.l2_norm();
    if (std::abs(r0) > 1e-8 * scale) {
      value = std::max(value, std::abs(z.even(0) - c * r0) / std::abs(c * r0));
      ++nv;
    }
    if (std::abs(r1) > 1e-8 * scale) {
      const cplx q = z.odd(0) / x0;
      const double e = std::abs(q - c * r1) / std::abs(c * r1);
      if (e >= deriv) {
        deriv = e;
        deriv_ratio = std::abs(q) / std::abs(c * r1);
      }
      ++nd;
    }
  }
  out.push_back(at_most("F(0) vs sqrt(pi/4) <phi, sigma3 Xi0>, relative", value, 1e-3,
                        std::to_string(nv) + " battery fields; F(0) from the even part at xi_min"));
  out.push_back(at_most("F'(0) vs sqrt(pi/4) <phi, sigma3 Xi1>, relative", deriv, 1e-3,
                        std::to_string(nd) + " battery fields; difference quotient at +-xi_min; |F'(0)| / reference = " +
                            num(deriv_ratio)));
}

RadialField gaussian_data(std::shared_ptr<const RadialGrid> g, double s) {
  return sample(
      g, [s](double r) { return cplx(r * std::exp(-r * r / (2 * s * s)) * (1.0 + 0.2 * r * r / (s * s))); },
      [s](double r) { return cplx(0.5 * r * std::exp(-r * r / (2 * s * s))); });
}

RadialField flat_gaussian(std::shared_ptr<const RadialGrid> g, double s) {
  return sample(
      g, [s](double r) { return cplx(std::exp(-r * r / (2 * s * s)) * (1.0 + 0.2 * r * r / (s * s))); },
      [s](double r) { return cplx(0.5 * std::exp(-r * r / (2 * s * s))); });
}

void dispersion_checks(std::vector<Check>& out, const std::string& prefix, const Dispersion& generic,
                       const Dispersion& orth) {
  out.push_back(within(prefix + "sup-norm exponent, generic", generic.exponent, -0.75, -0.58, "fit over [t0, t1]"));
  out.push_back(within(prefix + "sup-norm exponent, orthogonal", orth.exponent, -1.1, -0.85, "fit over [t0, t1]"));
  out.push_back(within(prefix + "argmax_r / t at t1, generic", generic.argmax_ratio, 1.2, 1.7));
}

void l2_checks(std::vector<Check>& out, const std::string& prefix, double generic, double orth) {
  out.push_back(within(prefix + "|phi(t1)| / |phi(t0)|, nonzero pairing", generic, 1.05, 2.5, "L2 on r <= r_max"));
  out.push_back(at_most(prefix + "|phi(t1)| / |phi(t0)|, vanishing pairing", orth, 1.2, "L2 on r <= r_max"));
}

// 7
void dispersive_decay(Context& ctx, std::vector<Check>& out) {
  const auto& cfg = ctx.cfg();
  const auto& p = ctx.long_profile();
  const auto& t = ctx.long_table();
  const auto times = log_times(cfg.evolve.t0, cfg.evolve.t1, cfg.evolve.samples);
  PropagateOptions opt;
  opt.threads = cfg.threads;
  Dispersion d[2];
  for (int orth = 0; orth < 2; ++orth) {
    auto f = gaussian_data(p.grid, cfg.evolve.width_decay);
    if (orth) f = project_orthogonal(f, p);
    const auto z = band_limit(forward(f, t, cfg.threads), cfg.evolve.band);
    d[orth] = dispersion([&](double time) { return propagate_density(z, time, t, opt); }, times);
  }
  dispersion_checks(out, "", d[0], d[1]);
}

// 8
void l2_dichotomy(Context& ctx, std::vector<Check>& out) {
  const auto& cfg = ctx.cfg();
  const auto& p = ctx.long_profile();
  const auto& t = ctx.long_table();
  PropagateOptions opt;
  opt.threads = cfg.threads;
  double ratio[2];
  for (int orth = 0; orth < 2; ++orth) {
    auto f = gaussian_data(p.grid, cfg.evolve.width_l2);
    if (orth) f = project_orthogonal(f, p);
    const auto z = band_limit(forward(f, t, cfg.threads), cfg.evolve.band);
    ratio[orth] =
        propagate_density(z, cfg.evolve.t1, t, opt).l2_norm / propagate_density(z, cfg.evolve.t0, t, opt).l2_norm;
  }
  l2_checks(out, "", ratio[0], ratio[1]);
}

// 9
void flat_oracle(Context& ctx, std::vector<Check>& out) {
  const auto& cfg = ctx.cfg();
  const auto grid = cfg.grid.make();
  const FlatBasis fine_basis(cfg.xi.make(), grid, cfg.threads);
  const auto coarse_grid = std::make_shared<const RadialGrid>(grid->every_other());
  const FlatBasis coarse_basis(fine_basis.xi_grid().every_other(), coarse_grid, cfg.threads);
  auto flat = [](const FlatBasis& b) {
    return Transform{[&b](const RadialField& f) { return b.forward(f); },
                     [&b](const SpectralDensity& z) { return b.inverse(z); },
                     [&b](const RadialField& x, const RadialField& y) { return flat_plancherel_defect(x, y, b); },
                     [&b](const RadialField& f) { return flat_diag_defect(f, b); }};
  };
  const auto fine =
      transform_defects(flat(fine_basis), flat_battery(grid), density_battery(fine_basis.xi_grid()));
  const auto crs =
      transform_defects(flat(coarse_basis), flat_battery(coarse_grid), density_battery(coarse_basis.xi_grid()));
  transform_checks(out, "flat ", fine, crs, 1e-6);

  ctx.note("flat long-time runs...");
  const FlatBasis lb(cfg.evolve.xi.make(), cfg.evolve.grid.make(), cfg.threads);
  PropagateOptions opt;
  opt.threads = cfg.threads;
  const auto times = log_times(cfg.evolve.t0, cfg.evolve.t1, cfg.evolve.samples);
  Dispersion d[2];
  double ratio[2];
  for (int orth = 0; orth < 2; ++orth) {
    auto f = flat_gaussian(lb.grid(), cfg.evolve.width_decay);
    if (orth) f = flat_project_orthogonal(f);
    const auto z = band_limit(lb.forward(f), cfg.evolve.band);
    d[orth] = dispersion([&](double time) { return lb.propagate_density(z, time, opt); }, times);
    auto g = flat_gaussian(lb.grid(), cfg.evolve.width_l2);
    if (orth) g = flat_project_orthogonal(g);
    const auto zg = band_limit(lb.forward(g), cfg.evolve.band);
    ratio[orth] = lb.propagate_density(zg, cfg.evolve.t1, opt).l2_norm /
                  lb.propagate_density(zg, cfg.evolve.t0, opt).l2_norm;
  }
  dispersion_checks(out, "flat ", d[0], d[1]);
  l2_checks(out, "flat ", ratio[0], ratio[1]);

  const auto& t = ctx.table();
  const double d10 = cross_check(10.0, t), d20 = cross_check(20.0, t);
  out.push_back(within("far-field deviation ratio xi=20 / xi=10", d20 / d10, 0.25, 0.75,
                       "deviation " + num(d10) + " at xi = 10, " + num(d20) + " at xi = 20"));
}

// 10
double bump_phi(double x) {
  const double y = x / 1.5;
  return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) * (1.0 + 0.3 * x) : 0.0;
}

double bessel_like_weight(double x, double r) { return std::pow(1.0 + x * x * r * r, -0.25); }

void model_integral_checks(Context& ctx, std::vector<Check>& out) {
  ModelIntegralOptions opt;
  opt.tol = ctx.cfg().tol.quad;
  const double t = 50.0;
  const std::pair<const char*, double> points[] = {{"0.5", 0.5}, {"sqrt2", std::sqrt(2.0)}, {"1.6", 1.6}};
  for (const auto& [label, q] : points) {
    const auto m = model_integral(t, q * t, bump_phi, bessel_like_weight, opt);
    const cplx ref = model_integral_reference(t, q * t, bump_phi, bessel_like_weight, opt.support, 1000000);
    out.push_back(at_most(std::string("|I - I_ref| / max(1, |I_ref|) at t = 50, r/t = ") + label,
                          std::abs(m.value - ref) / std::max(1.0, std::abs(ref)), 1e-6,
                          "reference: composite Simpson, 10^6 panels"));
  }
  std::vector<double> scaled;
  for (double time : {20.0, 40.0, 80.0, 160.0}) {
    scaled.push_back(time * std::abs(model_integral(time, 0.8 * time, bump_phi, bessel_like_weight, opt).value));
  }
  const double c = *std::max_element(scaled.begin(), scaled.end());
  out.push_back(at_most("max t |I(t, 0.8 t)| / (2 * 20 |I(20, 16)|)", c / (2.0 * scaled.front()), 1.0,
                        "t = 20, 40, 80, 160; C = " + num(c)));
}

std::string bound_text(const Check& k) {
  switch (k.bound) {
    case Bound::AtMost:
      return " <= " + num(k.limit);
    case Bound::AtLeast:
      return " >= " + num(k.limit);
    case Bound::Window:
      break;
  }
  return " in [" + num(k.limit) + ", " + num(k.upper) + "]";
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Context&, std::vector<Check>&);
};

const Criterion kCriteria[] = {
    {1, "profile fidelity", profile_fidelity},
    {2, "resonance algebra", resonance_algebra},
    {3, "eigenfunction structure", eigen_structure},
    {4, "scattering-coefficient asymptotics", scattering_asymptotics},
    {5, "transform identities", transform_identities},
    {6, "zero-frequency values", zero_frequency},
    {7, "dispersive decay", dispersive_decay},
    {8, "L2 growth dichotomy", l2_dichotomy},
    {9, "flat oracle", flat_oracle},
    {10, "model oscillatory integral", model_integral_checks},
};

}  // namespace

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool AcceptanceReport::pass() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass(); });
}

std::string AcceptanceReport::to_json(int indent) const {
  using nlohmann::json;
  json crit = json::array();
  for (const auto& c : criteria) {
    json checks = json::array();
    for (const auto& k : c.checks) {
      json j = {{"name", k.name}, {"value", k.value}, {"pass", k.pass}};
      switch (k.bound) {
        case Bound::AtMost:
          j["max"] = k.limit;
          break;
        case Bound::AtLeast:
          j["min"] = k.limit;
          break;
        case Bound::Window:
          j["min"] = k.limit;
          j["max"] = k.upper;
          break;
      }
      if (!k.note.empty()) j["note"] = k.note;
      checks.push_back(std::move(j));
    }
    json jc = {{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"checks", std::move(checks)}};
    if (!c.error.empty()) jc["error"] = c.error;
    crit.push_back(std::move(jc));
  }
  json root = {{"schema", kVerifySchema},
               {"code_version", kCodeVersion},
               {"config", json::parse(config_json)},
               {"pass", pass()},
               {"criteria", std::move(crit)}};
  return root.dump(indent);
}

std::string summary_line(const CriterionResult& c) {
  std::size_t ok = 0;
  for (const auto& k : c.checks) ok += k.pass ? 1 : 0;
  std::ostringstream ss;
  ss << (c.pass() ? "[PASS] " : "[FAIL] ") << (c.id < 10 ? " " : "") << c.id << "  " << c.title << " (" << ok << "/"
     << c.checks.size() << " checks";
  if (!c.error.empty()) ss << "; error: " << c.error;
  ss << ")";
  return ss.str();
}

AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream* log, const std::vector<int>& only) {
  cfg.validate();
  AcceptanceReport report;
  report.config_json = to_json(cfg, -1);
  Context ctx(cfg, log);
  for (const auto& crit : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end()) continue;
    CriterionResult r;
    r.id = crit.id;
    r.title = crit.title;
    if (log) *log << "criterion " << crit.id << ": " << crit.title << std::endl;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(ctx, r.checks);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) {
      for (const auto& k : r.checks) {
        *log << "  " << (k.pass ? "ok   " : "FAIL ") << k.name << " = " << num(k.value) << bound_text(k)
             << (k.note.empty() ? "" : "  (" + k.note + ")") << std::endl;
      }
      *log << summary_line(r) << "  [" << num(r.seconds) << " s]" << std::endl;
    }
    report.criteria.push_back(std::move(r));
  }
  return report;
}

}  // namespace vspec

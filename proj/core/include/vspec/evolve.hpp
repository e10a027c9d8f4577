#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vspec/dft.hpp"
#include "vspec/eigen.hpp"
#include "vspec/field.hpp"
#include "vspec/profile.hpp"

namespace vspec {

struct EvolutionResult {
  double t = 0.0;
  RadialField field;
  double sup_norm = 0.0;  // max_i |(u_i, v_i)|
  double l2_norm = 0.0;
  double argmax_r = 0.0;
  double phase_step = 0.0;  // largest node-to-node increment of t lambda over the support
};

class UnresolvedPhase : public std::runtime_error {
 public:
  UnresolvedPhase(const std::string& what, double step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] double step() const { return step_; }

 private:
  double step_;
};

struct PropagateOptions {
  double max_phase_step = 0.7853981633974483;  // pi/4
  // Nodes where |zeta| is below this fraction of its maximum are ignored by the
  // phase check.
  double support_threshold = 1e-9;
  bool refuse = true;  // false: report the phase step without throwing
  unsigned threads = 0;
};

// Largest |t (lambda(xi_{k+1}) - lambda(xi_k))| over adjacent nodes carrying content.
double max_phase_step(const SpectralDensity& z, double t, double support_threshold = 1e-12);

// e^{itH} phi = F^{-1} e^{it lambda} F phi. Throws UnresolvedPhase when the
// multiplier is under-resolved and opt.refuse is set.
EvolutionResult propagate(const RadialField& field, double t, const EigenTable& table,
                          const PropagateOptions& opt = {});
EvolutionResult propagate_density(const SpectralDensity& z0, double t, const EigenTable& table,
                                  const PropagateOptions& opt = {});
EvolutionResult summarize(double t, RadialField field);

// Multiplies by cutoff(2 |xi| / xi_cut): unchanged below xi_cut / 2, zero above xi_cut.
SpectralDensity band_limit(SpectralDensity z, double xi_cut);

// (<phi, (rho, rho)>, <phi, (r rho' + rho, -r rho' - rho)>), bilinear in L2(r dr).
std::pair<cplx, cplx> orthogonality(const RadialField& field, const VortexProfile& profile);

// Template (1, 1) r exp(-r^2/8) used to remove the (rho, rho) pairing.
RadialField orthogonality_template(std::shared_ptr<const RadialGrid> grid);
// phi - c T with c chosen so that <., (rho, rho)> = 0.
RadialField project_orthogonal(const RadialField& field, const VortexProfile& profile);

struct DecayFit {
  double exponent = 0.0;
  double r2 = 0.0;
};
// Least-squares slope of log norm against log t; needs >= 5 positive samples
// spanning at least a decade.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& norms);

std::vector<double> l2_growth(const RadialField& field, const std::vector<double>& times, const EigenTable& table,
                              const PropagateOptions& opt = {});

struct ModelIntegralOptions {
  double support = 1.5;  // phi_tilde vanishes for |xi| >= support
  double tol = 1e-12;    // relative tolerance per region
  int max_depth = 18;
};

struct ModelIntegral {
  cplx value = 0.0;
  double xi0 = -1.0;  // stationary point (>= 0) or -1 when r/t < sqrt 2
  double scale = 0.0;  // half-width of the regions around +-xi0
  std::vector<double> breaks;
  double error = 0.0;
};

// Stationary point of t lambda(xi) - r xi on xi >= 0, or -1 when r/t < sqrt 2.
double stationary_point(double t, double r);

// int e^{i (t lambda(xi) - r xi)} xi phi(xi) W(xi, r) dxi over the real line by
// adaptive Gauss-Kronrod on regions split at +-xi0 +- (t xi0)^{-1/2}
// (+-xi0 +- t^{-1/3} when xi0 is below t^{-1/3}). Throws std::runtime_error
// when a region does not reach the tolerance.
ModelIntegral model_integral(double t, double r, const std::function<double(double)>& phi,
                             const std::function<double(double, double)>& w, const ModelIntegralOptions& opt = {});

// Composite Simpson with n (even) panels on [-support, support].
cplx model_integral_reference(double t, double r, const std::function<double(double)>& phi,
                              const std::function<double(double, double)>& w, double support, std::size_t n);

}  // namespace vspec

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "vspec/dft.hpp"
#include "vspec/eigen.hpp"
#include "vspec/evolve.hpp"
#include "vspec/field.hpp"
#include "vspec/grid.hpp"

namespace vspec {

// Linearization around the constant state 1 on radial fields:
//   G = sigma3 [(-Delta + 1) + sigma1],  Delta = d^2/dr^2 + (1/r) d/dr.
// G e(xi) J0(xi r) = lambda(xi) e(xi) J0(xi r).

struct FlatMultiplier {
  double xi = 0.0;
  double lambda = 0.0;
  double u_symbol = 0.0;  // xi / sqrt(2 + xi^2)
  // m_pm = -+ (lambda' / xi) e(-+xi) [sigma3 e(-+xi)]^T for unit e; (m_+ + m_-) / 2 = I
  Eigen::Matrix2d m_plus, m_minus;

  static FlatMultiplier at(double xi);  // xi != 0
  // (1/2) sum_pm e^{-+ i t lambda} m_pm
  [[nodiscard]] Eigen::Matrix2cd propagator(double t) const;
};

// sqrt(pi/2) J0(xi r) e(xi)
Eigen::Vector2d flat_eigenfunction(double xi, double r);

// Order-0 Hankel transform and flat transform on a radial grid and a frequency
// grid, both with the quadrature weights used by the vortex transform.
class FlatBasis {
 public:
  FlatBasis(FrequencyGrid xg, std::shared_ptr<const RadialGrid> grid, unsigned threads = 0);

  [[nodiscard]] const FrequencyGrid& xi_grid() const { return xg_; }
  [[nodiscard]] const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
  [[nodiscard]] double j0(std::size_t k, std::size_t i) const { return j0_[k * grid_->size() + i]; }

  // h(xi_k) = int J0(xi_k r) f(r) r dr, including the cell (0, r_min)
  [[nodiscard]] std::vector<cplx> hankel(const std::vector<cplx>& f) const;
  // f(r_i) = int J0(xi r_i) h(xi) xi dxi; (0, xi_min) by the trapezoid rule
  [[nodiscard]] std::vector<cplx> hankel_inverse(const std::vector<cplx>& h) const;

  // zeta(xi) = int psi0(xi, r) . sigma3 phi r dr, psi0 = flat_eigenfunction
  [[nodiscard]] SpectralDensity forward(const RadialField& field) const;
  // (1/pi) int zeta psi0 lambda' sign(xi) dxi
  [[nodiscard]] RadialField inverse(const SpectralDensity& density) const;

  // e^{itG} by the multiplier route: Hankel, (1/2) sum e^{-+it lambda} m_pm, inverse Hankel.
  [[nodiscard]] EvolutionResult propagate(const RadialField& field, double t, const PropagateOptions& opt = {}) const;
  // e^{itG} by the spectral route: multiply the flat transform by e^{it lambda}.
  [[nodiscard]] EvolutionResult propagate_density(const SpectralDensity& z0, double t,
                                                  const PropagateOptions& opt = {}) const;

 private:
  FrequencyGrid xg_;
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<double> j0_;  // xi-major
  unsigned threads_;
};

// G phi by sixth-order differences.
RadialField apply_G(const RadialField& field);

double flat_diag_defect(const RadialField& field, const FlatBasis& basis);
double flat_plancherel_defect(const RadialField& f1, const RadialField& f2, const FlatBasis& basis);

// int (u + v) r dr = 2 alpha_hat(0), the flat counterpart of the (rho, rho) pairing.
cplx flat_pairing(const RadialField& field);
// phi - c (1, 1) exp(-r^2/8) with c chosen so that flat_pairing vanishes.
RadialField flat_project_orthogonal(const RadialField& field);

// Relative L2 residual over r in [r_lo, r_hi] of sqrt(xi r) psi . e(xi) after a
// least-squares fit by sqrt(xi r) sqrt(pi/2) (a J0 + b Y0)(xi r), i.e. the
// distance to the flat far field modulo a phase shift.
double cross_check(double xi, const std::vector<double>& u, const std::vector<double>& v, const RadialGrid& grid,
                   double r_lo = 1.0, double r_hi = 10.0);
// Same for the table entry nearest to xi.
double cross_check(double xi, const EigenTable& table, double r_lo = 1.0, double r_hi = 10.0);

}  // namespace vspec

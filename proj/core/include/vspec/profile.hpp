#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "vspec/field.hpp"
#include "vspec/grid.hpp"
#include "vspec/interp.hpp"

namespace vspec {

class ShootingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Continuous representation of the vortex profile rho solving
//   rho'' + rho'/r - rho/r^2 + (1 - rho^2) rho = 0,  rho ~ a r at 0,  rho -> 1.
// A quintic Hermite table covers [0, r_c]; beyond r_c the large-r series
// 1 - rho = sum b_k r^{-2k} plus the decaying correction c K1(sqrt2 r) is used.
class ProfileFunction {
 public:
  ProfileFunction(double a, QuinticHermite table, std::vector<double> tail_coeffs, double tail_c);

  [[nodiscard]] Jet eval(double r) const;
  [[nodiscard]] double slope() const { return a_; }
  [[nodiscard]] double table_end() const { return table_.x_max(); }
  [[nodiscard]] const std::vector<double>& tail_coefficients() const { return tail_; }
  [[nodiscard]] double tail_amplitude() const { return tail_c_; }
  [[nodiscard]] const QuinticHermite& table() const { return table_; }

  // Large-r series 1 - sum b_k r^{-2k} (optimally truncated) with derivatives.
  [[nodiscard]] Jet tail_series(double r) const;

 private:
  double a_;
  QuinticHermite table_;
  std::vector<double> tail_;
  double tail_c_;
  double k_ref_;
};

struct VortexProfile {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> rho, drho, d2rho;
  double slope_a = 0.0;
  double tol = 0.0;
  std::shared_ptr<const ProfileFunction> fn;

  [[nodiscard]] Jet at(double r) const { return fn->eval(r); }
};

struct ResonancePair {
  RadialField xi0;  // (rho, -rho)
  RadialField xi1;  // (r rho' + rho, r rho' + rho)
};

struct KernelSolutions {
  std::vector<double> p0, q0, q0_tilde;
  std::vector<double> dp0, dq0, dq0_tilde;
};

struct ProfileOptions {
  double r_launch = 1e-3;   // Frobenius launch radius
  double leg_length = 4.0;  // maximal multiple-shooting leg
  double r_c = 32.0;        // start of the large-r series
  double table_h = 0.005;   // Hermite table spacing
  int max_bisection = 200;
};

// Shooting on the origin slope (bisection on overshoot/crash), refined by
// multiple shooting against the large-r series. Throws
// ShootingFailure if the bracket cannot be established or refined.
VortexProfile solve_profile(std::shared_ptr<const RadialGrid> grid, double tol, const ProfileOptions& opt = {});

// Resample an existing profile onto another grid.
VortexProfile resample(const VortexProfile& p, std::shared_ptr<const RadialGrid> grid);

ResonancePair resonance_vectors(const VortexProfile& p);

// P0 = rho int_1^r ds/(s rho^2);  Q0 the solution of (L0 - 2 rho^2) Q = 0 with
// Q ~ r at 0;  Q0_tilde = Q0 int_r^inf ds/(s Q0^2).
KernelSolutions kernel_solutions(const VortexProfile& p);

// Scaled residuals  min(1, r^2) |L f|  at interior nodes, computed with
// sixth-order differences on the profile grid.
std::vector<double> profile_residual(const VortexProfile& p);
// (L0 - 2 rho^2)(r rho') - 2 (rho^2 - 1) rho
std::vector<double> derivative_identity_residual(const VortexProfile& p);
// (L0 - q rho^2) f for an arbitrary sampled f, q in {0, 2}
std::vector<double> kernel_residual(const VortexProfile& p, const std::vector<double>& f, double q);

// max over r >= r_from of r^4 |1 - rho - 1/(2 r^2)|
double tail_constant(const VortexProfile& p, double r_from = 10.0);

}  // namespace vspec

#pragma once

#include <Eigen/Dense>

namespace vspec {

// Time frequency lambda and the derived space frequencies of one spectral point.
//   <lam> = sqrt(1 + lam^2),  xi = sign(lam) sqrt(<lam> - 1),  kappa = sqrt(1 + <lam>),
//   a_pm = lam +- <lam>,  e = (1, a_-)/|(1, a_-)|  (for lam >= 0).
// For lam < 0 the direction vector follows e(-xi) = -sigma1 e(xi).
struct SpectralPoint {
  double lam = 0.0;
  double xi = 0.0;
  double kappa = 0.0;
  double dlam = 0.0;  // lambda'(xi)
  double jlam = 1.0;  // <lam>
  double a_plus = 0.0, a_minus = 0.0;
  Eigen::Vector2d e{1.0, 0.0};

  static SpectralPoint from_xi(double xi);
  static SpectralPoint from_lambda(double lam);

  [[nodiscard]] double abs_xi() const { return xi < 0 ? -xi : xi; }
  [[nodiscard]] double abs_lam() const { return lam < 0 ? -lam : lam; }
};

double lambda_of_xi(double xi);
double dlambda_of_xi(double xi);

// Change of variables (phi, psi) = M (u, v) for lambda >= 0, with
//   M = [[1/a_+, 1], [-1, -a_-]].
// For lambda < 0 we use the mirrored map (u, v) -> -sigma1 (u, v) first.
Eigen::Matrix2d phipsi_matrix(const SpectralPoint& sp);

// Coupling of the (phi, psi) system
//   Phi'' + Phi'/r - Phi/r^2 = diag(kappa^2, -xi^2) Phi + (rho^2 - 1) B Phi
// with B = [[1 + 2<l>, -|l|], [-|l|, 2<l> - 1]] / <l>.
Eigen::Matrix2d coupling_matrix(const SpectralPoint& sp);

// C(lambda) defined by M^{-1} (0, 1) = C e; C < 0 with the map above.
double c_lambda(const SpectralPoint& sp);

}  // namespace vspec

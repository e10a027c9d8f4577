#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vspec/ode.hpp"
#include "vspec/profile.hpp"
#include "vspec/spectral.hpp"

namespace vspec {

using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;

enum class Representation { UV, PhiPsi };

// One point of a solution of the eigenvalue system. `value` holds
// (u, u', v, v') or (phi, phi', psi, psi') depending on `rep`.
struct SolutionSample {
  double r = 0.0;
  Vector4c value = Vector4c::Zero();
  Representation rep = Representation::UV;
};

// 4x4 real map taking (u, u', v, v') to (phi, phi', psi, psi').
Eigen::Matrix4d phipsi_state_matrix(const SpectralPoint& sp);

SolutionSample to_uv(const SpectralPoint& sp, const SolutionSample& s);
SolutionSample to_phipsi(const SpectralPoint& sp, const SolutionSample& s);
SolutionSample convert(const SpectralPoint& sp, const SolutionSample& s, Representation rep);

// Representation used for integration: (phi, psi) once |lambda| >= lambda_switch.
Representation preferred_representation(const SpectralPoint& sp, double lambda_switch = 0.5);

// Second-order system X'' = -X'/r + X/r^2 + P(r) X in either representation:
//   UV:      P = [[2 rho^2 - 1 - lam, rho^2], [rho^2, 2 rho^2 - 1 + lam]]
//   PhiPsi:  P = diag(kappa^2, -xi^2) + (rho^2 - 1) B
class EigenSystem {
 public:
  EigenSystem(const SpectralPoint& sp, const VortexProfile& profile, Representation rep);

  [[nodiscard]] Eigen::Matrix2d potential(double r) const;
  [[nodiscard]] Representation representation() const { return rep_; }
  [[nodiscard]] const SpectralPoint& point() const { return sp_; }

  // First-order right-hand side for K real columns stored column-major as
  // K blocks of (x1, x1', x2, x2').
  template <std::size_t N>
  void operator()(const ode::State<N>& y, ode::State<N>& dy, double r) const {
    static_assert(N % 4 == 0);
    const Eigen::Matrix2d p = potential(r);
    const double ir = 1.0 / r, ir2 = ir * ir;
    for (std::size_t c = 0; c < N; c += 4) {
      const double x1 = y[c], d1 = y[c + 1], x2 = y[c + 2], d2 = y[c + 3];
      dy[c] = d1;
      dy[c + 1] = -d1 * ir + x1 * ir2 + p(0, 0) * x1 + p(0, 1) * x2;
      dy[c + 2] = d2;
      dy[c + 3] = -d2 * ir + x2 * ir2 + p(1, 0) * x1 + p(1, 1) * x2;
    }
  }

 private:
  SpectralPoint sp_;
  const ProfileFunction* fn_;
  Representation rep_;
  Eigen::Matrix2d base_, coupling_;
};

// Regular solution at the origin, (u, v) = r e_which + O(r^3), summed from
// its Frobenius recursion. Requires r0 <= 0.05.
SolutionSample seed_origin(const SpectralPoint& sp, const VortexProfile& profile, int which, double r0);

// Taylor coefficients of rho: rho = sum_j c[j] r^{2j+1}.
std::vector<double> profile_taylor(double slope, int terms);

enum class JostKind { Decaying, OscCos, OscSin };

// Leading-order Jost data at r = R in (phi, psi) variables, converted to UV:
// decaying K1(kappa r)(1, 0); oscillating Re / Im of H1(xi r)(0, 1).
SolutionSample seed_jost(const SpectralPoint& sp, JostKind kind, double R);

// Integrates a seed to each of `nodes` (monotone, starting on the seed's side)
// and returns the samples in the seed's representation.
std::vector<SolutionSample> integrate(const SpectralPoint& sp, const VortexProfile& profile,
                                      const SolutionSample& seed, const std::vector<double>& nodes,
                                      double tol = 1e-10);
SolutionSample integrate_to(const SpectralPoint& sp, const VortexProfile& profile,
                            const SolutionSample& seed, double r_target, double tol = 1e-10);

// W(F, G) = F'.G - G'.F for F = sqrt(r) (u, v); equals r (U'.V - V'.U).
std::complex<double> wronskian(const SolutionSample& a, const SolutionSample& b);

}  // namespace vspec

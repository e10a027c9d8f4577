#pragma once

#include <vector>

#include "vspec/eigen.hpp"
#include "vspec/field.hpp"
#include "vspec/profile.hpp"

namespace vspec {

// Values of a transform on the signed frequency nodes +-xi_k of a table.
struct SpectralDensity {
  FrequencyGrid grid;
  std::vector<cplx> plus, minus;  // zeta(+xi_k), zeta(-xi_k)
  // forward(): Cauchy-Schwarz bound of the outer tenth of the radial range,
  // used as the estimate of the contribution beyond r_max
  std::vector<double> tail;

  SpectralDensity() = default;
  explicit SpectralDensity(FrequencyGrid g);

  [[nodiscard]] std::size_t size() const { return plus.size(); }
  [[nodiscard]] cplx even(std::size_t k) const { return 0.5 * (plus[k] + minus[k]); }
  [[nodiscard]] cplx odd(std::size_t k) const { return 0.5 * (plus[k] - minus[k]); }
  // Ascending signed nodes and the matching values.
  [[nodiscard]] std::vector<double> xi_signed() const;
  [[nodiscard]] std::vector<cplx> values() const;
  [[nodiscard]] double tail_budget() const;
};

// zeta(xi) = int psi(xi, r) . sigma3 phi(r) r dr  (bilinear)
SpectralDensity forward(const RadialField& field, const EigenTable& table, unsigned threads = 0);
cplx forward_at(const RadialField& field, const Eigenfunction& eig);

// phi(r) = (1/pi) int zeta(xi) psi(xi, r) lambda'(xi) sign(xi) dxi. The gap
// (0, xi_min) is closed with the trapezoid rule, the integrand vanishing at 0.
RadialField inverse(const SpectralDensity& density, const EigenTable& table, unsigned threads = 0);

// Quadrature weights for int g(xi) lambda'(xi) dxi over (0, xi_max] on the table nodes.
std::vector<double> spectral_weights(const FrequencyGrid& grid);

// H = sigma3 [(-Delta + 1/r^2 + 2 rho^2 - 1) + rho^2 sigma1] by sixth-order
// differences in s; the three nodes at each end use one-sided stencils.
RadialField apply_H(const RadialField& field, const VortexProfile& profile);
constexpr std::size_t kApplyHBoundaryNodes = 3;

// |F(H phi) - lambda F(phi)| / |F(H phi)| in L2(lambda' dxi); 0 when F(H phi) = 0.
double diag_defect(const RadialField& field, const EigenTable& table, const VortexProfile& profile);

// |pi (f1, sigma3 f2) - int F f1 F f2 lambda' sign xi dxi| / |pi (f1, sigma3 f2)|.
// Returns 0 when both sides vanish; a vanishing pairing is replaced by pi |f1| |f2|.
double plancherel_defect(const RadialField& f1, const RadialField& f2, const EigenTable& table);

// |zeta_e|_{L2(|xi| dxi)} + | |xi|^{-1} <xi> zeta_o |_{L2(|xi| dxi)} over both
// signs. The node closest to 0 is left out of the odd part; its contribution is
// reported as `excluded`.
struct TildeNorm {
  double value = 0.0, even = 0.0, odd = 0.0, excluded = 0.0;
};
TildeNorm tilde_norm(const SpectralDensity& density);

}  // namespace vspec

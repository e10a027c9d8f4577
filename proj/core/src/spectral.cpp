#include "vspec/spectral.hpp"

#include <cmath>

namespace vspec {

double lambda_of_xi(double xi) { return xi * std::sqrt(xi * xi + 2.0); }

double dlambda_of_xi(double xi) { return 2.0 * (xi * xi + 1.0) / std::sqrt(xi * xi + 2.0); }

namespace {

SpectralPoint build(double lam, double xi) {
  SpectralPoint sp;
  const double l = std::abs(lam);
  sp.lam = lam;
  sp.xi = xi;
  sp.jlam = std::sqrt(1.0 + l * l);
  sp.kappa = std::sqrt(1.0 + sp.jlam);
  sp.dlam = dlambda_of_xi(xi);
  // a_- = l - <l> = -1/(l + <l>) without cancellation
  const double ap = l + sp.jlam;
  const double am = -1.0 / ap;
  const double n = std::sqrt(1.0 + am * am);
  Eigen::Vector2d e(1.0 / n, am / n);
  if (lam < 0) {
    e = Eigen::Vector2d(-e(1), -e(0));
    sp.a_plus = 1.0 / ap;
    sp.a_minus = -ap;
  } else {
    sp.a_plus = ap;
    sp.a_minus = am;
  }
  sp.e = e;
  return sp;
}

}  // namespace

SpectralPoint SpectralPoint::from_xi(double xi) { return build(lambda_of_xi(xi), xi); }

SpectralPoint SpectralPoint::from_lambda(double lam) {
  const double l = std::abs(lam);
  // <l> - 1 = l^2/(<l> + 1)
  const double x = std::sqrt(l * l / (std::sqrt(1.0 + l * l) + 1.0));
  return build(lam, lam < 0 ? -x : x);
}

Eigen::Matrix2d phipsi_matrix(const SpectralPoint& sp) {
  const double ap = std::abs(sp.lam) + sp.jlam;
  const double am = -1.0 / ap;
  Eigen::Matrix2d m;
  m << 1.0 / ap, 1.0, -1.0, -am;
  if (sp.lam < 0) {
    Eigen::Matrix2d s;
    s << 0.0, -1.0, -1.0, 0.0;
    m = m * s;
  }
  return m;
}

Eigen::Matrix2d coupling_matrix(const SpectralPoint& sp) {
  const double l = std::abs(sp.lam), j = sp.jlam;
  Eigen::Matrix2d b;
  b << 1.0 + 2.0 * j, -l, -l, 2.0 * j - 1.0;
  return b / j;
}

double c_lambda(const SpectralPoint& sp) {
  const double ap = std::abs(sp.lam) + sp.jlam;
  const double am = -1.0 / ap;
  return -ap * std::sqrt(1.0 + am * am) / (2.0 * sp.jlam);
}

}  // namespace vspec

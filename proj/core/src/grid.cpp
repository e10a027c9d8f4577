#include "vspec/grid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vspec {

double SoftplusMap::x(double s) const { return c * (s > 30.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s))); }

double SoftplusMap::dx(double s) const { return c / (1.0 + std::exp(-s)); }

double SoftplusMap::d2x(double s) const {
  const double e = std::exp(-std::abs(s));
  return c * e / ((1.0 + e) * (1.0 + e));
}

double SoftplusMap::s_of(double xv) const {
  const double u = xv / c;
  // log(e^u - 1), stable on both ends
  return u > 30.0 ? u + std::log1p(-std::exp(-u)) : std::log(std::expm1(u));
}

std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> gregory_corrections(int n) {
  // Solve sum_j c_j j^d = B_{d+1}/(d+1) for odd d, 0 for even d (d < n): the
  // left-end Euler-Maclaurin remainder of the trapezoid rule.
  static const double bernoulli[] = {1.0,        -0.5,       1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0,
                                     0.0,        -1.0 / 30.0, 0.0,       5.0 / 66.0, 0.0, -691.0 / 2730.0};
  if (n < 1 || n > 12) throw std::invalid_argument("gregory_corrections: 1 <= n <= 12");
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (int d = 0; d < n; ++d) {
    for (int j = 0; j < n; ++j) a(d, j) = std::pow(static_cast<double>(j), d);
    b(d) = (d % 2 == 1) ? bernoulli[d + 1] / (d + 1) : 0.0;
  }
  a(0, 0) = 1.0;  // 0^0
  Eigen::VectorXd c = a.fullPivLu().solve(b);
  return {c.data(), c.data() + n};
}

RadialGrid RadialGrid::make(double r_min, double r_max, double ds_target, double c) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !(ds_target > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("RadialGrid::make: invalid parameters");
  }
  const SoftplusMap map{c};
  auto intervals = static_cast<std::size_t>(std::ceil((map.s_of(r_max) - map.s_of(r_min)) / ds_target));
  intervals += intervals % 2;
  if (intervals < 16) throw std::invalid_argument("RadialGrid::make: too few nodes");
  return build(c, r_min, r_max, intervals);
}

RadialGrid RadialGrid::every_other() const {
  if ((r_.size() - 1) % 2 != 0) throw std::invalid_argument("RadialGrid::every_other: odd interval count");
  const std::size_t intervals = (r_.size() - 1) / 2;
  if (intervals < 16) throw std::invalid_argument("RadialGrid::every_other: too few nodes");
  return build(map_.c, r_min(), r_max(), intervals);
}

RadialGrid RadialGrid::build(double c, double r_min, double r_max, std::size_t intervals) {
  RadialGrid g;
  g.map_.c = c;
  const double s0 = g.map_.s_of(r_min);
  const double s1 = g.map_.s_of(r_max);
  g.s0_ = s0;
  g.ds_ = (s1 - s0) / static_cast<double>(intervals);
  const std::size_t n = intervals + 1;
  g.r_.resize(n);
  g.drds_.resize(n);
  g.d2rds2_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = s0 + g.ds_ * static_cast<double>(j);
    g.r_[j] = g.map_.x(s);
    g.drds_[j] = g.map_.dx(s);
    g.d2rds2_[j] = g.map_.d2x(s);
  }
  g.r_.front() = r_min;
  g.r_.back() = r_max;
  // trapezoid in s with 8-point Gregory end corrections
  std::vector<double> unit(n, 1.0);
  unit.front() = unit.back() = 0.5;
  const auto corr = gregory_corrections(8);
  for (std::size_t j = 0; j < corr.size(); ++j) {
    unit[j] += corr[j];
    unit[n - 1 - j] += corr[j];
  }
  g.w_.resize(n);
  for (std::size_t j = 0; j < n; ++j) g.w_[j] = unit[j] * g.ds_ * g.r_[j] * g.drds_[j];
  return g;
}

double RadialGrid::integrate(const std::vector<double>& f) const {
  if (f.size() != r_.size()) throw std::invalid_argument("RadialGrid::integrate: size mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += w_[j] * f[j];
  return s;
}

std::complex<double> RadialGrid::integrate(const std::vector<std::complex<double>>& f) const {
  if (f.size() != r_.size()) throw std::invalid_argument("RadialGrid::integrate: size mismatch");
  std::complex<double> s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += w_[j] * f[j];
  return s;
}

namespace {

// Derivative (order k in s) of f at every node with a (p+1)-point stencil,
// centred where possible.
std::vector<double> ds_derivative(const std::vector<double>& f, double ds, int k, int order) {
  const int n = static_cast<int>(f.size());
  const int half = order / 2;
  const int width = order + 1;
  std::vector<double> out(n, 0.0);
  // cache stencils by offset of the evaluation point within the stencil
  std::vector<std::vector<double>> cache(width + 1);
  auto stencil = [&](int offset, int npts) -> const std::vector<double>& {
    auto& w = cache[offset];
    if (w.empty()) {
      std::vector<double> x(npts);
      for (int j = 0; j < npts; ++j) x[j] = static_cast<double>(j - offset);
      w = fornberg_weights(0.0, x, k)[k];
    }
    return w;
  };
  const int npts_edge = width + (k == 2 ? 1 : 0);  // one extra node keeps one-sided second derivatives at order
  for (int i = 0; i < n; ++i) {
    int start, npts, offset;
    if (i >= half && i < n - half) {
      start = i - half;
      npts = width;
      offset = half;
      const auto& w = stencil(offset, npts);
      double s = 0.0;
      for (int j = 0; j < npts; ++j) s += w[j] * f[start + j];
      out[i] = s;
    } else {
      npts = npts_edge;
      start = i < half ? 0 : n - npts;
      offset = i - start;
      std::vector<double> x(npts);
      for (int j = 0; j < npts; ++j) x[j] = static_cast<double>(j - offset);
      const auto w = fornberg_weights(0.0, x, k)[k];
      double s = 0.0;
      for (int j = 0; j < npts; ++j) s += w[j] * f[start + j];
      out[i] = s;
    }
  }
  const double scale = k == 1 ? 1.0 / ds : 1.0 / (ds * ds);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<double> RadialGrid::d_dr(const std::vector<double>& f, int order) const {
  if (f.size() != r_.size()) throw std::invalid_argument("RadialGrid::d_dr: size mismatch");
  if (order != 4 && order != 6) throw std::invalid_argument("RadialGrid::d_dr: order must be 4 or 6");
  auto fs = ds_derivative(f, ds_, 1, order);
  for (std::size_t j = 0; j < fs.size(); ++j) fs[j] /= drds_[j];
  return fs;
}

std::vector<double> RadialGrid::d2_dr2(const std::vector<double>& f, int order) const {
  if (f.size() != r_.size()) throw std::invalid_argument("RadialGrid::d2_dr2: size mismatch");
  if (order != 4 && order != 6) throw std::invalid_argument("RadialGrid::d2_dr2: order must be 4 or 6");
  const auto fs = ds_derivative(f, ds_, 1, order);
  const auto fss = ds_derivative(f, ds_, 2, order);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double rp = drds_[j];
    out[j] = (fss[j] - d2rds2_[j] / rp * fs[j]) / (rp * rp);
  }
  return out;
}

bool RadialGrid::same_as(const RadialGrid& o) const {
  return map_.c == o.map_.c && s0_ == o.s0_ && ds_ == o.ds_ && r_.size() == o.r_.size();
}

}  // namespace vspec

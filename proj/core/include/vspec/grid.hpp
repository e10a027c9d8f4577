#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vspec {

// Smooth stretching x(s) = c * log(1 + e^s): geometric spacing for x << c and
// uniform spacing c*ds for x >> c. All quadratures and difference operators
// work in the uniform variable s.
struct SoftplusMap {
  double c = 1.0;

  [[nodiscard]] double x(double s) const;
  [[nodiscard]] double dx(double s) const;   // dx/ds
  [[nodiscard]] double d2x(double s) const;  // d2x/ds2
  [[nodiscard]] double s_of(double x) const;
};

// Radial nodes with weights for  int f(r) r dr  over [r_min, r_max].
class RadialGrid {
 public:
  RadialGrid() = default;
  // Nodes r_j = map(s_0 + j ds) with r_0 = r_min and r_{n-1} = r_max exactly;
  // ds is adjusted downward from ds_target so that the end points are hit
  // with an even number of intervals.
  static RadialGrid make(double r_min, double r_max, double ds_target, double c = 1.0);
  // Geometric 1e-4 -> ~2, uniform spacing 0.02 beyond.
  static RadialGrid default_grid(double r_max = 60.0) { return make(1e-4, r_max, 0.02, 1.0); }

  [[nodiscard]] std::size_t size() const { return r_.size(); }
  [[nodiscard]] const std::vector<double>& r() const { return r_; }
  [[nodiscard]] const std::vector<double>& weights() const { return w_; }
  [[nodiscard]] double r(std::size_t i) const { return r_[i]; }
  [[nodiscard]] double r_min() const { return r_.front(); }
  [[nodiscard]] double r_max() const { return r_.back(); }
  [[nodiscard]] double ds() const { return ds_; }
  [[nodiscard]] double s0() const { return s0_; }
  [[nodiscard]] const SoftplusMap& map() const { return map_; }

  // int f r dr with the grid weights.
  [[nodiscard]] double integrate(const std::vector<double>& f) const;
  [[nodiscard]] std::complex<double> integrate(const std::vector<std::complex<double>>& f) const;

  // d/dr and d2/dr2 by central differences in s of the given order (4 or 6),
  // one-sided near the ends.
  [[nodiscard]] std::vector<double> d_dr(const std::vector<double>& f, int order = 4) const;
  [[nodiscard]] std::vector<double> d2_dr2(const std::vector<double>& f, int order = 4) const;

  // Nodes 0, 2, 4, ... of this grid (doubled ds, same end points).
  [[nodiscard]] RadialGrid every_other() const;

  // Identity used for cache keys and equality.
  [[nodiscard]] bool same_as(const RadialGrid& o) const;

 private:
  static RadialGrid build(double c, double r_min, double r_max, std::size_t intervals);

  SoftplusMap map_;
  double s0_ = 0.0, ds_ = 0.0;
  std::vector<double> r_, w_, drds_, d2rds2_;
};

// Finite-difference weights (Fornberg) for derivatives 0..m at z from nodes x.
// Returns w[k][j]: weight of node j for the k-th derivative.
std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m);

// Gregory end corrections for the trapezoid rule with unit spacing: adding
// sum_j c_j f(j) at each end makes the rule exact for polynomials of degree < n.
std::vector<double> gregory_corrections(int n);

}  // namespace vspec

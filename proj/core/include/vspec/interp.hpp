#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vspec {

// Value, first and second derivative of an interpolant at one point.
struct Jet {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

// Piecewise quintic Hermite interpolation on a uniform grid. Each node carries
// f, f' and f''; the interpolant is C2 and reproduces quintics exactly.
class QuinticHermite {
 public:
  QuinticHermite() = default;
  QuinticHermite(double x0, double h, std::vector<double> f, std::vector<double> df,
                 std::vector<double> d2f);

  [[nodiscard]] Jet eval(double x) const;
  [[nodiscard]] double x_min() const { return x0_; }
  [[nodiscard]] double x_max() const { return x0_ + h_ * static_cast<double>(f_.size() - 1); }
  [[nodiscard]] bool empty() const { return f_.empty(); }
  [[nodiscard]] double step() const { return h_; }
  [[nodiscard]] const std::vector<double>& values() const { return f_; }
  [[nodiscard]] const std::vector<double>& first() const { return df_; }
  [[nodiscard]] const std::vector<double>& second() const { return d2f_; }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> f_, df_, d2f_;
};

}  // namespace vspec

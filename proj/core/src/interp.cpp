#include "vspec/interp.hpp"

#include <algorithm>
#include <cmath>

namespace vspec {

QuinticHermite::QuinticHermite(double x0, double h, std::vector<double> f, std::vector<double> df,
                               std::vector<double> d2f)
    : x0_(x0), h_(h), f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)) {
  if (f_.size() < 2 || df_.size() != f_.size() || d2f_.size() != f_.size() || !(h_ > 0.0)) {
    throw std::invalid_argument("QuinticHermite: inconsistent table");
  }
}

Jet QuinticHermite::eval(double x) const {
  const auto n = static_cast<long>(f_.size());
  double s = (x - x0_) / h_;
  long i = static_cast<long>(std::floor(s));
  i = std::clamp(i, 0L, n - 2);
  const double t = s - static_cast<double>(i);
  const double d0 = f_[i], d1 = h_ * df_[i], d2 = h_ * h_ * d2f_[i];
  const double e0 = f_[i + 1], e1 = h_ * df_[i + 1], e2 = h_ * h_ * d2f_[i + 1];
  const double c0 = d0, c1 = d1, c2 = 0.5 * d2;
  const double c3 = 10.0 * (e0 - d0) - 6.0 * d1 - 4.0 * e1 - 0.5 * (3.0 * d2 - e2);
  const double c4 = -15.0 * (e0 - d0) + 8.0 * d1 + 7.0 * e1 + 0.5 * (3.0 * d2 - 2.0 * e2);
  const double c5 = 6.0 * (e0 - d0) - 3.0 * (d1 + e1) - 0.5 * (d2 - e2);
  Jet j;
  j.f = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
  j.df = (c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)))) / h_;
  j.d2f = (2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5))) / (h_ * h_);
  return j;
}

}  // namespace vspec

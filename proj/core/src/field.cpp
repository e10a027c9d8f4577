#include "vspec/field.hpp"

#include <algorithm>
#include <cmath>

namespace vspec {

namespace {
void check_compatible(const RadialField& a, const RadialField& b) {
  if (a.size() != b.size() || !a.grid || !b.grid || !a.grid->same_as(*b.grid)) {
    throw std::invalid_argument("RadialField: incompatible grids");
  }
}
}  // namespace

double RadialField::l2_norm() const {
  double s = 0.0;
  const auto& w = grid->weights();
  for (std::size_t i = 0; i < size(); ++i) s += w[i] * (std::norm(u[i]) + std::norm(v[i]));
  return std::sqrt(std::max(s, 0.0));
}

double RadialField::max_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::max({m, std::abs(u[i]), std::abs(v[i])});
  return m;
}

RadialField& RadialField::operator+=(const RadialField& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < size(); ++i) {
    u[i] += o.u[i];
    v[i] += o.v[i];
  }
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < size(); ++i) {
    u[i] -= o.u[i];
    v[i] -= o.v[i];
  }
  return *this;
}

RadialField& RadialField::operator*=(cplx s) {
  for (std::size_t i = 0; i < size(); ++i) {
    u[i] *= s;
    v[i] *= s;
  }
  return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(cplx s, RadialField a) { return a *= s; }

cplx pairing(const RadialField& f1, const RadialField& f2) {
  check_compatible(f1, f2);
  cplx s = 0.0;
  const auto& w = f1.grid->weights();
  for (std::size_t i = 0; i < f1.size(); ++i) s += w[i] * (f1.u[i] * f2.u[i] + f1.v[i] * f2.v[i]);
  return s;
}

cplx inner(const RadialField& f1, const RadialField& f2) {
  check_compatible(f1, f2);
  cplx s = 0.0;
  const auto& w = f1.grid->weights();
  for (std::size_t i = 0; i < f1.size(); ++i) {
    s += w[i] * (std::conj(f1.u[i]) * f2.u[i] + std::conj(f1.v[i]) * f2.v[i]);
  }
  return s;
}

RadialField every_other(const RadialField& f, std::shared_ptr<const RadialGrid> coarse) {
  if (!coarse->same_as(f.grid->every_other())) throw std::invalid_argument("every_other: grid is not the coarsening");
  RadialField out(std::move(coarse));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.u[i] = f.u[2 * i];
    out.v[i] = f.v[2 * i];
  }
  return out;
}

}  // namespace vspec

#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "vspec/grid.hpp"

namespace vspec {

using cplx = std::complex<double>;

// A state (u, v) sampled on a radial grid.
struct RadialField {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<cplx> u, v;

  RadialField() = default;
  explicit RadialField(std::shared_ptr<const RadialGrid> g)
      : grid(std::move(g)), u(grid->size(), 0.0), v(grid->size(), 0.0) {}

  [[nodiscard]] std::size_t size() const { return u.size(); }

  // sqrt(int |u|^2 + |v|^2 r dr)
  [[nodiscard]] double l2_norm() const;
  [[nodiscard]] double max_norm() const;

  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);
  RadialField& operator*=(cplx s);
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(cplx s, RadialField a);

// Samples of `f` on coarse = f.grid->every_other().
RadialField every_other(const RadialField& f, std::shared_ptr<const RadialGrid> coarse);

// Bilinear pairing  int (f1 . f2) r dr  (no conjugation).
cplx pairing(const RadialField& f1, const RadialField& f2);

// Sesquilinear inner product  int (conj(f1) . f2) r dr.
cplx inner(const RadialField& f1, const RadialField& f2);

}  // namespace vspec

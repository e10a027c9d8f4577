#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <boost/numeric/odeint/algebra/array_algebra.hpp>

namespace vspec::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-10;
};

class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Overflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive Runge-Kutta-Fehlberg 7(8) driver that lands exactly on requested
// abscissae. Works in either direction; `h` carries the step-size hint between
// calls and is updated in place.
template <std::size_t N>
class Driver {
 public:
  using state_type = State<N>;
  using base_stepper = boost::numeric::odeint::runge_kutta_fehlberg78<state_type>;
  using stepper_type = boost::numeric::odeint::controlled_runge_kutta<base_stepper>;

  explicit Driver(Tolerance tol = {})
      : stepper_(typename stepper_type::error_checker_type(tol.abs, tol.rel)) {}

  template <class Rhs>
  void advance(Rhs&& rhs, state_type& y, double r0, double r1, double& h) {
    if (r0 == r1) return;
    const double dir = r1 > r0 ? 1.0 : -1.0;
    if (!(h * dir > 0.0)) h = dir * std::min(std::abs(r1 - r0), 1e-2 * (1.0 + std::abs(r0)));
    double r = r0;
    int failures = 0;
    while (dir * (r1 - r) > 0.0) {
      double h_try = h;
      const bool clamped = dir * (r + h_try - r1) >= 0.0;
      if (clamped) h_try = r1 - r;
      const double h_before = h_try;
      auto res = stepper_.try_step(rhs, y, r, h_try);
      if (res == boost::numeric::odeint::success) {
        failures = 0;
        if (clamped) {
          r = r1;
          // keep the free-running hint if the clamp shortened the step
          h = dir * std::max(std::abs(h), std::abs(h_try));
        } else {
          h = h_try;
        }
        for (double v : y) {
          if (!std::isfinite(v)) throw Overflow("ode: non-finite state at r = " + std::to_string(r));
        }
      } else {
        h = h_try;
        if (std::abs(h) < 1e-15 * (1.0 + std::abs(r)) || ++failures > 200) {
          throw StepUnderflow("ode: step size underflow at r = " + std::to_string(r) +
                              " (last attempt " + std::to_string(h_before) + ")");
        }
      }
    }
  }

 private:
  stepper_type stepper_;
};

}  // namespace vspec::ode

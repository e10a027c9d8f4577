#pragma once

#include <complex>
#include <stdexcept>

// Bessel-type special functions of orders 0 and 1, plus the real pair of
// imaginary-order modified Bessel functions solving  f'' + f'/x - f + f/x^2 = 0.
namespace vspec::special {

enum class Family { J, Y, I, K, I_imag, K_imag };

struct BesselKind {
  Family family = Family::J;
  int order = 0;  // 0 or 1; ignored for the imaginary-order pair
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Default crossover between the power series and the Hankel asymptotic
// expansion for J and Y.
inline constexpr double kDefaultXSwitch = 15.0;

// Value of the requested function. Throws DomainError outside the domain and
// std::overflow_error when I overflows a double.
double bessel(BesselKind kind, double x, double x_switch = kDefaultXSwitch);

// Analytic derivative d/dx (recurrences for integer orders; the ODE state for
// the imaginary-order pair).
double bessel_prime(BesselKind kind, double x, double x_switch = kDefaultXSwitch);

// H_n^{(1)}(x) = J_n(x) + i Y_n(x), n in {0, 1}.
std::complex<double> hankel1(int order, double x, double x_switch = kDefaultXSwitch);

// Last zero of I_imag and K_imag, detected numerically; both are positive on
// (r_star, infinity).
double imag_order_threshold();

// Asymptotic outgoing solution of  w'' + w'/x + (1 - nu^2/x^2) w = 0  with
// mu = 4 nu^2 (any real mu, including negative):
//   h(x) = sqrt(2/(pi x)) exp(i(x - pi/4)) sum_k i^k a_k(mu) / x^k,
// i.e. exp(i nu pi/2) H^{(1)}_nu(x). Only meaningful for x >> 1 + |mu|.
struct ComplexJet {
  std::complex<double> value;
  std::complex<double> derivative;
};
ComplexJet hankel_asymptotic(double mu, double x);

}  // namespace vspec::special

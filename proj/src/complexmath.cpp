#include "bodefrac/complexmath.hpp"

#include <cmath>
#include <stdexcept>

namespace bodefrac {

double principal_arg(Complex z) {
  double im = z.imag();
  if (im == 0.0) im = 0.0;  // collapse -0 to +0 so the cut maps to +pi
  return std::atan2(im, z.real());
}

Complex principal_power(Complex s, double a) {
  if (s == 0.0) {
    if (a > 0.0) return {0.0, 0.0};
    throw std::domain_error("principal_power: 0^a undefined for a <= 0");
  }
  const double lr = a * std::log(std::abs(s));
  const double th = a * principal_arg(s);
  return std::exp(lr) * Complex{std::cos(th), std::sin(th)};
}

Complex clog1p(Complex z) {
  if (std::abs(z) >= 0.5) return std::log(Complex{1.0, 0.0} + z);
  const double re = 0.5 * std::log1p(2.0 * z.real() + std::norm(z));
  const double im = std::atan2(z.imag(), 1.0 + z.real());
  return {re, im};
}

double log1p_abs_sq(Complex z) {
  if (std::abs(z) >= 0.5) {
    const Complex w = Complex{1.0, 0.0} + z;
    return std::log(std::norm(w));
  }
  return std::log1p(2.0 * z.real() + std::norm(z));
}

double unwrap_phase(double raw, double prev) {
  return raw + kTwoPi * std::round((prev - raw) / kTwoPi);
}

double PhaseTracker::advance(Complex z) {
  return advance_raw(principal_arg(z));
}

double PhaseTracker::advance_raw(double raw) {
  const double ph = prev_ ? unwrap_phase(raw, *prev_) : raw;
  prev_ = ph;
  return ph;
}

}  // namespace bodefrac

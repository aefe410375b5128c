#pragma once

#include <complex>
#include <optional>

namespace bodefrac {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Argument on the principal branch, Arg in (-pi, pi]. A negative-zero
// imaginary part is treated as +0 so that Arg(-1) = +pi, not -pi.
double principal_arg(Complex z);

// s^a on the principal branch: exp(a*(ln|s| + i*Arg s)), cut on the
// negative real axis. s = 0 returns 0 for a > 0 and throws for a <= 0.
Complex principal_power(Complex s, double a);

// log(1 + z) without cancellation for small |z|.
Complex clog1p(Complex z);

// ln|1 + z|^2 without cancellation for small |z|.
double log1p_abs_sq(Complex z);

// Shift raw by a multiple of 2*pi so the result lies within pi of prev.
double unwrap_phase(double raw, double prev);

// Sequential phase continuation along a sampling path.
class PhaseTracker {
 public:
  PhaseTracker() = default;
  explicit PhaseTracker(double anchor) : prev_(anchor) {}

  // Unwraps the principal argument of z against the previous sample.
  double advance(Complex z);
  // Unwraps a raw angle directly.
  double advance_raw(double raw);

  bool anchored() const { return prev_.has_value(); }
  double current() const { return *prev_; }

 private:
  std::optional<double> prev_;
};

}  // namespace bodefrac

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bodefrac/model.hpp"

namespace bodefrac {

namespace defaults {
inline constexpr double kRootResidualTol = 1e-12;
inline constexpr double kBoundaryModulusTol = 1e-9;
inline constexpr double kCertificateMargin = 0.5;  // growth check |chi| >= margin*|lead|
inline double cluster_radius(double root_mod) { return 1e-7 * (1.0 + root_mod); }
}  // namespace defaults

struct RootFindError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundaryZeroError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Rectangle {
  double re_min, re_max, im_min, im_max;
  void validate() const;
  bool contains(Complex z) const;
};

// All complex roots by simultaneous (Aberth-Ehrlich) iteration; roots closer
// than the cluster radius are merged with summed multiplicity.
std::vector<std::pair<Complex, int>> polynomial_roots(const Polynomial& p,
                                                      double tol = defaults::kRootResidualTol);

struct RhpPoles {
  std::vector<PoleRecord> poles;  // nondecreasing modulus
  std::vector<std::string> warnings;
};

// Open right-half-plane roots of the plant denominator as pole records.
RhpPoles rhp_open_loop_poles(const RationalPlant& plant);

// Winding number of f around 0 along the rectangle boundary (counter-
// clockwise), by adaptive phase-step subdivision. Throws BoundaryZeroError
// when the boundary modulus drops below tolerance.
int count_winding_rect(const std::function<Complex(Complex)>& f, const Rectangle& rect,
                       double* boundary_min_modulus = nullptr);

// Zeros of the model's characteristic value (chi for rational-fractal
// loops, S itself for synthetic ones) inside the rectangle.
int count_zeros_rect(const LoopModel& model, const Rectangle& rect);

// Newton refinement from a seed, order estimated by winding on a small
// circle around the result. The order of a fractional zero may be
// non-integer.
std::pair<Complex, double> refine_zero(const LoopModel& model, Complex seed, double tol = 1e-12);

enum class StabilityVerdict { kStable, kUnstable, kInconclusive };

struct StabilityCertificate {
  Rectangle region{0, 1, -1, 1};
  int zero_count = 0;
  double boundary_min_modulus = 0.0;
  StabilityVerdict verdict = StabilityVerdict::kInconclusive;
  std::string note;
};

// Argument-principle zero count over [axis_tol, re_max] x [-im_max, im_max]
// plus a leading-term growth check on the outer edges. The growth check is
// a heuristic tail argument: failure yields kInconclusive, never a false
// kStable.
StabilityCertificate certify_stability(const LoopModel& model, double re_max, double im_max);
StabilityCertificate certify_stability(const LoopModel& model);  // default region

const char* to_string(StabilityVerdict v);

}  // namespace bodefrac

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bodefrac/complexmath.hpp"

namespace bodefrac {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Positive abscissae;
// index 0 is the center node. Nodes are interior, so endpoint singularities
// are never evaluated.
namespace gk {
inline constexpr int kNodeCount = 8;  // distinct non-negative abscissae
extern const double kAbscissae[kNodeCount];
extern const double kGaussWeights[kNodeCount];   // zero for Kronrod-only nodes
extern const double kKronrodWeights[kNodeCount];
}  // namespace gk

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evals = 0;
  bool converged = true;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  int max_depth = 48;
  // Called with (x, f(x), panel_id) for every accepted-panel node.
  std::function<void(double, double, long)> sample_sink;
};

// Adaptive G7K15 over [a, b]. The absolute tolerance is budgeted across
// panels proportionally to length.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opt = {});

// Least-squares line fit; returns (slope, intercept).
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

// Limit of v(h) as h -> 0 from samples at decreasing h, assuming
// v(h) = v0 + c h^kappa with kappa estimated from the last three points
// when possible. Returns (limit, error_estimate).
std::pair<Complex, double> extrapolate_to_zero(std::span<const double> h,
                                               std::span<const Complex> v);

}  // namespace bodefrac

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bodefrac/bodeint.hpp"
#include "bodefrac/model.hpp"

namespace bodefrac {

namespace defaults {
inline constexpr double kSegmentTol = 1e-9;
inline constexpr double kSlopeTolerance = 0.1;       // arc decay exponent
inline constexpr double kScalingTolerance = 0.2;     // eps ln(1/eps) consistency
inline constexpr double kCorridorRelTol = 1e-3;      // pair limit vs -2 pi i d Re p
}  // namespace defaults

struct ContourError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Imaginary-axis run from i*im_start to i*im_end.
struct AxisSeg {
  double im_start, im_end;
};
// Circular arc s = center + r e^{i theta}, theta from theta0 to theta1
// (decreasing = clockwise). The outer arc is Arc(0, R, pi/2, -pi/2); the
// origin indentation is Arc(0, eps, -pi/2, pi/2).
struct ArcSeg {
  Complex center;
  double radius;
  double theta0, theta1;
};
// Branch-cut lip at offset `width` below (side=-1) or above (side=+1) the
// horizontal ray from the pole toward the axis: s = pole + x e^{i(pi+tilt)}
// + i side width e^{i tilt}, x in [x_near, x_far]. inward = true traverses
// axis -> pole.
struct LipSeg {
  Complex pole;
  double x_near, x_far;
  int side;
  bool inward;
  double width = 0.0;
  double tilt = 0.0;
};
// Counterclockwise epsilon-circle around a pole, theta in [theta0, theta1].
struct CircleSeg {
  Complex center;
  double radius;
  double theta0 = -kPi;
  double theta1 = kPi;
};

using PathSegment = std::variant<AxisSeg, ArcSeg, LipSeg, CircleSeg>;

// Position and derivative of a segment at parameter u in [0, 1].
std::pair<Complex, Complex> segment_point(const PathSegment& seg, double u);

struct ContourSpec {
  double R = 100.0;
  double eps = 1e-4;
  double corridor_width = 0.0;  // 0 = exact-cut lips with side-aware continuation
  std::vector<PoleRecord> poles;
  bool origin_indent = false;

  void validate() const;
};

// Fig.-style closed path: axis run upward from -iR to +iR interrupted at each
// pole's imaginary part by lower lip in / ccw circle / upper lip out, origin
// indented by a right half circle when requested, closed by the outer arc
// traversed clockwise.
std::vector<PathSegment> build_contour(const ContourSpec& spec);

struct SegmentTraceSample {
  int segment_id;
  Complex s;
  Complex log_s;
};
using SegmentTraceSink = std::vector<SegmentTraceSample>*;

struct SegmentIntegral {
  Complex value{0.0, 0.0};
  double abs_error = 0.0;
  double start_phase = 0.0;
  double end_phase = 0.0;
  long evals = 0;
};

// Integral of log S(s) ds over one segment by ordered marching quadrature
// with phase continuity: panels are refined until successive unwrapped
// phases differ by less than pi/2 and the embedded error estimate passes.
// `anchor_phase` fixes the branch at the segment start; absent means the
// principal argument there.
SegmentIntegral integrate_segment(const LoopModel& model, const PathSegment& seg,
                                  double tol = defaults::kSegmentTol,
                                  std::optional<double> anchor_phase = {},
                                  int segment_id = 0, SegmentTraceSink trace = nullptr);

struct LemmaReport {
  std::vector<double> parameters;   // R, eps or width ladder
  std::vector<double> magnitudes;
  std::vector<Complex> values;
  double fitted_slope = 0.0;
  double expected_slope = 0.0;
  double slope_tolerance = defaults::kSlopeTolerance;
  std::optional<Complex> limit_estimate;
  std::optional<Complex> expected_limit;
  bool pass = false;
  std::string note;
};

// Outer-arc decay: |integral| ~ R^(alpha+n-m+1) under the degree condition.
LemmaReport verify_lemma_arc(const LoopModel& model, std::span<const double> r_list);

// Pole-circle integrals -> 0, consistent with eps*ln(1/eps) scaling.
LemmaReport verify_lemma_pole_circle(const LoopModel& model, const PoleRecord& pole,
                                     std::span<const double> eps_list);

// Origin-semicircle integrals -> 0 (integral action makes S(0) = 0).
LemmaReport verify_lemma_origin(const LoopModel& model, std::span<const double> eps_list);

// Lip-pair sums at finite widths, extrapolated to width 0; the limit is
// -2 pi i d Re(p) under this artifact's orientation.
LemmaReport verify_corridor_pair(const LoopModel& model, const PoleRecord& pole,
                                 std::span<const double> widths, double tilt = 0.0);

// Sum of all segment integrals of the closed contour, threading one branch
// anchor around the whole path. For conjugate-symmetric models an axis value
// i*I/2 may be injected instead of re-integrating the axis runs.
Complex closure_check(const LoopModel& model, const ContourSpec& spec,
                      std::optional<Complex> injected_axis = {},
                      std::vector<SegmentTraceSample>* trace = nullptr,
                      double* max_segment_magnitude = nullptr);

struct ResidualEstimate {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  bool converged = true;
};

// lim_{R->inf} of the outer-arc integral by extrapolation over the radius
// ladder; enters the reconciliation as I = 4 pi sum + 2i * residual.
ResidualEstimate gamma_r_residual(const LoopModel& model, std::span<const double> r_list);

// Integral of log S over a radius-eps right semicircle centered at an
// on-axis point (the limit-point indentation of the clustered-zeros path).
Complex limit_point_semicircle(const LoopModel& model, Complex center, double eps);

}  // namespace bodefrac

#include "bodefrac/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bodefrac/quadrature.hpp"

namespace bodefrac {
namespace {

struct Node {
  double t;  // position in [-1, 1]
  double wk; // Kronrod weight
  double wg; // Gauss weight
};

// The 15 Kronrod nodes in ascending order, built once from the half tables.
const std::array<Node, 15>& nodes_ascending() {
  static const std::array<Node, 15> table = [] {
    std::array<Node, 15> t{};
    int n = 0;
    for (int i = gk::kNodeCount - 1; i >= 1; --i)
      t[n++] = {-gk::kAbscissae[i], gk::kKronrodWeights[i], gk::kGaussWeights[i]};
    t[n++] = {0.0, gk::kKronrodWeights[0], gk::kGaussWeights[0]};
    for (int i = 1; i < gk::kNodeCount; ++i)
      t[n++] = {gk::kAbscissae[i], gk::kKronrodWeights[i], gk::kGaussWeights[i]};
    return t;
  }();
  return table;
}

bool synthetic_raw(const LoopModel& model) {
  return !model.is_rational() && model.synthetic_model().form == FactorForm::kRaw;
}

void require_unbounded_ok(const LoopModel& model, const char* op) {
  if (synthetic_raw(model))
    throw std::invalid_argument(std::string(op) +
                                ": raw-form synthetic models are bounded-domain only");
}

double strictly_decreasing(std::span<const double> v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

// Log-log slope the curve eps*ln(1/eps) itself shows over the ladder; the
// reference for "consistent with eps ln(1/eps) scaling".
double model_curve_slope(std::span<const double> eps) {
  std::vector<double> x, y;
  for (double e : eps) {
    x.push_back(std::log(e));
    y.push_back(std::log(e * std::log(1.0 / e)));
  }
  return linear_fit(x, y).first;
}

}  // namespace

std::pair<Complex, Complex> segment_point(const PathSegment& seg, double u) {
  if (const auto* a = std::get_if<AxisSeg>(&seg)) {
    const double len = a->im_end - a->im_start;
    return {Complex{0.0, a->im_start + u * len}, Complex{0.0, len}};
  }
  if (const auto* a = std::get_if<ArcSeg>(&seg)) {
    const double dth = a->theta1 - a->theta0;
    const double th = a->theta0 + u * dth;
    const Complex e{std::cos(th), std::sin(th)};
    return {a->center + a->radius * e, Complex{0.0, 1.0} * a->radius * e * dth};
  }
  if (const auto* c = std::get_if<CircleSeg>(&seg)) {
    const double dth = c->theta1 - c->theta0;
    const double th = c->theta0 + u * dth;
    const Complex e{std::cos(th), std::sin(th)};
    return {c->center + c->radius * e, Complex{0.0, 1.0} * c->radius * e * dth};
  }
  const auto& l = std::get<LipSeg>(seg);
  const Complex dir{std::cos(kPi + l.tilt), std::sin(kPi + l.tilt)};
  const Complex off = Complex{0.0, static_cast<double>(l.side)} *
                      Complex{std::cos(l.tilt), std::sin(l.tilt)};
  const double x0 = l.inward ? l.x_far : l.x_near;
  const double x1 = l.inward ? l.x_near : l.x_far;
  const double x = x0 + u * (x1 - x0);
  // Exact-cut lips are nudged one ulp to their side so a standalone
  // evaluation lands on the correct branch of arg(s - pole).
  const double off_mag = l.width > 0.0 ? l.width : 5e-16 * x;
  return {l.pole + x * dir + off_mag * off, dir * (x1 - x0)};
}

void ContourSpec::validate() const {
  double max_mod = 0.0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const Complex pi = poles[i].location;
    if (pi.real() <= 0.0)
      throw std::invalid_argument("ContourSpec: pole not in the open right half plane");
    max_mod = std::max(max_mod, std::abs(pi));
    if (eps >= pi.real())
      throw std::invalid_argument("ContourSpec: eps circle would cross the imaginary axis");
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      const Complex pj = poles[j].location;
      if (std::abs(pi - pj) < 2.0 * eps)
        throw std::invalid_argument("ContourSpec: eps exceeds half the minimum pole spacing");
      if (std::abs(pi.imag() - pj.imag()) <=
          std::max(2.0 * corridor_width, 1e-12 * (1.0 + max_mod)))
        throw ContourError(
            "ContourSpec: corridor collision, two poles share an imaginary part; "
            "tilt one corridor");
    }
  }
  if (R <= max_mod + 1.0)
    throw std::invalid_argument("ContourSpec: R must exceed the largest pole modulus + 1");
  if (eps <= 0.0 || R <= 0.0) throw std::invalid_argument("ContourSpec: R and eps must be positive");
}

std::vector<PathSegment> build_contour(const ContourSpec& spec) {
  spec.validate();
  std::vector<PoleRecord> sorted = spec.poles;
  std::sort(sorted.begin(), sorted.end(), [](const PoleRecord& a, const PoleRecord& b) {
    return a.location.imag() < b.location.imag();
  });

  std::vector<PathSegment> segs;
  double y = -spec.R;
  const double w = spec.corridor_width;

  auto axis_to = [&](double yto) {
    if (yto > y) segs.push_back(AxisSeg{y, yto});
    y = yto;
  };
  auto corridor = [&](const PoleRecord& p, double x_far) {
    if (x_far <= spec.eps)
      throw std::invalid_argument("ContourSpec: pole too close to the indentation circle");
    segs.push_back(LipSeg{p.location, spec.eps, x_far, -1, true, w, 0.0});
    segs.push_back(CircleSeg{p.location, spec.eps});
    segs.push_back(LipSeg{p.location, spec.eps, x_far, +1, false, w, 0.0});
  };

  if (!spec.origin_indent) {
    for (const PoleRecord& p : sorted) {
      axis_to(p.location.imag());
      corridor(p, p.location.real());
    }
    axis_to(spec.R);
  } else {
    const double e0 = spec.eps;
    std::vector<PoleRecord> below, inside, above;
    for (const PoleRecord& p : sorted) {
      if (p.location.imag() < -e0) below.push_back(p);
      else if (p.location.imag() > e0) above.push_back(p);
      else inside.push_back(p);
    }
    for (const PoleRecord& p : below) {
      axis_to(p.location.imag());
      corridor(p, p.location.real());
    }
    axis_to(-e0);
    double th = -0.5 * kPi;
    for (const PoleRecord& p : inside) {
      const double thp = std::asin(p.location.imag() / e0);
      if (thp > th) segs.push_back(ArcSeg{{0.0, 0.0}, e0, th, thp});
      th = thp;
      corridor(p, p.location.real() - e0 * std::cos(thp));
    }
    segs.push_back(ArcSeg{{0.0, 0.0}, e0, th, 0.5 * kPi});
    y = e0;
    for (const PoleRecord& p : above) {
      axis_to(p.location.imag());
      corridor(p, p.location.real());
    }
    axis_to(spec.R);
  }
  segs.push_back(ArcSeg{{0.0, 0.0}, spec.R, 0.5 * kPi, -0.5 * kPi});
  return segs;
}

SegmentIntegral integrate_segment(const LoopModel& model, const PathSegment& seg, double tol,
                                  std::optional<double> anchor_phase, int segment_id,
                                  SegmentTraceSink trace) {
  SegmentIntegral out;
  const bool angular = std::holds_alternative<ArcSeg>(seg) || std::holds_alternative<CircleSeg>(seg);
  const double h0 = angular ? 1.0 / 64.0 : 1.0 / 16.0;
  const double h_min = 1e-10;

  PhaseTracker tracker;
  if (anchor_phase) tracker = PhaseTracker(*anchor_phase);
  bool first_sample = true;

  double u = 0.0;
  double h = h0;
  const auto& nt = nodes_ascending();

  while (u < 1.0 - 1e-15) {
    h = std::min(h, 1.0 - u);
    const PhaseTracker saved = tracker;

    Complex k15{0.0, 0.0}, g7{0.0, 0.0};
    std::array<Complex, 15> svals, fvals;
    bool ok = true;
    bool phase_fail = false;
    PhaseTracker local = saved;
    double prev_lnmod = 0.0;
    bool have_prev = false;
    for (int i = 0; i < 15 && ok; ++i) {
      const double un = u + 0.5 * h * (nt[i].t + 1.0);
      const auto [s, ds] = segment_point(seg, un);
      Complex ls;
      try {
        ls = eval_log_sensitivity(model, s,
                                  local.anchored() ? std::optional<double>(local.current())
                                                   : std::nullopt);
      } catch (const BranchPointError&) {
        ok = false;
        break;
      }
      const double ph = ls.imag();
      if (local.anchored()) {
        if (std::abs(ph - local.current()) > 0.5 * kPi) {
          ok = false;
          phase_fail = true;
          break;
        }
        if (have_prev && std::abs(ls.real() - prev_lnmod) > 2.0) {
          ok = false;
          break;
        }
      }
      local.advance_raw(ph);
      prev_lnmod = ls.real();
      have_prev = true;
      svals[i] = s;
      fvals[i] = ls;
      const Complex g = ls * ds;
      k15 += nt[i].wk * g;
      g7 += nt[i].wg * g;
    }

    if (ok) {
      k15 *= 0.5 * h;
      g7 *= 0.5 * h;
      const double err = std::abs(k15 - g7);
      const double budget = tol * h + 1e-16 * std::abs(k15);
      if (err <= budget || h <= h_min * 4.0) {
        if (first_sample) {
          out.start_phase = anchor_phase ? *anchor_phase : fvals[0].imag();
          first_sample = false;
        }
        out.value += k15;
        out.abs_error += err;
        out.evals += 15;
        tracker = local;
        if (trace)
          for (int i = 0; i < 15; ++i) trace->push_back({segment_id, svals[i], fvals[i]});
        u += h;
        if (err < 0.1 * budget) h *= 2.0;
        continue;
      }
    }
    if (h <= h_min) {
      if (phase_fail)
        throw ContourError("integrate_segment: phase step exceeded pi/2 after max refinement "
                           "(branch tracking lost)");
      throw ContourError("integrate_segment: integrand not resolvable on the segment");
    }
    h *= 0.5;
  }
  out.end_phase = tracker.anchored() ? tracker.current() : 0.0;
  return out;
}

namespace {

// End phase of a segment without computing its integral (coarse adaptive
// phase walk); used when the axis value is injected.
double phase_continue(const LoopModel& model, const PathSegment& seg, double anchor) {
  struct Walker {
    const LoopModel& model;
    const PathSegment& seg;
    double walk(double u0, double ph0, double u1, int depth) const {
      const auto [s1, d1] = segment_point(seg, u1);
      const Complex ls = eval_log_sensitivity(model, s1, ph0);
      if (std::abs(ls.imag() - ph0) <= 0.5 * kPi || depth > 40) return ls.imag();
      const double um = 0.5 * (u0 + u1);
      const double phm = walk(u0, ph0, um, depth + 1);
      return walk(um, phm, u1, depth + 1);
    }
  } w{model, seg};
  const int initial = 32;
  double ph = anchor;
  double u = 0.0;
  for (int k = 1; k <= initial; ++k) {
    const double un = static_cast<double>(k) / initial;
    ph = w.walk(u, ph, un, 0);
    u = un;
  }
  return ph;
}

}  // namespace

LemmaReport verify_lemma_arc(const LoopModel& model, std::span<const double> r_list) {
  if (!model.is_rational())
    throw std::invalid_argument("verify_lemma_arc: rational-fractal models only");
  if (r_list.size() < 3)
    throw std::invalid_argument("verify_lemma_arc: need at least three radii for the fit");
  const auto& rf = model.rational_loop();

  double expo = 0.0, gain = 0.0;
  if (rf.pid.k1 != 0.0) {
    gain = rf.pid.k1;
    expo = rf.pid.alpha;
  } else if (rf.pid.k0 != 0.0) {
    gain = rf.pid.k0;
  } else {
    gain = rf.pid.km1;
    expo = -rf.pid.beta;
  }
  const int m = rf.plant.den_degree(), n = rf.plant.num_degree();
  const double q = m - n - expo;

  LemmaReport rep;
  rep.expected_slope = expo + n - m + 1.0;  // = 1 - q
  rep.slope_tolerance = defaults::kSlopeTolerance;

  std::vector<double> lx, ly, hs;
  for (double R : r_list) {
    const ArcSeg arc{{0.0, 0.0}, R, 0.5 * kPi, -0.5 * kPi};
    const double tol = 1e-6 * std::abs(gain) * kPi * std::pow(R, rep.expected_slope) + 1e-14;
    const SegmentIntegral si = integrate_segment(model, PathSegment{arc}, tol);
    rep.parameters.push_back(R);
    rep.values.push_back(si.value);
    rep.magnitudes.push_back(std::abs(si.value));
    lx.push_back(std::log(R));
    ly.push_back(std::log(std::abs(si.value)));
    hs.push_back(1.0 / R);
  }
  rep.fitted_slope = linear_fit(lx, ly).first;

  if (q > 1.0) {
    rep.pass = std::abs(rep.fitted_slope - rep.expected_slope) <= rep.slope_tolerance;
  } else {
    rep.pass = false;
    const auto [lim, err] = extrapolate_to_zero(hs, rep.values);
    rep.limit_estimate = lim;
    rep.note = "degree condition violated (q = " + std::to_string(q) +
               " <= 1); arc integral tends to a nonzero limit";
  }
  return rep;
}

LemmaReport verify_lemma_pole_circle(const LoopModel& model, const PoleRecord& pole,
                                     std::span<const double> eps_list) {
  if (eps_list.size() < 2)
    throw std::invalid_argument("verify_lemma_pole_circle: need at least two radii");
  const double s_at_pole = log_abs_sensitivity_sq(model, pole.location);
  if (std::isfinite(s_at_pole) && s_at_pole > -20.0)
    throw std::invalid_argument("verify_lemma_pole_circle: given point is not a zero of S");

  LemmaReport rep;
  rep.slope_tolerance = defaults::kScalingTolerance;
  std::vector<double> lx, ly;
  for (double e : eps_list) {
    const CircleSeg c{pole.location, e};
    const SegmentIntegral si = integrate_segment(model, PathSegment{c}, 1e-11 * (1.0 + e));
    rep.parameters.push_back(e);
    rep.values.push_back(si.value);
    rep.magnitudes.push_back(std::abs(si.value));
    lx.push_back(std::log(e));
    ly.push_back(std::log(std::abs(si.value)));
  }
  rep.fitted_slope = linear_fit(lx, ly).first;
  rep.expected_slope = model_curve_slope(eps_list);
  const bool decreasing = strictly_decreasing(rep.magnitudes);
  rep.pass = decreasing &&
             std::abs(rep.fitted_slope - rep.expected_slope) <= rep.slope_tolerance;
  if (!decreasing) rep.note = "circle integral magnitudes are not strictly decreasing";
  return rep;
}

LemmaReport verify_lemma_origin(const LoopModel& model, std::span<const double> eps_list) {
  if (eps_list.size() < 2)
    throw std::invalid_argument("verify_lemma_origin: need at least two radii");

  LemmaReport rep;
  rep.slope_tolerance = defaults::kScalingTolerance;
  std::vector<double> lx, ly;
  for (double e : eps_list) {
    const ArcSeg arc{{0.0, 0.0}, e, -0.5 * kPi, 0.5 * kPi};
    const SegmentIntegral si = integrate_segment(model, PathSegment{arc}, 1e-11 * (1.0 + e));
    rep.parameters.push_back(e);
    rep.values.push_back(si.value);
    rep.magnitudes.push_back(std::abs(si.value));
    lx.push_back(std::log(e));
    ly.push_back(std::log(std::abs(si.value)));
  }
  rep.fitted_slope = linear_fit(lx, ly).first;
  rep.expected_slope = model_curve_slope(eps_list);
  const bool decreasing = strictly_decreasing(rep.magnitudes);
  rep.pass = decreasing &&
             std::abs(rep.fitted_slope - rep.expected_slope) <= rep.slope_tolerance;
  if (!decreasing) rep.note = "origin semicircle magnitudes are not strictly decreasing";
  return rep;
}

LemmaReport verify_corridor_pair(const LoopModel& model, const PoleRecord& pole,
                                 std::span<const double> widths, double tilt) {
  if (widths.empty())
    throw std::invalid_argument("verify_corridor_pair: need at least one width");
  const double s_at_pole = log_abs_sensitivity_sq(model, pole.location);
  if (std::isfinite(s_at_pole) && s_at_pole > -20.0)
    throw std::invalid_argument("verify_corridor_pair: given point is not a zero of S");
  const Complex p = pole.location;
  const double x_far = p.real() / std::cos(tilt);

  LemmaReport rep;
  for (double w : widths) {
    if (w >= 0.5 * x_far)
      throw std::invalid_argument(
          "verify_corridor_pair: width must be small against Re(pole)");
    const double eps_in = w;  // inner truncation shrinks with the width
    const LipSeg lower{p, eps_in, x_far, -1, true, w, tilt};
    const LipSeg upper{p, eps_in, x_far, +1, false, w, tilt};
    // Connector arc around the pole from the lower lip end to the upper one;
    // integrated only to carry the branch, not added to the pair.
    const double gamma = std::atan2(w, eps_in);
    const CircleSeg conn{p, std::hypot(eps_in, w), -kPi + gamma + tilt, kPi - gamma + tilt};

    const SegmentIntegral lo = integrate_segment(model, PathSegment{lower}, 1e-10);
    const SegmentIntegral mid =
        integrate_segment(model, PathSegment{conn}, 1e-10, lo.end_phase);
    const SegmentIntegral up =
        integrate_segment(model, PathSegment{upper}, 1e-10, mid.end_phase);

    rep.parameters.push_back(w);
    rep.values.push_back(lo.value + up.value);
    rep.magnitudes.push_back(std::abs(lo.value + up.value));
  }

  const auto [lim, err] = extrapolate_to_zero(rep.parameters, rep.values);
  rep.limit_estimate = lim;
  const Complex expected =
      Complex{0.0, -kTwoPi * pole.order * p.real()} * Complex{1.0, std::tan(tilt)};
  rep.expected_limit = expected;
  rep.pass = std::abs(lim - expected) <= defaults::kCorridorRelTol * std::abs(expected);

  if (rep.parameters.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.parameters.size(); ++i) {
      const double dev = std::abs(rep.values[i] - lim);
      if (dev > 0.0) {
        lx.push_back(std::log(rep.parameters[i]));
        ly.push_back(std::log(dev));
      }
    }
    if (lx.size() >= 2) rep.fitted_slope = linear_fit(lx, ly).first;
    rep.expected_slope = 1.0;  // near-linear approach in the width
    rep.slope_tolerance = 0.5;
  }
  rep.note = "pass criterion: extrapolated pair within " +
             std::to_string(defaults::kCorridorRelTol) + " relative of -2 pi i d Re(p)";
  return rep;
}

Complex closure_check(const LoopModel& model, const ContourSpec& spec,
                      std::optional<Complex> injected_axis,
                      std::vector<SegmentTraceSample>* trace, double* max_segment_magnitude) {
  require_unbounded_ok(model, "closure_check");
  const std::vector<PathSegment> segs = build_contour(spec);
  Complex total{0.0, 0.0};
  double max_mag = 0.0;
  std::optional<double> anchor;
  bool injected_added = false;
  int id = 0;
  for (const PathSegment& seg : segs) {
    if (injected_axis && std::holds_alternative<AxisSeg>(seg)) {
      if (!injected_added) {
        total += *injected_axis;
        max_mag = std::max(max_mag, std::abs(*injected_axis));
        injected_added = true;
      }
      if (!anchor) {
        const auto [s0, d0] = segment_point(seg, 0.0);
        anchor = eval_log_sensitivity(model, s0).imag();
      }
      anchor = phase_continue(model, seg, *anchor);
      ++id;
      continue;
    }
    const SegmentIntegral si =
        integrate_segment(model, seg, defaults::kSegmentTol, anchor, id, trace);
    total += si.value;
    max_mag = std::max(max_mag, std::abs(si.value));
    anchor = si.end_phase;
    ++id;
  }
  if (max_segment_magnitude) *max_segment_magnitude = max_mag;
  return total;
}

ResidualEstimate gamma_r_residual(const LoopModel& model, std::span<const double> r_list) {
  require_unbounded_ok(model, "gamma_r_residual");
  if (r_list.empty()) throw std::invalid_argument("gamma_r_residual: empty radius ladder");
  std::vector<double> hs;
  std::vector<Complex> vals;
  for (double R : r_list) {
    const ArcSeg arc{{0.0, 0.0}, R, 0.5 * kPi, -0.5 * kPi};
    const SegmentIntegral si = integrate_segment(model, PathSegment{arc}, 1e-9 * (1.0 + R * 1e-3));
    hs.push_back(1.0 / R);
    vals.push_back(si.value);
  }
  ResidualEstimate out;
  const auto [lim, err] = extrapolate_to_zero(hs, vals);
  out.value = lim;
  out.error_estimate = err;
  out.converged = err <= 0.05 * (1.0 + std::abs(lim));
  return out;
}

Complex limit_point_semicircle(const LoopModel& model, Complex center, double eps) {
  const ArcSeg arc{center, eps, -0.5 * kPi, 0.5 * kPi};
  return integrate_segment(model, PathSegment{arc}, 1e-10).value;
}

}  // namespace bodefrac

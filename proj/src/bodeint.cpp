#include "bodefrac/bodeint.hpp"

#include <algorithm>
#include <cmath>

#include "bodefrac/quadrature.hpp"

namespace bodefrac {
namespace {

// Dominant controller term (gain, exponent) among k1 s^a, k0, km1 s^-b.
std::pair<double, double> dominant_controller_term(const FractionalPID& pid) {
  if (pid.k1 != 0.0) return {pid.k1, pid.alpha};
  if (pid.k0 != 0.0) return {pid.k0, 0.0};
  return {pid.km1, -pid.beta};
}

// Frequencies where the integrand has structure; used as forced panel breaks.
std::vector<double> feature_frequencies(const LoopModel& model) {
  std::vector<double> f{0.0};
  auto add = [&](Complex z) {
    f.push_back(std::abs(z));
    f.push_back(std::abs(z.imag()));
  };
  if (model.is_rational()) {
    const auto& rf = model.rational_loop();
    try {
      if (rf.plant.den.degree() >= 1)
        for (const auto& [r, m] : polynomial_roots(rf.plant.den)) add(r);
      if (!rf.plant.num.is_zero() && rf.plant.num.degree() >= 1)
        for (const auto& [r, m] : polynomial_roots(rf.plant.num)) add(r);
    } catch (const RootFindError&) {
      // fall back to coefficient scale only
    }
  } else {
    const auto& sens = model.synthetic_model();
    for (const PoleRecord& p : sens.factors) add(p.location);
    for (const Complex& z : sens.outer.zeros) add(z);
    for (const Complex& q : sens.outer.poles) add(q);
  }
  return f;
}

}  // namespace

double IntegralReport::reconciliation() const {
  double residual_term = 0.0;
  if (residual_gamma_r) residual_term = -2.0 * residual_gamma_r->imag();  // Re(2i*g)
  return numeric_value - (theoretical_value + residual_term);
}

double bode_integrand(const LoopModel& model, double omega) {
  return log_abs_sensitivity_sq(model, Complex{0.0, omega});
}

TailEstimate tail_estimate(const LoopModel& model, double omega0) {
  if (!model.is_rational())
    throw std::invalid_argument("tail_estimate: rational-fractal models only");
  const auto& rf = model.rational_loop();
  if (rf.plant.num.is_zero())
    throw std::invalid_argument("tail_estimate: open loop is identically zero");
  const auto [gain, expo] = dominant_controller_term(rf.pid);
  if (gain == 0.0) throw std::invalid_argument("tail_estimate: all controller gains zero");

  TailEstimate out;
  const int m = rf.plant.den_degree(), n = rf.plant.num_degree();
  out.q = m - n - expo;
  out.c = rf.plant.num.leading() * gain / rf.plant.den.leading();
  if (out.q <= 1.0)
    throw std::domain_error(
        "tail_estimate: q = m - n - controller order <= 1, degree condition violated; "
        "leading tail not integrable");

  const double q = out.q;
  const double base = std::pow(omega0, 1.0 - q) / (q - 1.0);
  // Integral of -2 Re[c (i w)^(-q)] over both half axes.
  out.correction = -4.0 * out.c.real() * std::cos(0.5 * kPi * q) * base;
  out.bound = 2.0 * std::abs(out.c) * base;
  return out;
}

double theoretical_value(std::span<const PoleRecord> poles) {
  double acc = 0.0;
  for (const PoleRecord& p : poles) acc += p.order * p.location.real();
  return 4.0 * kPi * acc;
}

IntegralReport bode_integral(const LoopModel& model, double rel_tol,
                             const IntegrandSampleSink& sink) {
  IntegralReport rep;

  bool divergent = false;
  if (model.is_rational()) {
    const auto& rf = model.rational_loop();
    rep.theoretical_value = theoretical_value(rhp_open_loop_poles(rf.plant).poles);
    if (!rf.plant.num.is_zero() && rf.plant.den_degree() <= rf.plant.num_degree()) {
      divergent = true;
      rep.note = "integrand does not decay: deg D <= deg N";
    }
    const auto [gain, expo] = dominant_controller_term(rf.pid);
    if (!divergent && !rf.plant.num.is_zero() && gain != 0.0) {
      const double q = rf.plant.den_degree() - rf.plant.num_degree() - expo;
      if (q < 1.0 - 1e-12) {
        divergent = true;
        rep.note = "tail exponent q = " + std::to_string(q) +
                   " < 1: Bode integral divergent (degree condition violated)";
      }
    }
  } else {
    if (model.synthetic_model().form == FactorForm::kRaw)
      throw std::invalid_argument(
          "bode_integral: raw-form synthetic models are bounded-domain only");
    std::vector<PoleRecord> recs = model.synthetic_model().factors;
    rep.theoretical_value = theoretical_value(recs);
  }

  std::vector<double> feats = feature_frequencies(model);
  double fmax = 0.0;
  for (double v : feats) fmax = std::max(fmax, v);
  const double omega0 = std::min(10.0 * (1.0 + fmax), defaults::kOmegaCap);
  rep.cutoff_omega = omega0;
  if (10.0 * (1.0 + fmax) > defaults::kOmegaCap) {
    rep.converged = false;
    rep.note = "feature frequencies exceed the cutoff cap of 1e9; core truncated";
  }

  // Breakpoints at +-features inside [-omega0, omega0].
  std::vector<double> cuts{-omega0, omega0};
  for (double v : feats) {
    for (double s : {v, -v})
      if (std::abs(s) < omega0 * (1.0 - 1e-12)) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());

  auto f = [&](double w) { return bode_integrand(model, w); };

  // Coarse sweep to set the absolute budget for the given relative target.
  double rough = 0.0;
  {
    QuadOptions probe;
    probe.abs_tol = 1e-2;
    probe.max_depth = 6;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      rough += std::abs(integrate_adaptive(f, cuts[i], cuts[i + 1], probe).value);
  }
  const double abs_tol = rel_tol * std::max(1.0, rough);

  long panel_base = 0;
  QuadOptions opt;
  opt.max_depth = 50;
  if (sink)
    opt.sample_sink = [&](double x, double v, long id) { sink(x, v, panel_base + id); };

  double core = 0.0, core_err = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    opt.abs_tol = abs_tol * (cuts[i + 1] - cuts[i]) / (2.0 * omega0);
    const QuadResult r = integrate_adaptive(f, cuts[i], cuts[i + 1], opt);
    core += r.value;
    core_err += r.abs_error;
    ok = ok && r.converged;
    panel_base += 1000000;
  }

  if (divergent) {
    // truncated core only, flagged as partial data
    rep.numeric_value = core;
    rep.estimated_abs_error = core_err;
    rep.converged = false;
    return rep;
  }

  // Symmetric improper tail folded by u = 1/omega; the pairing cancels the
  // conditionally convergent 1/omega part for complex-coefficient models.
  auto tail_f = [&](double u) {
    const double w = 1.0 / u;
    return (bode_integrand(model, w) + bode_integrand(model, -w)) / (u * u);
  };
  QuadOptions topt;
  topt.abs_tol = abs_tol * 0.5;
  topt.max_depth = 50;
  const QuadResult tail = integrate_adaptive(tail_f, 0.0, 1.0 / omega0, topt);

  rep.tail_correction = tail.value;
  rep.numeric_value = core + tail.value;
  rep.estimated_abs_error = core_err + tail.abs_error;
  rep.converged = ok && tail.converged && rep.note.empty();
  if (!rep.converged && rep.note.empty())
    rep.note = "quadrature did not reach the requested tolerance";
  return rep;
}

}  // namespace bodefrac

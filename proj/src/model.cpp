#include "bodefrac/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace bodefrac {
namespace {

std::string complex_str(Complex z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

struct ClearedParts {
  Complex d_sbeta;   // D(s) s^beta (D(s) alone when km1 = 0: the factor cancels)
  Complex num_k;     // N(s) (k1 s^(a+b) + k0 s^b + km1), reduced likewise
  double scale;      // magnitude scale for singularity tests
};

// Numerator/denominator of S in cleared form. Without integral action the
// common s^beta factor is removed so s = 0 is not a spurious 0/0.
ClearedParts cleared_parts(const RationalPlant& plant, const FractionalPID& pid, Complex s) {
  ClearedParts out;
  if (pid.km1 == 0.0) {
    const Complex sa = principal_power(s, pid.alpha);
    out.d_sbeta = plant.den.eval(s);
    out.num_k = plant.num.eval(s) * (pid.k1 * sa + pid.k0);
    out.scale = plant.den.magnitude_bound(s) +
                plant.num.magnitude_bound(s) *
                    (std::abs(pid.k1) * std::abs(sa) + std::abs(pid.k0)) +
                1e-300;
    return out;
  }
  if (s == 0.0) {
    out.d_sbeta = {0.0, 0.0};
    out.num_k = plant.num.eval(s) * pid.km1;
    out.scale = plant.num.magnitude_bound(s) * std::abs(pid.km1) + 1e-300;
    return out;
  }
  const Complex sb = principal_power(s, pid.beta);
  const Complex sab = principal_power(s, pid.alpha + pid.beta);
  const Complex n = plant.num.eval(s);
  out.d_sbeta = plant.den.eval(s) * sb;
  out.num_k = n * (pid.k1 * sab + pid.k0 * sb + pid.km1);
  out.scale = plant.den.magnitude_bound(s) * std::abs(sb) +
              plant.num.magnitude_bound(s) *
                  (std::abs(pid.k1) * std::abs(sab) + std::abs(pid.k0) * std::abs(sb) +
                   std::abs(pid.km1)) +
              1e-300;
  return out;
}

}  // namespace

RationalPlant::RationalPlant(Polynomial n, Polynomial d)
    : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero())
    throw std::invalid_argument("RationalPlant: denominator identically zero");
}

void FractionalPID::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("FractionalPID: derivative order must satisfy 0 < alpha < 2");
  if (!(beta > 0.0 && beta < 2.0))
    throw std::invalid_argument("FractionalPID: integral order must satisfy 0 < beta < 2");
}

bool RationalFractalLoop::degree_condition_holds() const {
  return plant.den_degree() > pid.alpha + plant.num_degree() + 1.0;
}

LoopModel LoopModel::rational(RationalPlant plant, FractionalPID pid) {
  pid.validate();
  return LoopModel{RationalFractalLoop{std::move(plant), pid}};
}

LoopModel LoopModel::synthetic(SyntheticSensitivity sens) {
  sens.outer.validate();
  for (const PoleRecord& f : sens.factors) {
    if (f.location.real() <= defaults::kAxisTolerance)
      throw std::invalid_argument("SyntheticSensitivity: factor not in the open right half plane");
    if (!(f.order > 0.0))
      throw std::invalid_argument("SyntheticSensitivity: factor order must be positive");
  }
  return LoopModel{std::move(sens)};
}

Complex controller_gain(const FractionalPID& pid, Complex s) {
  return pid.k1 * principal_power(s, pid.alpha) + pid.k0 +
         pid.km1 * principal_power(s, -pid.beta);
}

Complex eval_characteristic(const RationalPlant& plant, const FractionalPID& pid, Complex s) {
  if (s == 0.0) return plant.num.eval(s) * pid.km1;
  const Complex sb = principal_power(s, pid.beta);
  const Complex sab = principal_power(s, pid.alpha + pid.beta);
  return plant.den.eval(s) * sb +
         plant.num.eval(s) * (pid.k1 * sab + pid.k0 * sb + pid.km1);
}

Complex characteristic_derivative(const RationalPlant& plant, const FractionalPID& pid,
                                  Complex s) {
  const double a = pid.alpha, b = pid.beta;
  const Complex sb = principal_power(s, b);
  const Complex sbm1 = principal_power(s, b - 1.0);
  const Complex sab = principal_power(s, a + b);
  const Complex sabm1 = principal_power(s, a + b - 1.0);
  return plant.den.eval_derivative(s) * sb + b * plant.den.eval(s) * sbm1 +
         plant.num.eval_derivative(s) * (pid.k1 * sab + pid.k0 * sb + pid.km1) +
         plant.num.eval(s) * (pid.k1 * (a + b) * sabm1 + pid.k0 * b * sbm1);
}

Complex closed_loop_characteristic(const RationalPlant& plant, const FractionalPID& pid,
                                   Complex s) {
  const ClearedParts p = cleared_parts(plant, pid, s);
  return p.d_sbeta + p.num_k;
}

Complex closed_loop_characteristic_derivative(const RationalPlant& plant,
                                              const FractionalPID& pid, Complex s) {
  if (pid.km1 != 0.0) return characteristic_derivative(plant, pid, s);
  const double a = pid.alpha;
  const Complex sa = principal_power(s, a);
  const Complex sam1 = principal_power(s, a - 1.0);
  return plant.den.eval_derivative(s) +
         plant.num.eval_derivative(s) * (pid.k1 * sa + pid.k0) +
         plant.num.eval(s) * pid.k1 * a * sam1;
}

LeadingTerm characteristic_leading_term(const RationalPlant& plant, const FractionalPID& pid) {
  const double shift = pid.km1 == 0.0 ? 0.0 : pid.beta;
  std::vector<std::pair<Complex, double>> terms;
  terms.push_back({plant.den.leading(), plant.den.degree() + shift});
  if (!plant.num.is_zero()) {
    const Complex an = plant.num.leading();
    const int n = plant.num.degree();
    if (pid.k1 != 0.0) terms.push_back({an * pid.k1, n + pid.alpha + shift});
    if (pid.k0 != 0.0) terms.push_back({an * pid.k0, n + shift});
    if (pid.km1 != 0.0) terms.push_back({an * pid.km1, static_cast<double>(n)});
  }
  double top = -1.0;
  for (const auto& [c, e] : terms) top = std::max(top, e);
  Complex coeff{0.0, 0.0};
  for (const auto& [c, e] : terms)
    if (e > top - 1e-12) coeff += c;
  return {std::abs(coeff), top};
}

Complex eval_sensitivity(const LoopModel& model, Complex s) {
  if (!model.is_rational()) return eval_synthetic(model.synthetic_model(), s);
  const RationalFractalLoop& rf = model.rational_loop();
  const ClearedParts p = cleared_parts(rf.plant, rf.pid, s);
  const Complex chi = p.d_sbeta + p.num_k;
  if (std::abs(chi) <= defaults::kSingularityRelTol * p.scale) {
    throw SingularityError("eval_sensitivity: characteristic function vanishes near s = " +
                           complex_str(s) + " (closed-loop pole estimate)");
  }
  return p.d_sbeta / chi;
}

Complex eval_log_sensitivity(const LoopModel& model, Complex s,
                             std::optional<double> prev_phase) {
  Complex raw;
  if (model.is_rational()) {
    const RationalFractalLoop& rf = model.rational_loop();
    const ClearedParts p = cleared_parts(rf.plant, rf.pid, s);
    const Complex chi = p.d_sbeta + p.num_k;
    if (std::abs(chi) <= defaults::kSingularityRelTol * p.scale)
      throw SingularityError("eval_log_sensitivity: characteristic function vanishes near s = " +
                             complex_str(s));
    bool far = false;
    if (p.d_sbeta != 0.0) {
      const Complex w = p.num_k / p.d_sbeta;  // P K
      if (std::abs(w) <= 0.5) {
        raw = -clog1p(w);
        far = true;
      }
    }
    if (!far) {
      const Complex v = p.d_sbeta / chi;
      if (std::abs(v) * p.scale <= defaults::kSingularityRelTol * std::abs(chi) ||
          v == 0.0)
        throw BranchPointError("eval_log_sensitivity: sensitivity vanishes near s = " +
                               complex_str(s) + " (branch point of log S)");
      raw = std::log(v);
    }
  } else {
    const SyntheticSensitivity& sens = model.synthetic_model();
    for (const PoleRecord& f : sens.factors) {
      const double dist = std::abs(s - f.location);
      if (dist <= defaults::kSingularityRelTol * (1.0 + std::abs(f.location)))
        throw BranchPointError("eval_log_sensitivity: s = " + complex_str(s) +
                               " hits the zero of S at " + complex_str(f.location));
    }
    raw = log_synthetic_raw(sens, s);
  }
  if (!std::isfinite(raw.real()) || !std::isfinite(raw.imag()))
    throw BranchPointError("eval_log_sensitivity: log S not finite at s = " + complex_str(s));
  if (prev_phase) raw.imag(unwrap_phase(raw.imag(), *prev_phase));
  return raw;
}

double log_abs_sensitivity_sq(const LoopModel& model, Complex s) {
  if (!model.is_rational()) return log_abs_sq_synthetic(model.synthetic_model(), s);
  const RationalFractalLoop& rf = model.rational_loop();
  const ClearedParts p = cleared_parts(rf.plant, rf.pid, s);
  if (p.d_sbeta != 0.0) {
    const Complex w = p.num_k / p.d_sbeta;
    if (std::abs(w) <= 0.5) return -log1p_abs_sq(w);
  }
  const Complex chi = p.d_sbeta + p.num_k;
  const double nv = std::norm(p.d_sbeta), nc = std::norm(chi);
  if (nv == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(nv / nc);
}

}  // namespace bodefrac

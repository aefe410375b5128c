#include "bodefrac/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace bodefrac {
namespace {

// ln(|s-a|^2 / |s-b|^2) via log1p on the exact norm difference; no
// cancellation when both distances are large and nearly equal.
double log_norm_ratio(Complex s, Complex a, Complex b) {
  const double nb = std::norm(s - b);
  const double diff = 2.0 * (s.real() * (b - a).real() + s.imag() * (b - a).imag()) +
                      (std::norm(a) - std::norm(b));
  if (nb == 0.0) return std::log(std::norm(s - a) / nb);
  const double r = diff / nb;
  if (r > -0.5) return std::log1p(r);
  return std::log(std::norm(s - a) / nb);
}

}  // namespace

void OuterSpec::validate() const {
  for (const Complex& z : zeros)
    if (z.real() >= 0.0)
      throw std::invalid_argument("OuterSpec: zero not strictly in the left half plane");
  for (const Complex& q : poles)
    if (q.real() >= 0.0)
      throw std::invalid_argument("OuterSpec: pole not strictly in the left half plane");
  if (zeros.size() > poles.size())
    throw std::invalid_argument("OuterSpec: more zeros than poles makes S(inf) infinite");
  if (gain == 0.0) throw std::invalid_argument("OuterSpec: zero gain");
}

Complex eval_synthetic(const SyntheticSensitivity& sens, Complex s) {
  Complex acc = sens.outer.gain;
  for (const Complex& z : sens.outer.zeros) acc *= (s - z);
  for (const Complex& q : sens.outer.poles) acc /= (s - q);
  for (const PoleRecord& f : sens.factors) {
    acc *= principal_power(s - f.location, f.order);
    if (sens.form == FactorForm::kBlaschke)
      acc /= principal_power(s + std::conj(f.location), f.order);
  }
  return acc;
}

Complex log_synthetic_raw(const SyntheticSensitivity& sens, Complex s) {
  Complex acc = std::log(sens.outer.gain);
  const std::size_t paired = std::min(sens.outer.zeros.size(), sens.outer.poles.size());
  for (std::size_t k = 0; k < paired; ++k) {
    const Complex z = sens.outer.zeros[k], q = sens.outer.poles[k];
    if (std::abs(s) > 8.0 * (1.0 + std::abs(z) + std::abs(q)))
      acc += clog1p((q - z) / (s - q));
    else
      acc += std::log(s - z) - std::log(s - q);
  }
  for (std::size_t k = paired; k < sens.outer.poles.size(); ++k)
    acc -= std::log(s - sens.outer.poles[k]);

  for (const PoleRecord& f : sens.factors) {
    const Complex p = f.location;
    if (sens.form == FactorForm::kRaw) {
      acc += f.order * std::log(s - p);
      continue;
    }
    const Complex pc = std::conj(p);
    if (std::abs(s) > 8.0 * (1.0 + std::abs(p)))
      acc += f.order * clog1p(-2.0 * p.real() / (s + pc));
    else
      acc += f.order * (std::log(s - p) - std::log(s + pc));
  }
  return acc;
}

double log_abs_sq_synthetic(const SyntheticSensitivity& sens, Complex s) {
  double acc = std::log(std::norm(sens.outer.gain));
  const std::size_t paired = std::min(sens.outer.zeros.size(), sens.outer.poles.size());
  for (std::size_t k = 0; k < paired; ++k)
    acc += log_norm_ratio(s, sens.outer.zeros[k], sens.outer.poles[k]);
  for (std::size_t k = paired; k < sens.outer.poles.size(); ++k)
    acc -= std::log(std::norm(s - sens.outer.poles[k]));

  for (const PoleRecord& f : sens.factors) {
    if (sens.form == FactorForm::kRaw)
      acc += f.order * std::log(std::norm(s - f.location));
    else
      acc += f.order * log_norm_ratio(s, f.location, -std::conj(f.location));
  }
  return acc;
}

}  // namespace bodefrac

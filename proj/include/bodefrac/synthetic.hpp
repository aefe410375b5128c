#pragma once

#include <vector>

#include "bodefrac/complexmath.hpp"

namespace bodefrac {

// An open right-half-plane zero of the sensitivity with (possibly
// non-integer) order.
struct PoleRecord {
  Complex location;
  double order = 1.0;
};

// Zero-free-in-RHP outer part: rational with all listed zeros and poles
// strictly in the left half plane. S(inf) stays finite, which requires
// no more zeros than poles.
struct OuterSpec {
  std::vector<Complex> zeros;
  std::vector<Complex> poles;
  Complex gain{1.0, 0.0};

  void validate() const;  // throws std::invalid_argument on violation
};

enum class FactorForm {
  // (s - p)^d / (s + conj(p))^d per factor. Unit modulus on the axis; the
  // principal-power cuts are the horizontal left rays from p (the corridor
  // geometry) and from -conj(p) (deep in the left half plane).
  kBlaschke,
  // (s - p)^d literally. Diverges at infinity; bounded-domain use only.
  kRaw,
};

struct SyntheticSensitivity {
  std::vector<PoleRecord> factors;
  FactorForm form = FactorForm::kBlaschke;
  OuterSpec outer;
};

// Product evaluation of the synthetic model at s.
Complex eval_synthetic(const SyntheticSensitivity& sens, Complex s);

// A representative log S(s): exp of the result reproduces eval_synthetic.
// Accumulated as a sum of principal factor logs, with far-field pairing to
// avoid cancellation. The imaginary part is raw (caller unwraps).
Complex log_synthetic_raw(const SyntheticSensitivity& sens, Complex s);

// ln|S(s)|^2 evaluated without forming the product; exact 0 for the
// Blaschke factors on the imaginary axis.
double log_abs_sq_synthetic(const SyntheticSensitivity& sens, Complex s);

}  // namespace bodefrac

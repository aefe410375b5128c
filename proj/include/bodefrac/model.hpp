#pragma once

#include <optional>
#include <stdexcept>
#include <variant>

#include "bodefrac/polynomial.hpp"
#include "bodefrac/synthetic.hpp"

namespace bodefrac {

namespace defaults {
inline constexpr double kSingularityRelTol = 1e-12;
inline constexpr double kAxisTolerance = 1e-9;
}  // namespace defaults

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BranchPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plant P(s) = N(s)/D(s).
struct RationalPlant {
  Polynomial num;
  Polynomial den;

  RationalPlant(Polynomial n, Polynomial d);
  int num_degree() const { return num.is_zero() ? 0 : num.degree(); }
  int den_degree() const { return den.degree(); }
};

// K(s) = k1 s^alpha + km1 / s^beta + k0, with fractional orders in (0, 2).
struct FractionalPID {
  double k1 = 0.0;   // derivative gain
  double k0 = 0.0;   // proportional gain
  double km1 = 0.0;  // integral gain
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;  // throws std::invalid_argument naming the bound
};

struct RationalFractalLoop {
  RationalPlant plant;
  FractionalPID pid;

  // m > alpha + n + 1, the decay condition of the arc bound.
  bool degree_condition_holds() const;
};

// A closed-loop sensitivity source.
struct LoopModel {
  std::variant<RationalFractalLoop, SyntheticSensitivity> v;

  static LoopModel rational(RationalPlant plant, FractionalPID pid);
  static LoopModel synthetic(SyntheticSensitivity sens);

  bool is_rational() const { return std::holds_alternative<RationalFractalLoop>(v); }
  const RationalFractalLoop& rational_loop() const { return std::get<RationalFractalLoop>(v); }
  const SyntheticSensitivity& synthetic_model() const { return std::get<SyntheticSensitivity>(v); }
};

// K(s) on the principal branch.
Complex controller_gain(const FractionalPID& pid, Complex s);

// chi(s) = D(s) s^beta + N(s) (k1 s^(alpha+beta) + k0 s^beta + km1),
// the numerator of 1 + P K after clearing D(s) s^beta.
Complex eval_characteristic(const RationalPlant& plant, const FractionalPID& pid, Complex s);

// d(chi)/ds on the principal branch.
Complex characteristic_derivative(const RationalPlant& plant, const FractionalPID& pid, Complex s);

// chi with the common s^beta factor cleared when there is no integral
// action (km1 = 0), so its zeros are exactly the closed-loop poles; equal to
// chi otherwise. This is the function the argument-principle operations act
// on.
Complex closed_loop_characteristic(const RationalPlant& plant, const FractionalPID& pid,
                                   Complex s);
Complex closed_loop_characteristic_derivative(const RationalPlant& plant,
                                              const FractionalPID& pid, Complex s);

// Dominant large-|s| term of the closed-loop characteristic.
struct LeadingTerm {
  double coeff;
  double exponent;
};
LeadingTerm characteristic_leading_term(const RationalPlant& plant, const FractionalPID& pid);

// S(s): cleared form D s^beta / chi for rational-fractal loops, product
// evaluation for synthetic ones. Throws SingularityError when chi vanishes
// within tolerance at s.
Complex eval_sensitivity(const LoopModel& model, Complex s);

// ln|S| + i phi; phi is the principal argument when prev_phase is absent,
// otherwise unwrapped to lie within pi of prev_phase. Uses log1p-style
// evaluation in the far field where |1 - S| is tiny. Throws
// BranchPointError when S vanishes within tolerance at s.
Complex eval_log_sensitivity(const LoopModel& model, Complex s,
                             std::optional<double> prev_phase = {});

// ln|S(s)|^2 with the same far-field care; -infinity where S = 0.
double log_abs_sensitivity_sq(const LoopModel& model, Complex s);

}  // namespace bodefrac

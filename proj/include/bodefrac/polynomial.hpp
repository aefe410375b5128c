#pragma once

#include <span>
#include <vector>

#include "bodefrac/complexmath.hpp"

namespace bodefrac {

// Complex-coefficient polynomial stored ascending: coeffs[l] multiplies s^l.
// Exact trailing zero coefficients are trimmed so the leading coefficient of a
// nonzero polynomial is nonzero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);
  Polynomial(std::initializer_list<Complex> coeffs);

  static Polynomial from_roots(std::span<const Complex> roots,
                               Complex leading = {1.0, 0.0});
  // Real coefficient list, ascending degree; avoids the {re, im} brace trap.
  static Polynomial from_real(std::initializer_list<double> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;  // throws for the zero polynomial
  Complex leading() const;
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int l) const;

  Complex eval(Complex s) const;            // Horner
  Complex eval_derivative(Complex s) const;
  Polynomial derivative() const;

  // Sum_l |a_l| |s|^l, the natural residual scale at s.
  double magnitude_bound(Complex s) const;

  bool has_real_coeffs(double tol = 0.0) const;

  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator*(Complex scale) const;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

}  // namespace bodefrac

#include "bodefrac/polynomial.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace bodefrac {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

Polynomial::Polynomial(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, Complex leading) {
  std::vector<Complex> c{leading};
  for (const Complex& r : roots) {
    c.push_back({0.0, 0.0});
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_real(std::initializer_list<double> coeffs) {
  std::vector<Complex> c;
  c.reserve(coeffs.size());
  for (double v : coeffs) c.push_back({v, 0.0});
  return Polynomial(std::move(c));
}

int Polynomial::degree() const {
  if (coeffs_.empty()) throw std::domain_error("degree of the zero polynomial");
  return static_cast<int>(coeffs_.size()) - 1;
}

Complex Polynomial::leading() const {
  if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
  return coeffs_.back();
}

Complex Polynomial::coeff(int l) const {
  if (l < 0 || static_cast<std::size_t>(l) >= coeffs_.size()) return {0.0, 0.0};
  return coeffs_[static_cast<std::size_t>(l)];
}

Complex Polynomial::eval(Complex s) const {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Polynomial::eval_derivative(Complex s) const {
  Complex acc{0.0, 0.0};
  for (std::size_t k = coeffs_.size(); k-- > 1;)
    acc = acc * s + static_cast<double>(k) * coeffs_[k];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

double Polynomial::magnitude_bound(Complex s) const {
  const double r = std::abs(s);
  double acc = 0.0, pw = 1.0;
  for (const Complex& a : coeffs_) {
    acc += std::abs(a) * pw;
    pw *= r;
  }
  return acc;
}

bool Polynomial::has_real_coeffs(double tol) const {
  for (const Complex& a : coeffs_)
    if (std::abs(a.imag()) > tol) return false;
  return true;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial{};
  std::vector<Complex> c(coeffs_.size() + rhs.coeffs_.size() - 1, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
      c[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<Complex> c(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] += rhs.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(Complex scale) const {
  std::vector<Complex> c = coeffs_;
  for (Complex& a : c) a *= scale;
  return Polynomial(std::move(c));
}

}  // namespace bodefrac

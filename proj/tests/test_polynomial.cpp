#include "bodefrac/polynomial.hpp"
#include "doctest.h"

using namespace bodefrac;

TEST_CASE("evaluation and derivative") {
  // 1 + 2s + 3s^2
  const Polynomial p = Polynomial::from_real({1, 2, 3});
  CHECK(p.degree() == 2);
  CHECK(p.eval({2, 0}).real() == doctest::Approx(17.0));
  CHECK(p.eval_derivative({2, 0}).real() == doctest::Approx(14.0));
  const Polynomial d = p.derivative();
  CHECK(d.degree() == 1);
  CHECK(d.eval({2, 0}).real() == doctest::Approx(14.0));
}

TEST_CASE("from_roots expands products") {
  const std::vector<Complex> roots{{1, 0}, {-2, 0}};
  const Polynomial p = Polynomial::from_roots(roots);
  // (s-1)(s+2) = s^2 + s - 2
  CHECK(p.coeff(0).real() == doctest::Approx(-2.0));
  CHECK(p.coeff(1).real() == doctest::Approx(1.0));
  CHECK(p.coeff(2).real() == doctest::Approx(1.0));
  for (const Complex& r : roots) CHECK(std::abs(p.eval(r)) < 1e-14);
}

TEST_CASE("trim removes exact leading zeros") {
  const Polynomial p({{1, 0}, {2, 0}, {0, 0}, {0, 0}});
  CHECK(p.degree() == 1);
  const Polynomial z({{0, 0}, {0, 0}});
  CHECK(z.is_zero());
  CHECK_THROWS_AS(z.degree(), std::domain_error);
}

TEST_CASE("product and sum") {
  const Polynomial a = Polynomial::from_real({-1, 1});  // s - 1
  const Polynomial b = Polynomial::from_real({2, 1});   // s + 2
  const Polynomial ab = a * b;
  CHECK(ab.coeff(0).real() == doctest::Approx(-2.0));
  CHECK(ab.coeff(1).real() == doctest::Approx(1.0));
  CHECK(ab.coeff(2).real() == doctest::Approx(1.0));
  const Polynomial s = a + b;
  CHECK(s.coeff(0).real() == doctest::Approx(1.0));
  CHECK(s.coeff(1).real() == doctest::Approx(2.0));
}

TEST_CASE("magnitude bound and real-coefficient check") {
  const Polynomial p = Polynomial::from_real({1, -2, 3});
  CHECK(p.magnitude_bound({2, 0}) == doctest::Approx(1 + 4 + 12));
  CHECK(p.has_real_coeffs());
  const Polynomial q({{1, 0}, {0, 1}});
  CHECK_FALSE(q.has_real_coeffs());
}

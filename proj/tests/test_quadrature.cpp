#include <cmath>

#include "bodefrac/quadrature.hpp"
#include "doctest.h"

using namespace bodefrac;

TEST_CASE("smooth integrand") {
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  const QuadResult r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, opt);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("logarithmic endpoint singularity") {
  QuadOptions opt;
  opt.abs_tol = 1e-11;
  // int_0^1 ln x dx = -1; nodes never touch the endpoint.
  const QuadResult r = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, opt);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("algebraic endpoint singularity") {
  QuadOptions opt;
  opt.abs_tol = 1e-10;
  // int_0^1 x^(-1/2) dx = 2
  const QuadResult r =
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("divergent integrand is flagged") {
  QuadOptions opt;
  opt.abs_tol = 1e-8;
  opt.max_depth = 40;
  const QuadResult r = integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, opt);
  CHECK_FALSE(r.converged);
}

TEST_CASE("linear_fit recovers slope and intercept") {
  const double xs[] = {1.0, 2.0, 3.0, 4.0};
  const double ys[] = {2.5, 4.5, 6.5, 8.5};
  const auto [slope, intercept] = linear_fit(xs, ys);
  CHECK(slope == doctest::Approx(2.0));
  CHECK(intercept == doctest::Approx(0.5));
}

TEST_CASE("extrapolate_to_zero on a power-law tail") {
  const double hs[] = {1e-1, 1e-2, 1e-3};
  const Complex target{3.0, -1.0};
  std::vector<Complex> vs;
  for (double h : hs) vs.push_back(target + Complex{2.0, 0.5} * std::pow(h, 1.3));
  const auto [lim, err] = extrapolate_to_zero(hs, vs);
  CHECK(std::abs(lim - target) < 1e-4);
}

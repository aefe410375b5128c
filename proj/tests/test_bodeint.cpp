#include <random>

#include "bodefrac/bodeint.hpp"
#include "bodefrac/quadrature.hpp"
#include "bodefrac/weier.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bodefrac;

namespace {

LoopModel classical_loop() {
  // L = 3/(s-1): S = (s-1)/(s+2).
  return LoopModel::rational(
      RationalPlant{Polynomial::from_real({3}), Polynomial::from_real({-1, 1})},
      FractionalPID{0, 1, 0, 1, 1});
}

// A loop realizing an arbitrary monic stable/minimum-phase quotient
// S = num/den exactly: plant num = den - num, plant den = num, k0 = 1.
LoopModel quotient_loop(const Polynomial& s_num, const Polynomial& s_den) {
  return LoopModel::rational(RationalPlant{s_den + s_num * Complex{-1.0, 0.0}, s_num},
                             FractionalPID{0, 1, 0, 1, 1});
}

}  // namespace

TEST_CASE("bode integrand hand values") {
  SyntheticSensitivity sens;
  sens.factors = {{{0.7, 1.3}, 1.0}, {{2.0, -0.4}, 2.0}};
  const LoopModel allpass = LoopModel::synthetic(sens);
  for (double w : {-5.0, -1.3, 0.0, 0.9, 14.0})
    CHECK(bode_integrand(allpass, w) == doctest::Approx(0.0).epsilon(1e-14));

  const LoopModel m = classical_loop();
  CHECK(bode_integrand(m, 0.0) == doctest::Approx(std::log(0.25)));
  CHECK(bode_integrand(m, 10.0) == doctest::Approx(std::log(101.0 / 104.0)).epsilon(1e-12));
}

TEST_CASE("classical Bode integral against the closed form and a Simpson oracle") {
  const LoopModel m = classical_loop();
  const IntegralReport rep = bode_integral(m, 1e-8);
  CHECK(rep.converged);
  CHECK(rep.numeric_value == doctest::Approx(-kTwoPi).epsilon(1e-6));
  CHECK(rep.theoretical_value == doctest::Approx(4 * kPi).epsilon(1e-12));

  const double simpson =
      oracle::simpson_full_line([&](double w) { return bode_integrand(m, w); });
  CHECK(rep.numeric_value == doctest::Approx(simpson).epsilon(1e-6));
}

TEST_CASE("all-pole stable loop integrates to zero") {
  // L = 1/(s+1)^2: S zeros {-1,-1}, S poles at -1 +- i; 2 pi (2 - 2) = 0.
  const LoopModel m = LoopModel::rational(
      RationalPlant{Polynomial::from_real({1}), Polynomial::from_real({1, 2, 1})},
      FractionalPID{0, 1, 0, 1, 1});
  const IntegralReport rep = bode_integral(m, 1e-8);
  CHECK(rep.converged);
  CHECK(rep.numeric_value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("blaschke-only synthetic integrates to zero") {
  const std::vector<PoleRecord> seq = generate_sequence(PoleSequenceFamily::a(), 50);
  const LoopModel m =
      LoopModel::synthetic(build_synthetic(seq, OuterSpec{{}, {}, {1.0, 0.0}}));
  const IntegralReport rep = bode_integral(m, 1e-8);
  CHECK(std::abs(rep.numeric_value) < 1e-8);
}

TEST_CASE("tail estimate closed forms") {
  // q = 1.5, |c| = 1, omega0 = 100: bound = 2 * 100^(-0.5) / 0.5 = 0.4.
  const LoopModel m = LoopModel::rational(
      RationalPlant{Polynomial::from_real({1}), Polynomial::from_real({0, 0, 1})},
      FractionalPID{1, 0, 0, 0.5, 1});
  const TailEstimate t = tail_estimate(m, 100.0);
  CHECK(t.q == doctest::Approx(1.5));
  CHECK(t.bound == doctest::Approx(0.4));
  const TailEstimate t2 = tail_estimate(m, 200.0);
  CHECK(t2.bound / t.bound == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));

  CHECK_THROWS_AS(tail_estimate(classical_loop(), 100.0), std::domain_error);  // q = 1
}

TEST_CASE("theoretical value accumulates 4 pi d Re p") {
  CHECK(theoretical_value({}) == 0.0);
  const PoleRecord one{{1, 0}, 1};
  const std::vector<PoleRecord> a{one};
  CHECK(theoretical_value(a) == doctest::Approx(4 * kPi));
  const std::vector<PoleRecord> b{{{1, 0}, 2}, {{2, 3}, 1}};
  CHECK(theoretical_value(b) == doctest::Approx(16 * kPi));
}

TEST_CASE("quadrature oracle identity on random stable minimum-phase quotients") {
  std::mt19937 rng(20240813);
  std::uniform_real_distribution<double> re(0.2, 3.0), im(-3.0, 3.0);
  std::uniform_int_distribution<int> deg(1, 4);
  for (int it = 0; it < 20; ++it) {
    const int n = deg(rng);
    std::vector<Complex> zs, qs;
    bool conj_pair = it % 2 == 0;  // half the corpus conjugate-symmetric
    for (int k = 0; k < n; ++k) {
      if (conj_pair && k + 1 < n && k % 2 == 0) {
        const Complex z{re(rng), im(rng)}, q{re(rng), im(rng)};
        zs.push_back(z);
        zs.push_back(std::conj(z));
        qs.push_back(q);
        qs.push_back(std::conj(q));
        ++k;
      } else {
        zs.push_back({re(rng), conj_pair ? 0.0 : im(rng)});
        qs.push_back({re(rng), conj_pair ? 0.0 : im(rng)});
      }
    }
    std::vector<Complex> neg_z, neg_q;
    for (const Complex& z : zs) neg_z.push_back(-z);
    for (const Complex& q : qs) neg_q.push_back(-q);
    const LoopModel m =
        quotient_loop(Polynomial::from_roots(neg_z), Polynomial::from_roots(neg_q));

    const double expect = oracle::quotient_integral(zs, qs);
    const IntegralReport rep = bode_integral(m, 1e-8);
    CHECK(rep.converged);
    CHECK(rep.numeric_value ==
          doctest::Approx(expect).epsilon(1e-6).scale(std::max(1.0, std::abs(expect))));
  }
}

TEST_CASE("frequency scaling multiplies the integral") {
  std::vector<PoleRecord> seq{{{0.8, 1.1}, 1.0}, {{0.3, -2.0}, 1.0}};
  OuterSpec outer{{Complex{-2.5, 0.4}}, {Complex{-1.0, -0.3}}, {1.0, 0.0}};
  const LoopModel m = LoopModel::synthetic(build_synthetic(seq, outer));
  const double base = bode_integral(m, 1e-9).numeric_value;

  const double lambda = 3.7;
  std::vector<PoleRecord> seq2 = seq;
  for (PoleRecord& p : seq2) p.location *= lambda;
  OuterSpec outer2 = outer;
  for (Complex& z : outer2.zeros) z *= lambda;
  for (Complex& q : outer2.poles) q *= lambda;
  const LoopModel ms = LoopModel::synthetic(build_synthetic(seq2, outer2));
  CHECK(bode_integral(ms, 1e-9).numeric_value ==
        doctest::Approx(lambda * base).epsilon(1e-6));
}

TEST_CASE("conjugate-symmetric integrand doubles its half-line integral") {
  const LoopModel m = classical_loop();
  const IntegralReport rep = bode_integral(m, 1e-9);
  QuadOptions opt;
  opt.abs_tol = 1e-10;
  const QuadResult half =
      integrate_adaptive([&](double w) { return bode_integrand(m, w); }, 0.0, rep.cutoff_omega,
                         opt);
  const QuadResult tail = integrate_adaptive(
      [&](double u) { return bode_integrand(m, 1.0 / u) / (u * u); }, 0.0,
      1.0 / rep.cutoff_omega, opt);
  CHECK(rep.numeric_value ==
        doctest::Approx(2.0 * (half.value + tail.value)).epsilon(1e-7));
}

TEST_CASE("divergent configurations are flagged, not silently truncated") {
  // deg D <= deg N: integrand does not decay.
  const LoopModel m = LoopModel::rational(
      RationalPlant{Polynomial::from_real({1, 1}), Polynomial::from_real({2, 1})},
      FractionalPID{0, 1, 0, 1, 1});
  const IntegralReport rep = bode_integral(m);
  CHECK_FALSE(rep.converged);
  CHECK_FALSE(rep.note.empty());
  CHECK(std::isfinite(rep.numeric_value));  // truncated-core partial data

  // q < 1: derivative branch dominates too strongly.
  const LoopModel m2 = LoopModel::rational(
      RationalPlant{Polynomial::from_real({1}), Polynomial::from_real({2, 3, 1})},
      FractionalPID{1, 0, 0, 1.5, 1});
  const IntegralReport rep2 = bode_integral(m2);
  CHECK_FALSE(rep2.converged);
  CHECK(std::isfinite(rep2.numeric_value));
}

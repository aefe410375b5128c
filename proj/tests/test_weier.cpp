#include <random>

#include "bodefrac/contour.hpp"
#include "bodefrac/weier.hpp"
#include "doctest.h"

using namespace bodefrac;

TEST_CASE("family generators produce the documented sequences") {
  const PoleSequenceFamily a = PoleSequenceFamily::a();
  CHECK(std::abs(a.pole(1) - Complex{1.0, 1.0}) < 1e-15);
  CHECK(std::abs(a.pole(2) - Complex{0.25, 2.0}) < 1e-15);
  CHECK(std::abs(a.pole(3) - Complex{1.0 / 9.0, 3.0}) < 1e-15);

  const PoleSequenceFamily b = PoleSequenceFamily::b();
  double partial = 0.0;
  for (int j = 1; j <= 50; ++j) partial += b.pole(j).real();
  double h50 = 0.0;
  for (int j = 1; j <= 50; ++j) h50 += 1.0 / (static_cast<double>(j) * j);
  CHECK(partial == doctest::Approx(h50).epsilon(1e-14));
  CHECK(h50 < kPi * kPi / 6.0);
  CHECK(h50 == doctest::Approx(kPi * kPi / 6.0).epsilon(0.02));

  const PoleSequenceFamily c = PoleSequenceFamily::c();
  for (int j = 1; j <= 10; ++j) CHECK(c.pole(j).real() == 0.5);
}

TEST_CASE("generated sequences are sorted by modulus") {
  for (const PoleSequenceFamily& fam :
       {PoleSequenceFamily::a(), PoleSequenceFamily::b(), PoleSequenceFamily::c()}) {
    const std::vector<PoleRecord> seq = generate_sequence(fam, 25);
    REQUIRE(seq.size() == 25);
    for (std::size_t i = 1; i < seq.size(); ++i)
      CHECK(std::abs(seq[i].location) >= std::abs(seq[i - 1].location) - 1e-15);
  }
  CHECK_THROWS_AS(generate_sequence(PoleSequenceFamily::a(), 0), std::invalid_argument);
}

TEST_CASE("synthetic construction places zeros and keeps the axis all-pass") {
  const std::vector<PoleRecord> seq = generate_sequence(PoleSequenceFamily::a(), 20);
  const SyntheticSensitivity sens = build_synthetic(seq, OuterSpec{{}, {}, {1.0, 0.0}});
  const LoopModel m = LoopModel::synthetic(sens);

  // |S(p_j)| = 0 at every listed factor.
  for (const PoleRecord& p : seq) CHECK(std::abs(eval_synthetic(sens, p.location)) < 1e-12);

  // all-pass modulus on 1000 random axis points
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> omega(-50.0, 50.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double w = omega(rng);
    worst = std::max(worst, std::abs(std::abs(eval_sensitivity(m, {0.0, w})) - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("raw factor form matches the blaschke zero set on bounded domains") {
  const std::vector<PoleRecord> seq{{{1.0, 0.5}, 1.0}, {{0.4, -0.8}, 2.0}};
  const SyntheticSensitivity raw = build_synthetic(seq, OuterSpec{{}, {}, {1.0, 0.0}},
                                                   FactorForm::kRaw);
  for (const PoleRecord& p : seq) CHECK(std::abs(eval_synthetic(raw, p.location)) < 1e-12);
  // raw form is rejected on unbounded-domain operations
  const LoopModel m = LoopModel::synthetic(raw);
  CHECK_THROWS_AS(bode_integral(m), std::invalid_argument);
  const double rl[] = {10.0, 20.0, 40.0};
  CHECK_THROWS_AS(gamma_r_residual(m, rl), std::invalid_argument);
}

TEST_CASE("outer factor alone integrates to 2 pi (a - b)") {
  OuterSpec outer{{Complex{-3.0, 0.0}}, {Complex{-1.0, 0.0}}, {1.0, 0.0}};
  const LoopModel m = LoopModel::synthetic(build_synthetic({}, outer));
  const IntegralReport rep = bode_integral(m, 1e-9);
  CHECK(rep.numeric_value == doctest::Approx(kTwoPi * 2.0).epsilon(1e-7));
}

TEST_CASE("matched outer realizes the composite identity") {
  {
    const std::vector<PoleRecord> seq{{{1.0, 0.0}, 1.0}};
    const OuterSpec outer = matched_outer_for_theorem2(seq);
    REQUIRE(outer.zeros.size() == 1);
    CHECK(outer.zeros[0].real() == doctest::Approx(-3.0));
    CHECK(outer.poles[0].real() == doctest::Approx(-1.0));
    const LoopModel m = LoopModel::synthetic(build_synthetic(seq, outer));
    CHECK(bode_integral(m, 1e-9).numeric_value == doctest::Approx(4 * kPi).epsilon(1e-7));
  }
  {
    const OuterSpec outer = matched_outer_for_theorem2({});
    CHECK(outer.zeros[0].real() == doctest::Approx(-1.0));
    const LoopModel m = LoopModel::synthetic(build_synthetic({}, outer));
    CHECK(std::abs(bode_integral(m, 1e-9).numeric_value) < 1e-9);
  }
}

TEST_CASE("composite integral additivity: all-pass factors contribute nothing") {
  const std::vector<PoleRecord> seq = generate_sequence(PoleSequenceFamily::a(), 30);
  OuterSpec outer{{Complex{-2.0, 0.7}}, {Complex{-0.5, -0.2}}, {1.0, 0.0}};
  const double with_factors =
      bode_integral(LoopModel::synthetic(build_synthetic(seq, outer)), 1e-9).numeric_value;
  const double outer_only =
      bode_integral(LoopModel::synthetic(build_synthetic({}, outer)), 1e-9).numeric_value;
  CHECK(with_factors == doctest::Approx(outer_only).epsilon(1e-9));
}

TEST_CASE("theorem harness for family A") {
  const int ns[] = {10, 25, 50};
  const TheoremReport rep = verify_theorem_no_limit(PoleSequenceFamily::a(), ns, 0.005);
  CHECK(rep.pass);
  CHECK(rep.max_rel_err < 0.005);
  CHECK(rep.partial_sums_monotone);
  // partial sums approach pi^2/6 from below
  CHECK(rep.rows.back().theoretical / (4 * kPi) < kPi * kPi / 6.0);
  CHECK(rep.rows.back().theoretical / (4 * kPi) ==
        doctest::Approx(kPi * kPi / 6.0).epsilon(0.02));
  CHECK_THROWS_AS(verify_theorem_no_limit(PoleSequenceFamily::b(), ns, 0.005),
                  std::invalid_argument);
}

TEST_CASE("theorem harness for family B with the limit-point semicircle") {
  const int ns[] = {10, 25, 50};
  const double eps[] = {1e-2, 1e-3, 1e-4};
  const TheoremReport rep = verify_theorem_limit(PoleSequenceFamily::b(), ns, 0.005, eps);
  CHECK(rep.pass);
  REQUIRE(rep.semicircle_mags.size() == 3);
  CHECK(rep.semicircle_decreasing);
}

TEST_CASE("family B quadrature stays accurate despite factor accumulation near i") {
  const std::vector<PoleRecord> seq = generate_sequence(PoleSequenceFamily::b(), 50);
  const LoopModel m =
      LoopModel::synthetic(build_synthetic(seq, matched_outer_for_theorem2(seq)));
  const IntegralReport rep = bode_integral(m, 1e-8);
  CHECK(rep.converged);
  CHECK(rep.estimated_abs_error < 1e-6 * std::abs(rep.numeric_value) + 1e-8);
}

TEST_CASE("divergence demonstration for family C and the family B contrast") {
  const int ns[] = {10, 20, 40};
  const DivergenceReport rep = demonstrate_divergence(PoleSequenceFamily::c(), ns);
  CHECK(rep.diverges);
  CHECK(rep.doubling_linear);
  for (const DivergenceRow& r : rep.rows) CHECK(r.corridor_sum > r.bound);
  CHECK(rep.rows[0].bound == doctest::Approx(kTwoPi * 0.4 * 10));

  // Family B under the same per-corridor measurement: terms shrink to zero
  // (Re p_j = 1/j^2), so the partial sums stay bounded.
  const std::vector<PoleRecord> seq = generate_sequence(PoleSequenceFamily::b(), 24);
  const LoopModel mb = LoopModel::synthetic(build_synthetic(seq, OuterSpec{{}, {}, {1.0, 0.0}}));
  double early = 0.0, late = 0.0;
  for (const PoleRecord& p : seq) {
    double gap = 1.0;
    for (const PoleRecord& q : seq)
      if (&q != &p) gap = std::min(gap, std::abs(p.location.imag() - q.location.imag()));
    const double widths[] = {std::min(1e-4, 0.2 * gap)};
    const double mag = verify_corridor_pair(mb, p, widths).magnitudes[0];
    (p.location.real() > 1.0 / 144.0 ? early : late) += mag;  // j <= 12 vs j > 12
  }
  CHECK(late < 0.25 * early);  // tail terms are already tiny
  CHECK_THROWS_AS(demonstrate_divergence(PoleSequenceFamily::a(), ns), std::invalid_argument);
}

TEST_CASE("truncation monotonicity of the theoretical value") {
  for (const PoleSequenceFamily& fam : {PoleSequenceFamily::a(), PoleSequenceFamily::b()}) {
    double prev = 0.0;
    for (int n : {5, 10, 20, 40}) {
      const double v = theoretical_value(generate_sequence(fam, n));
      CHECK(v >= prev);
      prev = v;
    }
  }
}

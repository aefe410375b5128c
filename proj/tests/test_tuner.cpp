#include <cstdlib>
#include <random>

#include "bodefrac/tuner.hpp"
#include "doctest.h"

using namespace bodefrac;

namespace {

RationalPlant three_pole_plant() {
  // D = (s-1)(s+2)(s+10), N = 1
  return RationalPlant{Polynomial::from_real({1}), Polynomial::from_real({-20, 8, 11, 1})};
}

}  // namespace

TEST_CASE("degree condition") {
  const RationalPlant p3{Polynomial::from_real({1}), Polynomial::from_real({0, 0, 0, 1})};
  CHECK(degree_condition(p3, FractionalPID{0, 0, 0, 0.5, 1}));  // 3 > 1.5
  const RationalPlant p2{Polynomial::from_real({1}), Polynomial::from_real({0, 0, 1})};
  CHECK_FALSE(degree_condition(p2, FractionalPID{0, 0, 0, 1.0, 1}));  // boundary excluded
  const RationalPlant p31{Polynomial::from_real({0, 1}), Polynomial::from_real({0, 0, 0, 0, 1})};
  CHECK(degree_condition(p31, FractionalPID{0, 0, 0, 0.99, 1}));  // 4 > 2.99
}

TEST_CASE("sweep certifies stability first and reconciles stable points") {
  SweepGrid grid;
  grid.k1 = {0.0, 1.0};
  grid.k0 = {30.0, 60.0};
  grid.km1 = {1.0};
  grid.alpha = {0.5, 1.0};
  grid.beta = {0.5};
  const std::vector<SweepPoint> pts = sweep(three_pole_plant(), grid, 1e-7);
  REQUIRE(pts.size() == grid.size());

  double lo = 1e300, hi = -1e300;
  int stable = 0;
  for (const SweepPoint& pt : pts) {
    CHECK(pt.error.empty());
    CHECK((pt.report.has_value() == (pt.certificate.verdict == StabilityVerdict::kStable)));
    if (pt.report && pt.degree_ok) {
      ++stable;
      lo = std::min(lo, pt.report->numeric_value);
      hi = std::max(hi, pt.report->numeric_value);
      CHECK(pt.report->theoretical_value == doctest::Approx(4 * kPi));
    }
  }
  REQUIRE(stable > 0);
  // Theorem-1 invariance: spread below 1% of 4 pi sum d Re p.
  CHECK(hi - lo < 0.01 * 4 * kPi);
}

TEST_CASE("sweep records unstable points without reports") {
  SweepGrid grid;
  grid.k1 = {0.0};
  grid.k0 = {0.05};  // far below the stabilizing band
  grid.km1 = {0.0};
  grid.alpha = {1.0};
  grid.beta = {1.0};
  const std::vector<SweepPoint> pts = sweep(three_pole_plant(), grid);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].certificate.verdict == StabilityVerdict::kUnstable);
  CHECK_FALSE(pts[0].report.has_value());
}

TEST_CASE("empty grid dimension is a parameter error") {
  SweepGrid grid;
  grid.k1 = {1.0};
  grid.k0 = {};
  grid.km1 = {1.0};
  grid.alpha = {0.5};
  grid.beta = {0.5};
  CHECK_THROWS_AS(sweep(three_pole_plant(), grid), std::invalid_argument);
}

TEST_CASE("sweep is deterministic") {
  SweepGrid grid;
  grid.k1 = {0.0, 1.0};
  grid.k0 = {40.0};
  grid.km1 = {1.0, 5.0};
  grid.alpha = {0.5};
  grid.beta = {0.5, 1.0};
  const auto a = sweep(three_pole_plant(), grid, 1e-7);
  const auto b = sweep(three_pole_plant(), grid, 1e-7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pid.k1 == b[i].pid.k1);
    CHECK(a[i].pid.beta == b[i].pid.beta);
    CHECK(a[i].report.has_value() == b[i].report.has_value());
    if (a[i].report) {
      // byte-identical doubles, not just approximately equal
      CHECK(a[i].report->numeric_value == b[i].report->numeric_value);
      CHECK(a[i].report->estimated_abs_error == b[i].report->estimated_abs_error);
    }
  }
}

TEST_CASE("certificate soundness spot check on stable sweep points") {
  SweepGrid grid;
  grid.k1 = {0.0, 1.0};
  grid.k0 = {30.0, 60.0, 90.0};
  grid.km1 = {1.0, 5.0};
  grid.alpha = {0.5};
  grid.beta = {0.5};
  const auto pts = sweep(three_pole_plant(), grid, 1e-6);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> re(0.1, 20.0), im(-20.0, 20.0);
  int checked = 0;
  for (const SweepPoint& pt : pts) {
    if (!pt.report || checked >= 10) continue;
    ++checked;
    const LoopModel m = LoopModel::rational(three_pole_plant(), pt.pid);
    for (int trial = 0; trial < 8; ++trial) {
      const Complex seed{re(rng), im(rng)};
      try {
        const auto [z, order] = refine_zero(m, seed, 1e-11);
        // any converged zero must lie outside the certified region
        const bool inside = pt.certificate.region.contains(z);
        CHECK_FALSE(inside);
      } catch (const RootFindError&) {
        // divergence away from any zero is fine
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("integer versus fractional comparison") {
  FractionalPID gains{1.0, 60.0, 5.0, 1.0, 1.0};
  const std::pair<double, double> orders[] = {{1.0, 1.0}, {0.5, 0.5}, {0.75, 1.25}};
  const ComparisonReport rep = compare_integer_vs_fractional(three_pole_plant(), gains, orders);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.baseline_stable);
  CHECK_FALSE(rep.header.empty());
  for (const ComparisonRow& row : rep.rows) {
    if (row.verdict != StabilityVerdict::kStable) continue;
    if (row.degree_ok)
      CHECK(row.numeric == doctest::Approx(4 * kPi).epsilon(0.01));
  }

  const std::pair<double, double> no_baseline[] = {{0.5, 0.5}};
  CHECK_THROWS_AS(compare_integer_vs_fractional(three_pole_plant(), gains, no_baseline),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_integer_vs_fractional(three_pole_plant(), gains, {}),
                  std::invalid_argument);
}

TEST_CASE("comparison reconciles degree-condition violations through the residual") {
  // m = 1, n = 0: the condition m > alpha + n + 1 fails for every alpha;
  // L = 3/(s-1) with k0 = 1 reconciles through gamma_R = 3 pi i.
  const RationalPlant plant{Polynomial::from_real({3}), Polynomial::from_real({-1, 1})};
  FractionalPID gains{0.0, 1.0, 0.0, 1.0, 1.0};
  const std::pair<double, double> orders[] = {{1.0, 1.0}};
  const ComparisonReport rep = compare_integer_vs_fractional(plant, gains, orders);
  REQUIRE(rep.rows.size() == 1);
  const ComparisonRow& row = rep.rows[0];
  CHECK_FALSE(row.degree_ok);
  REQUIRE(row.residual.has_value());
  CHECK(row.residual->imag() == doctest::Approx(3 * kPi).epsilon(1e-3));
  CHECK(std::abs(row.reconciliation) < 1e-3);
}

TEST_CASE("worker count respects the environment cap") {
  CHECK(worker_count() >= 1);
  ::setenv("BODEFRAC_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  ::setenv("BODEFRAC_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("BODEFRAC_THREADS");
}

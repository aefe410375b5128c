#include "bodefrac/tuner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <thread>

#include "bodefrac/contour.hpp"

namespace bodefrac {

bool degree_condition(const RationalPlant& plant, const FractionalPID& pid) {
  return plant.den_degree() > pid.alpha + plant.num_degree() + 1.0;
}

void SweepGrid::validate() const {
  if (k1.empty() || k0.empty() || km1.empty() || alpha.empty() || beta.empty())
    throw std::invalid_argument("SweepGrid: every dimension needs at least one value");
}

std::size_t SweepGrid::size() const {
  return k1.size() * k0.size() * km1.size() * alpha.size() * beta.size();
}

unsigned worker_count() {
  if (const char* env = std::getenv("BODEFRAC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

namespace {

SweepPoint evaluate_point(const RationalPlant& plant, const FractionalPID& pid,
                          double rel_tol) {
  SweepPoint pt;
  pt.pid = pid;
  pt.degree_ok = degree_condition(plant, pid);
  try {
    const LoopModel model = LoopModel::rational(plant, pid);
    pt.certificate = certify_stability(model);
    if (pt.certificate.verdict == StabilityVerdict::kStable)
      pt.report = bode_integral(model, rel_tol);
  } catch (const std::exception& e) {
    pt.error = e.what();
  }
  return pt;
}

}  // namespace

std::vector<SweepPoint> sweep(const RationalPlant& plant, const SweepGrid& grid,
                              double rel_tol) {
  grid.validate();
  std::vector<FractionalPID> pids;
  pids.reserve(grid.size());
  for (double k1 : grid.k1)
    for (double k0 : grid.k0)
      for (double km1 : grid.km1)
        for (double a : grid.alpha)
          for (double b : grid.beta) pids.push_back({k1, k0, km1, a, b});

  std::vector<SweepPoint> out(pids.size());
  const unsigned workers = std::min<unsigned>(worker_count(),
                                              static_cast<unsigned>(pids.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < pids.size(); ++i)
      out[i] = evaluate_point(plant, pids[i], rel_tol);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> jobs;
  for (unsigned wkr = 0; wkr < workers; ++wkr) {
    jobs.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= pids.size()) return;
        out[i] = evaluate_point(plant, pids[i], rel_tol);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

ComparisonReport compare_integer_vs_fractional(const RationalPlant& plant,
                                               const FractionalPID& gains,
                                               std::span<const std::pair<double, double>> orders,
                                               double rel_tol) {
  if (orders.empty())
    throw std::invalid_argument("compare_integer_vs_fractional: empty order list");
  const bool has_baseline =
      std::any_of(orders.begin(), orders.end(),
                  [](const auto& ab) { return ab.first == 1.0 && ab.second == 1.0; });
  if (!has_baseline)
    throw std::invalid_argument(
        "compare_integer_vs_fractional: the integer baseline (1, 1) must be included");

  ComparisonReport rep;
  rep.header =
      "Under the Bode relation the integral is fixed by the plant's open RHP poles "
      "whenever the degree condition m > alpha + n + 1 holds; fractional orders can "
      "change it only through the outer-arc residual once that condition is relaxed.";

  std::size_t baseline_idx = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto [a, b] = orders[i];
    ComparisonRow row;
    row.alpha = a;
    row.beta = b;
    row.is_baseline = (a == 1.0 && b == 1.0);
    if (row.is_baseline) baseline_idx = i;
    FractionalPID pid = gains;
    pid.alpha = a;
    pid.beta = b;
    row.degree_ok = degree_condition(plant, pid);
    try {
      const LoopModel model = LoopModel::rational(plant, pid);
      row.verdict = certify_stability(model).verdict;
      if (row.verdict == StabilityVerdict::kStable) {
        IntegralReport ir = bode_integral(model, rel_tol);
        if (!row.degree_ok) {
          const double scale = 1.0;
          const double r0 = 100.0 * (1.0 + scale);
          const double ladder[3] = {r0, 4.0 * r0, 16.0 * r0};
          const ResidualEstimate g = gamma_r_residual(model, ladder);
          ir.residual_gamma_r = g.value;
          row.residual = g.value;
        }
        row.numeric = ir.numeric_value;
        row.theoretical = ir.theoretical_value;
        row.reconciliation = ir.reconciliation();
      }
    } catch (const std::exception&) {
      row.verdict = StabilityVerdict::kInconclusive;
    }
    rep.rows.push_back(row);
  }

  const ComparisonRow& base = rep.rows[baseline_idx];
  rep.baseline_stable = base.verdict == StabilityVerdict::kStable;
  rep.baseline_numeric = base.numeric;
  for (ComparisonRow& row : rep.rows)
    row.below_baseline = rep.baseline_stable && row.verdict == StabilityVerdict::kStable &&
                         !row.is_baseline && row.numeric < rep.baseline_numeric;
  return rep;
}

}  // namespace bodefrac

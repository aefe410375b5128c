#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bodefrac/bodeint.hpp"
#include "bodefrac/rootfind.hpp"

namespace bodefrac {

// m > alpha + n + 1.
bool degree_condition(const RationalPlant& plant, const FractionalPID& pid);

struct SweepGrid {
  std::vector<double> k1, k0, km1, alpha, beta;
  void validate() const;  // every dimension nonempty
  std::size_t size() const;
};

struct SweepPoint {
  FractionalPID pid;
  bool degree_ok = false;
  StabilityCertificate certificate;
  std::optional<IntegralReport> report;  // present iff certified stable
  std::string error;
};

// Stability-first lazy evaluation over the grid, lexicographic in
// (k1, k0, km1, alpha, beta). Per-point failures are recorded, never abort
// the sweep. Worker count capped by BODEFRAC_THREADS.
std::vector<SweepPoint> sweep(const RationalPlant& plant, const SweepGrid& grid,
                              double rel_tol = defaults::kBodeRelTol);

struct ComparisonRow {
  double alpha, beta;
  bool is_baseline = false;
  bool degree_ok = false;
  StabilityVerdict verdict = StabilityVerdict::kInconclusive;
  double numeric = 0.0;
  double theoretical = 0.0;
  std::optional<Complex> residual;  // filled when the degree condition fails
  double reconciliation = 0.0;
  bool below_baseline = false;
};

struct ComparisonReport {
  std::string header;
  std::vector<ComparisonRow> rows;
  bool baseline_stable = false;
  double baseline_numeric = 0.0;
};

// Fixed gains, (alpha, beta) list including the integer baseline (1, 1).
// Under the degree condition the integral is fixed by the plant's RHP poles;
// entries violating it are reconciled through the arc residual.
ComparisonReport compare_integer_vs_fractional(const RationalPlant& plant,
                                               const FractionalPID& gains,
                                               std::span<const std::pair<double, double>> orders,
                                               double rel_tol = defaults::kBodeRelTol);

// Worker cap from BODEFRAC_THREADS (>= 1); hardware concurrency otherwise.
unsigned worker_count();

}  // namespace bodefrac

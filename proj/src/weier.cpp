#include "bodefrac/weier.hpp"

#include <algorithm>
#include <cmath>

#include "bodefrac/contour.hpp"
#include "bodefrac/model.hpp"

namespace bodefrac {

PoleSequenceFamily PoleSequenceFamily::a() { return {FamilyKind::kNoLimitPoint, 'A'}; }
PoleSequenceFamily PoleSequenceFamily::b() { return {FamilyKind::kAxisLimitPoint, 'B'}; }
PoleSequenceFamily PoleSequenceFamily::c() { return {FamilyKind::kOffAxisLimitPoint, 'C'}; }

PoleSequenceFamily PoleSequenceFamily::from_label(char label) {
  switch (label) {
    case 'A': case 'a': return a();
    case 'B': case 'b': return b();
    case 'C': case 'c': return c();
  }
  throw std::invalid_argument("PoleSequenceFamily: unknown family label");
}

Complex PoleSequenceFamily::pole(int j) const {
  if (j < 1) throw std::invalid_argument("PoleSequenceFamily: index starts at 1");
  const double jd = j;
  switch (label) {
    case 'A': return {1.0 / (jd * jd), jd};
    case 'B': return {1.0 / (jd * jd), 1.0 - 1.0 / jd};
    default: return {0.5, 1.0 / jd};
  }
}

Complex PoleSequenceFamily::limit_point() const {
  switch (kind) {
    case FamilyKind::kAxisLimitPoint: return {0.0, 1.0};
    case FamilyKind::kOffAxisLimitPoint: return {0.5, 0.0};
    default:
      throw std::logic_error("PoleSequenceFamily: no limit point for this family");
  }
}

std::vector<PoleRecord> generate_sequence(const PoleSequenceFamily& family, int n) {
  if (n < 1) throw std::invalid_argument("generate_sequence: N must be at least 1");
  std::vector<PoleRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out.push_back({family.pole(j), 1.0});
  std::sort(out.begin(), out.end(), [](const PoleRecord& a, const PoleRecord& b) {
    const double ma = std::abs(a.location), mb = std::abs(b.location);
    if (ma != mb) return ma < mb;
    return a.location.imag() < b.location.imag();
  });
  return out;
}

SyntheticSensitivity build_synthetic(std::vector<PoleRecord> seq, OuterSpec outer,
                                     FactorForm form) {
  outer.validate();
  SyntheticSensitivity sens{std::move(seq), form, std::move(outer)};
  for (const PoleRecord& f : sens.factors) {
    if (f.location.real() <= defaults::kAxisTolerance)
      throw std::invalid_argument("build_synthetic: factor not in the open right half plane");
    if (!(f.order > 0.0))
      throw std::invalid_argument("build_synthetic: factor order must be positive");
  }
  return sens;
}

OuterSpec matched_outer_for_theorem2(std::span<const PoleRecord> seq) {
  double sum = 0.0;
  for (const PoleRecord& p : seq) sum += p.order * p.location.real();
  OuterSpec outer;
  outer.zeros = {Complex{-(1.0 + 2.0 * sum), 0.0}};
  outer.poles = {Complex{-1.0, 0.0}};
  return outer;
}

namespace {

TheoremReport run_theorem_cases(const PoleSequenceFamily& family, std::span<const int> n_list,
                                double tol) {
  TheoremReport rep;
  double prev_sum = -1.0;
  for (int n : n_list) {
    std::vector<PoleRecord> seq = generate_sequence(family, n);
    const LoopModel model =
        LoopModel::synthetic(build_synthetic(seq, matched_outer_for_theorem2(seq)));
    const IntegralReport ir = bode_integral(model, 1e-8);
    const double target = theoretical_value(seq);
    const double rel = std::abs(ir.numeric_value - target) / std::abs(target);
    rep.rows.push_back({n, ir.numeric_value, target, rel});
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
    if (target < prev_sum) rep.partial_sums_monotone = false;
    prev_sum = target;
  }
  rep.pass = rep.max_rel_err <= tol && rep.partial_sums_monotone;
  return rep;
}

}  // namespace

TheoremReport verify_theorem_no_limit(const PoleSequenceFamily& family,
                                      std::span<const int> n_list, double tol) {
  if (family.kind != FamilyKind::kNoLimitPoint)
    throw std::invalid_argument("verify_theorem_no_limit: family must have no limit point");
  TheoremReport rep = run_theorem_cases(family, n_list, tol);
  if (!rep.pass && rep.note.empty()) rep.note = "relative error exceeded tolerance";
  return rep;
}

TheoremReport verify_theorem_limit(const PoleSequenceFamily& family,
                                   std::span<const int> n_list, double tol,
                                   std::span<const double> eps_list) {
  if (family.kind != FamilyKind::kAxisLimitPoint)
    throw std::invalid_argument("verify_theorem_limit: family must have an axis limit point");
  TheoremReport rep = run_theorem_cases(family, n_list, tol);

  // Indentation semicircle at the limit point for the largest truncation.
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<PoleRecord> seq = generate_sequence(family, n_max);
  const LoopModel model =
      LoopModel::synthetic(build_synthetic(seq, matched_outer_for_theorem2(seq)));
  const Complex p_star = family.limit_point();
  for (double e : eps_list) {
    const Complex v = limit_point_semicircle(model, p_star, e);
    rep.semicircle_eps.push_back(e);
    rep.semicircle_mags.push_back(std::abs(v));
  }
  for (std::size_t i = 1; i < rep.semicircle_mags.size(); ++i)
    if (!(rep.semicircle_mags[i] < rep.semicircle_mags[i - 1]))
      rep.semicircle_decreasing = false;
  rep.pass = rep.pass && rep.semicircle_decreasing;
  if (!rep.semicircle_decreasing)
    rep.note = "limit-point semicircle magnitudes are not decreasing";
  return rep;
}

DivergenceReport demonstrate_divergence(const PoleSequenceFamily& family,
                                        std::span<const int> n_list, double eps) {
  if (family.kind != FamilyKind::kOffAxisLimitPoint)
    throw std::invalid_argument(
        "demonstrate_divergence: family must have an off-axis limit point");
  DivergenceReport rep;
  rep.eps = eps;
  const double re_star = family.limit_point().real();

  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<PoleRecord> seq = generate_sequence(family, n_max);
  const LoopModel model = LoopModel::synthetic(
      build_synthetic(seq, OuterSpec{{}, {}, Complex{1.0, 0.0}}));

  // Per-pole corridor-pair magnitude with a width small against the local
  // spacing of the corridor heights 1/j.
  std::vector<double> pair_mag(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Complex p = seq[k].location;
    double gap = 1.0;
    for (std::size_t j = 0; j < seq.size(); ++j)
      if (j != k) gap = std::min(gap, std::abs(p.imag() - seq[j].location.imag()));
    const double w = std::min(1e-4, 0.2 * gap);
    const double widths[1] = {w};
    const LemmaReport lr = verify_corridor_pair(model, seq[k], widths);
    pair_mag[k] = lr.magnitudes[0];
  }

  for (int n : n_list) {
    double sum = 0.0;
    int counted = 0;
    // generate_sequence sorts by modulus; family C moduli decrease with j,
    // so take the poles of the first n indices j = 1..n.
    for (std::size_t k = 0; k < seq.size() && counted < n; ++k) {
      // indices j map to Im = 1/j; the first n of them have Im >= 1/n
      if (seq[k].location.imag() >= 1.0 / n - 1e-12) {
        sum += pair_mag[k];
        ++counted;
      }
    }
    rep.rows.push_back({n, sum, kTwoPi * (re_star - eps) * n});
  }

  rep.diverges = true;
  for (const DivergenceRow& r : rep.rows)
    if (!(r.corridor_sum > r.bound)) rep.diverges = false;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    if (rep.rows[i + 1].n == 2 * rep.rows[i].n) {
      const double ratio = rep.rows[i + 1].corridor_sum / rep.rows[i].corridor_sum;
      if (std::abs(ratio - 2.0) > 0.2) rep.doubling_linear = false;
    }
  }
  rep.note = rep.diverges ? "corridor sums exceed the linear lower bound: divergent"
                          : "corridor sums did not exceed the bound";
  return rep;
}

}  // namespace bodefrac

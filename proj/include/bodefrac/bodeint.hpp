#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "bodefrac/model.hpp"
#include "bodefrac/rootfind.hpp"

namespace bodefrac {

namespace defaults {
inline constexpr double kBodeRelTol = 1e-6;
inline constexpr double kOmegaCap = 1e9;
}  // namespace defaults

// I(S) reconciliation record: numeric quadrature vs the pole sum, with the
// outer-arc residual slot filled by the contour module.
struct IntegralReport {
  double numeric_value = 0.0;
  double theoretical_value = 0.0;
  double tail_correction = 0.0;
  double cutoff_omega = 0.0;
  double estimated_abs_error = 0.0;
  std::optional<Complex> residual_gamma_r;
  bool converged = true;
  std::string note;

  // numeric - (theoretical + Re(2i * residual)); the residual term is zero
  // when no arc residual has been attached.
  double reconciliation() const;
};

// ln|S(i omega)|^2. Returns -infinity where S vanishes on the axis.
double bode_integrand(const LoopModel& model, double omega);

// Leading-term tail model for rational-fractal loops beyond omega0:
// ln|S|^2 ~ -2 Re[c (i w)^(-q)] with c from the dominant controller term.
// Throws when q <= 1 (degree condition violated, tail not integrable by
// this model).
struct TailEstimate {
  double correction = 0.0;  // closed-form integral of the leading term, both half-axes
  double bound = 0.0;       // 2|c| omega0^(1-q) / (q-1) on the neglected remainder
  double q = 0.0;
  Complex c;
};
TailEstimate tail_estimate(const LoopModel& model, double omega0);

// 4 pi sum d_j Re(p_j).
double theoretical_value(std::span<const PoleRecord> poles);

using IntegrandSampleSink = std::function<void(double omega, double value, long panel)>;

// Adaptive quadrature of the Bode integrand over the whole axis: panels over
// [-omega0, omega0] with forced breaks at the model's feature frequencies,
// plus the symmetric improper tail folded to (0, 1/omega0] by u = 1/omega.
IntegralReport bode_integral(const LoopModel& model, double rel_tol = defaults::kBodeRelTol,
                             const IntegrandSampleSink& sink = {});

}  // namespace bodefrac

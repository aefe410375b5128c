#include "bodefrac/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bodefrac {
namespace {

// Characteristic value whose RHP zeros are the closed-loop poles (rational)
// or the placed sensitivity zeros (synthetic).
Complex characteristic_value(const LoopModel& model, Complex s) {
  if (model.is_rational()) {
    const auto& rf = model.rational_loop();
    return closed_loop_characteristic(rf.plant, rf.pid, s);
  }
  return eval_synthetic(model.synthetic_model(), s);
}

Complex characteristic_value_derivative(const LoopModel& model, Complex s) {
  if (model.is_rational()) {
    const auto& rf = model.rational_loop();
    return closed_loop_characteristic_derivative(rf.plant, rf.pid, s);
  }
  // Logarithmic derivative of the synthetic product.
  const SyntheticSensitivity& sens = model.synthetic_model();
  Complex dlog{0.0, 0.0};
  for (const PoleRecord& f : sens.factors) {
    dlog += f.order / (s - f.location);
    if (sens.form == FactorForm::kBlaschke) dlog -= f.order / (s + std::conj(f.location));
  }
  for (const Complex& z : sens.outer.zeros) dlog += 1.0 / (s - z);
  for (const Complex& q : sens.outer.poles) dlog -= 1.0 / (s - q);
  return eval_synthetic(sens, s) * dlog;
}

double root_scale(const Polynomial& p, Complex r) {
  return p.magnitude_bound(r) + 1e-300;
}

std::string fmt_complex(Complex z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

void Rectangle::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw std::invalid_argument("Rectangle: requires re_min < re_max and im_min < im_max");
}

bool Rectangle::contains(Complex z) const {
  return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
}

std::vector<std::pair<Complex, int>> polynomial_roots(const Polynomial& p, double tol) {
  if (p.is_zero() || p.degree() < 1)
    throw std::invalid_argument("polynomial_roots: degree must be at least 1");

  std::vector<Complex> c = p.coeffs();
  int zero_roots = 0;
  while (std::abs(c.front()) == 0.0 && c.size() > 1) {
    c.erase(c.begin());
    ++zero_roots;
  }
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<Complex> z;

  if (n == 1) {
    z.push_back(-c[0] / c[1]);
  } else if (n >= 2) {
    // Bini-style initialization: a circle at the root-magnitude scale with
    // a small angular offset to break symmetry.
    double radius = 0.0;
    for (int k = 0; k < n; ++k) {
      const double ratio = std::abs(c[k] / c[n]);
      if (ratio > 0.0) radius = std::max(radius, std::pow(ratio, 1.0 / (n - k)));
    }
    if (radius == 0.0) radius = 1.0;
    z.resize(n);
    for (int k = 0; k < n; ++k) {
      const double th = kTwoPi * k / n + 0.376;
      z[k] = radius * Complex{std::cos(th), std::sin(th)};
    }

    const Polynomial q{std::vector<Complex>(c)};
    const int max_iter = 600;
    bool converged = false;
    for (int it = 0; it < max_iter && !converged; ++it) {
      converged = true;
      for (int k = 0; k < n; ++k) {
        const Complex pv = q.eval(z[k]);
        if (std::abs(pv) <= 1e-16 * root_scale(q, z[k])) continue;
        const Complex dv = q.eval_derivative(z[k]);
        Complex w;
        if (dv == 0.0) {
          w = Complex{1e-8, 1e-8} * (1.0 + std::abs(z[k]));
        } else {
          w = pv / dv;
          Complex rep{0.0, 0.0};
          for (int j = 0; j < n; ++j)
            if (j != k) rep += 1.0 / (z[k] - z[j]);
          const Complex den = 1.0 - w * rep;
          if (den != 0.0) w /= den;
        }
        z[k] -= w;
        if (std::abs(w) > 1e-14 * (1.0 + std::abs(z[k]))) converged = false;
      }
    }
    for (int k = 0; k < n; ++k) {
      if (std::abs(q.eval(z[k])) > tol * root_scale(q, z[k])) {
        std::ostringstream os;
        os << "polynomial_roots: no convergence; best iterates:";
        for (const Complex& r : z) os << " " << fmt_complex(r);
        throw RootFindError(os.str());
      }
    }
  }

  for (int k = 0; k < zero_roots; ++k) z.push_back({0.0, 0.0});

  // Cluster nearby iterates into multiple roots.
  std::vector<std::pair<Complex, int>> out;
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    Complex sum = z[i];
    int mult = 1;
    used[i] = true;
    const double rad = defaults::cluster_radius(std::abs(z[i]));
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (!used[j] && std::abs(z[j] - z[i]) <= rad) {
        used[j] = true;
        sum += z[j];
        ++mult;
      }
    }
    out.push_back({sum / static_cast<double>(mult), mult});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.first), mb = std::abs(b.first);
    if (ma != mb) return ma < mb;
    return a.first.imag() < b.first.imag();
  });
  return out;
}

RhpPoles rhp_open_loop_poles(const RationalPlant& plant) {
  RhpPoles out;
  if (plant.den.degree() < 1) return out;
  for (const auto& [root, mult] : polynomial_roots(plant.den)) {
    if (root.real() > defaults::kAxisTolerance) {
      out.poles.push_back({root, static_cast<double>(mult)});
    } else if (std::abs(root.real()) <= defaults::kAxisTolerance) {
      out.warnings.push_back("marginal pole within axis tolerance at " + fmt_complex(root));
    }
  }
  // polynomial_roots already sorts by modulus; the filter preserves order.
  return out;
}

int count_winding_rect(const std::function<Complex(Complex)>& f, const Rectangle& rect,
                       double* boundary_min_modulus) {
  rect.validate();
  const Complex corners[5] = {
      {rect.re_min, rect.im_min}, {rect.re_max, rect.im_min}, {rect.re_max, rect.im_max},
      {rect.re_min, rect.im_max}, {rect.re_min, rect.im_min}};

  double diag = std::hypot(rect.re_max - rect.re_min, rect.im_max - rect.im_min);
  double min_mod = std::numeric_limits<double>::infinity();
  double total = 0.0;

  const double mod_floor = defaults::kBoundaryModulusTol;
  // Recursive phase-step accumulation between two boundary points.
  const int max_depth = 46;
  std::function<double(Complex, Complex, Complex, Complex, int)> walk =
      [&](Complex sa, Complex za, Complex sb, Complex zb, int depth) -> double {
    const double ma = std::abs(za), mb = std::abs(zb);
    min_mod = std::min(min_mod, std::min(ma, mb));
    if (ma <= mod_floor * diag || mb <= mod_floor * diag)
      throw BoundaryZeroError(
          "count_winding_rect: zero within tolerance of the rectangle boundary near s = " +
          fmt_complex(std::abs(za) < std::abs(zb) ? sa : sb) +
          "; perturb the rectangle");
    const double dphi = principal_arg(zb / za);
    const double ratio = mb / ma;
    if (std::abs(dphi) < 0.5 * kPi && ratio < 4.0 && ratio > 0.25) return dphi;
    if (depth >= max_depth)
      throw BoundaryZeroError("count_winding_rect: phase step did not settle near s = " +
                              fmt_complex(sa));
    const Complex sm = 0.5 * (sa + sb);
    const Complex zm = f(sm);
    return walk(sa, za, sm, zm, depth + 1) + walk(sm, zm, sb, zb, depth + 1);
  };

  const int initial = 8;
  for (int edge = 0; edge < 4; ++edge) {
    Complex prev_s = corners[edge];
    Complex prev_z = f(prev_s);
    for (int k = 1; k <= initial; ++k) {
      const double t = static_cast<double>(k) / initial;
      const Complex s = corners[edge] + t * (corners[edge + 1] - corners[edge]);
      const Complex zv = f(s);
      total += walk(prev_s, prev_z, s, zv, 0);
      prev_s = s;
      prev_z = zv;
    }
  }
  if (boundary_min_modulus) *boundary_min_modulus = min_mod;
  const double winding = total / kTwoPi;
  const long rounded = std::lround(winding);
  if (std::abs(winding - static_cast<double>(rounded)) > 0.25)
    throw RootFindError("count_winding_rect: non-integer winding total " +
                        std::to_string(winding));
  return static_cast<int>(rounded);
}

int count_zeros_rect(const LoopModel& model, const Rectangle& rect) {
  return count_winding_rect([&](Complex s) { return characteristic_value(model, s); }, rect,
                            nullptr);
}

std::pair<Complex, double> refine_zero(const LoopModel& model, Complex seed, double tol) {
  Complex z = seed;
  const double start_mod = std::abs(seed);
  bool hit = false;
  for (int it = 0; it < 80; ++it) {
    const Complex fv = characteristic_value(model, z);
    const double scale = model.is_rational()
                             ? model.rational_loop().plant.den.magnitude_bound(z) +
                                   model.rational_loop().plant.num.magnitude_bound(z) + 1.0
                             : 1.0 + std::abs(fv);
    if (std::abs(fv) < tol * scale) {
      hit = true;
      break;
    }
    const Complex dv = characteristic_value_derivative(model, z);
    if (dv == 0.0) throw RootFindError("refine_zero: vanishing derivative at " + fmt_complex(z));
    const Complex step = fv / dv;
    z -= step;
    if (std::abs(z) > 50.0 * (1.0 + start_mod))
      throw RootFindError("refine_zero: iteration diverged from seed " + fmt_complex(seed));
    if (z.real() < -10.0 * (1.0 + std::abs(seed.real())))
      throw RootFindError("refine_zero: iterate left the right half plane at " + fmt_complex(z));
  }
  if (!hit) {
    const Complex fv = characteristic_value(model, z);
    if (std::abs(fv) > std::sqrt(tol))
      throw RootFindError("refine_zero: no convergence; last iterate " + fmt_complex(z));
  }

  // Order from the winding of the characteristic value on a small circle.
  double radius = 0.05 * (1.0 + std::abs(z));
  for (int attempt = 0; attempt < 6; ++attempt) {
    const int samples = 256;
    PhaseTracker tracker;
    double first = 0.0, last = 0.0;
    bool ok = true;
    for (int k = 0; k <= samples; ++k) {
      const double th = -kPi + kTwoPi * k / samples;
      const Complex s = z + radius * Complex{std::cos(th), std::sin(th)};
      Complex fv;
      try {
        fv = characteristic_value(model, s);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
      if (std::abs(fv) == 0.0) {
        ok = false;
        break;
      }
      const double ph = tracker.advance(fv);
      if (k == 0) first = ph;
      last = ph;
    }
    if (ok) {
      const double order = (last - first) / kTwoPi;
      const long k = std::lround(order);
      if (k >= 2 && std::abs(order - static_cast<double>(k)) < 0.05) {
        // Multiplicity-accelerated Newton restores quadratic convergence.
        for (int it = 0; it < 30; ++it) {
          const Complex fv = characteristic_value(model, z);
          const Complex dv = characteristic_value_derivative(model, z);
          if (fv == 0.0 || dv == 0.0) break;
          const Complex step = static_cast<double>(k) * fv / dv;
          z -= step;
          if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
        }
      }
      return {z, order};
    }
    radius *= 0.5;
  }
  throw RootFindError("refine_zero: could not estimate the zero order at " + fmt_complex(z));
}

namespace {

double natural_scale(const LoopModel& model) {
  double scale = 1.0;
  if (model.is_rational()) {
    const auto& rf = model.rational_loop();
    try {
      if (rf.plant.den.degree() >= 1)
        for (const auto& [r, m] : polynomial_roots(rf.plant.den))
          scale = std::max(scale, std::abs(r));
      if (!rf.plant.num.is_zero() && rf.plant.num.degree() >= 1)
        for (const auto& [r, m] : polynomial_roots(rf.plant.num))
          scale = std::max(scale, std::abs(r));
    } catch (const RootFindError&) {
      scale = std::max(scale, rf.plant.den.magnitude_bound({1.0, 0.0}));
    }
  } else {
    for (const PoleRecord& f : model.synthetic_model().factors)
      scale = std::max(scale, std::abs(f.location));
    for (const Complex& z : model.synthetic_model().outer.zeros)
      scale = std::max(scale, std::abs(z));
    for (const Complex& q : model.synthetic_model().outer.poles)
      scale = std::max(scale, std::abs(q));
  }
  return scale;
}

}  // namespace

StabilityCertificate certify_stability(const LoopModel& model) {
  const double s = 10.0 * (1.0 + natural_scale(model));
  return certify_stability(model, s, s);
}

StabilityCertificate certify_stability(const LoopModel& model, double re_max, double im_max) {
  if (!model.is_rational())
    throw std::invalid_argument("certify_stability: rational-fractal models only");
  const auto& rf = model.rational_loop();

  StabilityCertificate cert;
  cert.region = Rectangle{defaults::kAxisTolerance, re_max, -im_max, im_max};

  Rectangle rect = cert.region;
  bool counted = false;
  for (int attempt = 0; attempt < 2 && !counted; ++attempt) {
    try {
      cert.zero_count = count_winding_rect(
          [&](Complex s) { return closed_loop_characteristic(rf.plant, rf.pid, s); }, rect,
          &cert.boundary_min_modulus);
      counted = true;
    } catch (const BoundaryZeroError& e) {
      if (attempt == 1) {
        cert.verdict = StabilityVerdict::kInconclusive;
        cert.note = e.what();
        return cert;
      }
      rect.re_max *= 1.013;
      rect.im_min *= 1.007;
      rect.im_max *= 1.007;
    }
  }

  // Growth check: on the three outer edges chi must stay within a factor of
  // the dominant leading term so that no zero can hide beyond the region.
  const LeadingTerm lead_term = characteristic_leading_term(rf.plant, rf.pid);
  bool growth_ok = lead_term.coeff > 0.0;
  if (growth_ok) {
    const int samples = 48;
    auto ratio_at = [&](Complex s) {
      const double lead = lead_term.coeff * std::pow(std::abs(s), lead_term.exponent);
      return std::abs(closed_loop_characteristic(rf.plant, rf.pid, s)) / lead;
    };
    for (int k = 0; k <= samples && growth_ok; ++k) {
      const double t = static_cast<double>(k) / samples;
      const Complex right{rect.re_max, rect.im_min + t * (rect.im_max - rect.im_min)};
      const Complex top{rect.re_min + t * (rect.re_max - rect.re_min), rect.im_max};
      const Complex bottom{rect.re_min + t * (rect.re_max - rect.re_min), rect.im_min};
      if (ratio_at(right) < defaults::kCertificateMargin ||
          ratio_at(top) < defaults::kCertificateMargin ||
          ratio_at(bottom) < defaults::kCertificateMargin)
        growth_ok = false;
    }
  }

  if (cert.zero_count > 0) {
    cert.verdict = StabilityVerdict::kUnstable;
  } else if (growth_ok && cert.boundary_min_modulus > defaults::kBoundaryModulusTol) {
    cert.verdict = StabilityVerdict::kStable;
  } else {
    cert.verdict = StabilityVerdict::kInconclusive;
    cert.note = "growth check failed on the outer boundary";
  }
  return cert;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::kStable: return "stable";
    case StabilityVerdict::kUnstable: return "unstable";
    case StabilityVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace bodefrac

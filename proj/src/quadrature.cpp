#include "bodefrac/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bodefrac {

namespace gk {
const double kAbscissae[kNodeCount] = {
    0.000000000000000000000000000000000,
    0.405845151377397166906606412076961,
    0.741531185599394439863864773280788,
    0.949107912342758524526189684047851,
    0.207784955007898467600689403773245,
    0.586087235467691130294144838258730,
    0.864864423359769072789712788640926,
    0.991455371120812639206854697526329,
};
const double kGaussWeights[kNodeCount] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
    0.0,
    0.0,
    0.0,
    0.0,
};
const double kKronrodWeights[kNodeCount] = {
    0.209482141084727828012999174891714,
    0.190350578064785409913256402421014,
    0.140653259715525918745189590510238,
    0.063092092629978553290700663189204,
    0.204432940075298892414161999234649,
    0.169004726639267902826583426598550,
    0.104790010322250183839876322541518,
    0.022935322010529224963732008058970,
};
}  // namespace gk

namespace {

struct Panel {
  double a, b;
  int depth;
};

struct PanelEval {
  double k15 = 0.0;
  double g7 = 0.0;
  double err = 0.0;
  bool finite = true;
  double xs[15];
  double fs[15];
  int count = 0;
};

PanelEval eval_panel(const std::function<double(double)>& f, double a, double b) {
  PanelEval out;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < gk::kNodeCount; ++i) {
    const double xi = gk::kAbscissae[i];
    const double xp = mid + half * xi;
    const double fp = f(xp);
    out.xs[out.count] = xp;
    out.fs[out.count++] = fp;
    double fsum = fp;
    if (xi != 0.0) {
      const double xm = mid - half * xi;
      const double fm = f(xm);
      out.xs[out.count] = xm;
      out.fs[out.count++] = fm;
      fsum += fm;
    }
    out.k15 += gk::kKronrodWeights[i] * fsum;
    out.g7 += gk::kGaussWeights[i] * fsum;
  }
  out.k15 *= half;
  out.g7 *= half;
  if (!std::isfinite(out.k15) || !std::isfinite(out.g7)) {
    out.finite = false;
    out.err = std::numeric_limits<double>::infinity();
  } else {
    out.err = std::abs(out.k15 - out.g7);
  }
  return out;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opt) {
  QuadResult res;
  if (a == b) return res;
  const double total_len = std::abs(b - a);
  std::vector<Panel> stack{{a, b, 0}};
  long panel_id = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const PanelEval ev = eval_panel(f, p.a, p.b);
    res.evals += 15;
    const double len = std::abs(p.b - p.a);
    const double budget = opt.abs_tol * len / total_len +
                          1e-16 * std::abs(ev.k15);
    if (ev.finite && (ev.err <= budget || p.depth >= opt.max_depth)) {
      if (ev.err > budget && ev.err > 1e4 * budget + 1e-13) res.converged = false;
      res.value += ev.k15;
      res.abs_error += ev.err;
      ++panel_id;
      if (opt.sample_sink)
        for (int i = 0; i < ev.count; ++i) opt.sample_sink(ev.xs[i], ev.fs[i], panel_id);
      continue;
    }
    if (!ev.finite && p.depth >= opt.max_depth) {
      res.converged = false;  // unresolvable singular node; drop the sliver
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }
  return res;
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

std::pair<Complex, double> extrapolate_to_zero(std::span<const double> h,
                                               std::span<const Complex> v) {
  if (h.size() != v.size() || v.empty())
    throw std::invalid_argument("extrapolate_to_zero: bad sample lists");
  const std::size_t n = v.size();
  if (n == 1) return {v[0], std::numeric_limits<double>::infinity()};

  const Complex v1 = v[n - 2], v2 = v[n - 1];
  const double h1 = h[n - 2], h2 = h[n - 1];
  const Complex lin = v2 + (v2 - v1) * (h2 / (h1 - h2));
  if (n == 2 || std::abs(v1 - v2) == 0.0) return {lin, std::abs(lin - v2)};

  const Complex v0 = v[n - 3];
  const double h0 = h[n - 3];
  const double r01 = std::abs(v0 - v1), r12 = std::abs(v1 - v2);
  if (r12 == 0.0) return {v2, r01};
  const double rho = 0.5 * (h1 / h0 + h2 / h1);
  const double kappa = std::log(r01 / r12) / std::log(1.0 / rho);
  if (!std::isfinite(kappa) || kappa < 0.1 || kappa > 8.0)
    return {lin, std::abs(lin - v2) + r12};
  const Complex step = (v1 - v2) / (std::pow(rho, -kappa) - 1.0);
  const Complex lim = v2 - step;
  return {lim, std::abs(lim - lin) + 0.1 * std::abs(step)};
}

}  // namespace bodefrac

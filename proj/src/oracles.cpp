#include "hyperavg/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "hyperavg/grid.hpp"

namespace hyperavg::oracles {

double linear_toy_exact(double t, double x, double eps) {
  return std::exp(eps * t) * std::sin(x - t);
}

double linear_toy_truncated(double t, double x, double eps, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("linear_toy_truncated: order must be 0, 1 or 2");
  const double s = eps * t;
  double prefix = 1.0;
  if (order >= 1) prefix += s;
  if (order >= 2) prefix += 0.5 * s * s;
  return prefix * std::sin(x - t);
}

double resonance_model_exact(double t, double x, double eps) {
  return 0.25 * eps * (2.0 * t + std::sin(2.0 * (x - t)) - std::sin(2.0 * x));
}

double resonance_model_averaged(double tau) {
  if (tau < 0) throw std::invalid_argument("resonance_model_averaged: tau must be >= 0");
  return 0.5 * tau;
}

double burgers_implicit_wave(double t, double x, double eps, const ImplicitWaveParams& params) {
  if (!params.v0) throw std::invalid_argument("burgers_implicit_wave: missing profile");

  const auto& v0 = params.v0;
  const double a = eps * t;

  // breaking guard: sample sup|v0'| over one period
  {
    const int n = 2048;
    const double dh = 1e-6;
    double sup_dv = 0.0;
    for (int j = 0; j < n; ++j) {
      const double y = two_pi * j / n;
      sup_dv = std::max(sup_dv, std::abs((v0(y + dh) - v0(y - dh)) / (2.0 * dh)));
    }
    if (std::abs(a) * sup_dv >= 1.0)
      throw std::domain_error("burgers_implicit_wave: wave has broken (eps*t*sup|v0'| >= 1)");
  }

  const auto residual = [&](double v) { return v - v0(x - t + a * v); };

  double v = v0(x - t);
  double r = residual(v);
  bool converged = std::abs(r) <= params.newton_tol;

  for (int it = 0; it < params.max_iter && !converged; ++it) {
    const double dh = 1e-7;
    const double xi = x - t + a * v;
    const double dres = 1.0 - a * (v0(xi + dh) - v0(xi - dh)) / (2.0 * dh);
    if (std::abs(dres) < 1e-14) break;
    double step = -r / dres;
    // damped update: halve until the residual actually shrinks
    double v_next = v + step;
    double r_next = residual(v_next);
    int halvings = 0;
    while (std::abs(r_next) > std::abs(r) && halvings < 60) {
      step *= 0.5;
      v_next = v + step;
      r_next = residual(v_next);
      ++halvings;
    }
    v = v_next;
    r = r_next;
    converged = std::abs(r) <= params.newton_tol;
  }

  if (!converged) {
    // bisection fallback over the attainable range of v0
    double lo = v0(0.0), hi = v0(0.0);
    const int n = 4096;
    for (int j = 1; j < n; ++j) {
      const double y = two_pi * j / n;
      lo = std::min(lo, v0(y));
      hi = std::max(hi, v0(y));
    }
    lo -= 1e-9;
    hi += 1e-9;
    double flo = residual(lo), fhi = residual(hi);
    if (flo > 0.0 || fhi < 0.0)
      throw std::runtime_error("burgers_implicit_wave: no bracket for bisection");
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = residual(mid);
      if (std::abs(fm) <= params.newton_tol) { v = mid; converged = true; break; }
      if ((flo <= 0.0) == (fm <= 0.0)) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
    }
    if (!converged) {
      v = 0.5 * (lo + hi);
      converged = std::abs(residual(v)) <= params.newton_tol * 10.0;
    }
  }

  if (!converged) throw std::runtime_error("burgers_implicit_wave: iteration did not converge");
  return v;
}

} // namespace hyperavg::oracles

#pragma once

#include <functional>

namespace hyperavg::oracles {

// u_t + u_x = eps*u, u(0,x) = sin x   =>   u = exp(eps*t) sin(x - t).
// The naive order-n truncation replaces exp(eps*t) by its Taylor prefix;
// its error at t = 1/eps stays O(1) no matter how small eps is.
double linear_toy_exact(double t, double x, double eps);
double linear_toy_truncated(double t, double x, double eps, int order); // order in {0,1,2}

// u_t + u_x = eps*v(x) sin x, v_t = 0, v(0,x) = sin x, u(0,x) = 0
//   =>   u = (eps/4)(2t + sin 2(x - t) - sin 2x).
double resonance_model_exact(double t, double x, double eps);

// Slow-time profile of the same solution: U(tau) = tau/2. An average taken
// along t alone (frozen x) misses the characteristic and predicts 0.
double resonance_model_averaged(double tau);

struct ImplicitWaveParams {
  std::function<double(double)> v0;   // 2*pi-periodic initial profile
  double newton_tol = 1e-12;
  int max_iter = 100;
};

// Simple-wave solution of v_t + v_x = eps*v*v_x through the implicit relation
// v = v0(x - t + eps*t*v). Valid before characteristics cross, i.e. while
// eps*t*sup|v0'| < 1. Damped Newton with a bisection fallback.
double burgers_implicit_wave(double t, double x, double eps, const ImplicitWaveParams& params);

} // namespace hyperavg::oracles

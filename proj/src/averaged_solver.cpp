#include "hyperavg/averaged_solver.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "hyperavg/fft.hpp"

namespace hyperavg::solver {

using averaging::AverageDirection;
using averaging::coupling_term_derivative;

namespace {

std::atomic<long> g_run_count{0};

bool effectively_zero(const Field& f) { return sup_norm(f) == 0.0; }

// (a^2 + a*b + b^2)/3, the two-level product that makes the quadratic term
// conservative in both mass and energy
Field cn_quadratic(const Field& a, const Field& b) {
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) {
    const double x = a.values()[j], y = b.values()[j];
    v[j] = (x * x + x * y + y * y) / 3.0;
  }
  return Field(a.grid(), std::move(v));
}

// Fourier symbol of the d3 stencil: i (sin 2phi - 2 sin phi) / h^3
std::vector<double> d3_symbol_imag(const PeriodicGrid& grid) {
  const int m = grid.num_points();
  const double h = grid.spacing();
  std::vector<double> s(m);
  for (int k = 0; k < m; ++k) {
    const double phi = two_pi * k / m;
    s[k] = (std::sin(2.0 * phi) - 2.0 * std::sin(phi)) / (h * h * h);
  }
  return s;
}

// solve (I + alpha*D3) u = b via the circulant diagonalization; the symbol is
// purely imaginary so the system is uniformly well conditioned
Field circulant_solve(const Field& b, double alpha, const std::vector<double>& sym) {
  const int m = b.size();
  std::vector<cplx> a(m);
  for (int j = 0; j < m; ++j) a[j] = cplx(b.values()[j], 0.0);
  a = fft(std::move(a));
  for (int k = 0; k < m; ++k) a[k] /= cplx(1.0, alpha * sym[k]);
  a = ifft(std::move(a));
  std::vector<double> v(m);
  for (int j = 0; j < m; ++j) v[j] = a[j].real();
  return Field(b.grid(), std::move(v));
}

struct StepContext {
  const Field& h_profile;
  const TermToggles& terms;
  bool coupling_active = false;
};

std::pair<Field, Field> rhs_impl(const Field& v_new, const Field& v_old,
                                 const Field& w_new, const Field& w_old,
                                 const StepContext& ctx) {
  Field rhs_v = make_zero_field(v_old.grid());
  Field rhs_w = make_zero_field(v_old.grid());

  if (ctx.terms.dispersion) {
    rhs_v = axpy(-1.0 / 12.0, add(d3(v_new), d3(v_old)), rhs_v);
    rhs_w = axpy(+1.0 / 12.0, add(d3(w_new), d3(w_old)), rhs_w);
  }
  if (ctx.terms.quadratic) {
    rhs_v = axpy(-0.75, d_central(cn_quadratic(v_new, v_old)), rhs_v);
    rhs_w = axpy(+0.75, d_central(cn_quadratic(w_new, w_old)), rhs_w);
  }
  if (ctx.coupling_active) {
    rhs_v = axpy(+1.0, coupling_term_derivative(ctx.h_profile, w_new, w_old, AverageDirection::plus), rhs_v);
    rhs_w = axpy(-1.0, coupling_term_derivative(ctx.h_profile, v_new, v_old, AverageDirection::minus), rhs_w);
  }
  return {std::move(rhs_v), std::move(rhs_w)};
}

FieldPair step_impl(const FieldPair& state, const Field& h_profile, const SchemeParams& params,
                    StepDiagnostics* diag) {
  if (!(state.vplus.grid() == h_profile.grid()))
    throw std::invalid_argument("step: state and bottom profile on different grids");
  if (!(params.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (params.fp_max_iter < 1) throw std::invalid_argument("step: fp_max_iter must be >= 1");

  StepContext ctx{h_profile, params.terms,
                  params.terms.coupling && !effectively_zero(h_profile)};

  const Field& v0 = state.vplus;
  const Field& w0 = state.vminus;
  const double dt = params.dt;

  const bool semi = params.fp_mode == FixedPointMode::semi_implicit && params.terms.dispersion;
  std::vector<double> sym;
  Field expl_v = v0, expl_w = w0;
  if (semi) {
    sym = d3_symbol_imag(v0.grid());
    expl_v = axpy(-dt / 12.0, d3(v0), v0);
    expl_w = axpy(+dt / 12.0, d3(w0), w0);
  }

  Field vk = v0, wk = w0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;

  for (int m = 0; m < params.fp_max_iter; ++m) {
    ++iterations;
    Field v_next = make_zero_field(v0.grid());
    Field w_next = make_zero_field(w0.grid());

    if (semi) {
      // explicit groups at the current iterate, exact solve of the implicit
      // Crank-Nicolson dispersive part
      Field bv = expl_v, bw = expl_w;
      if (ctx.terms.quadratic) {
        bv = axpy(-0.75 * dt, d_central(cn_quadratic(vk, v0)), bv);
        bw = axpy(+0.75 * dt, d_central(cn_quadratic(wk, w0)), bw);
      }
      if (ctx.coupling_active) {
        bv = axpy(+dt, coupling_term_derivative(ctx.h_profile, wk, w0, AverageDirection::plus), bv);
        bw = axpy(-dt, coupling_term_derivative(ctx.h_profile, vk, v0, AverageDirection::minus), bw);
      }
      v_next = circulant_solve(bv, +dt / 12.0, sym);
      w_next = circulant_solve(bw, -dt / 12.0, sym);
    } else {
      auto [rv, rw] = rhs_impl(vk, v0, wk, w0, ctx);
      v_next = axpy(dt, rv, v0);
      w_next = axpy(dt, rw, w0);
    }

    const double diff = sup_norm(v_next, vk) + sup_norm(w_next, wk);
    vk = std::move(v_next);
    wk = std::move(w_next);

    // catch runaway iterates before the quadratic term overflows to inf
    if (sup_norm(vk) + sup_norm(wk) > 1e100)
      throw std::runtime_error("step: fixed-point iteration diverged (dt too large)");

    if (diff <= 0.5 * params.fp_tol || m + 1 == params.fp_max_iter) {
      auto [rv, rw] = rhs_impl(vk, v0, wk, w0, ctx);
      const double res_v = sup_norm(sub(vk, axpy(dt, rv, v0)));
      const double res_w = sup_norm(sub(wk, axpy(dt, rw, w0)));
      residual = res_v + res_w;
      if (residual <= params.fp_tol) break;
    }
    if (!std::isfinite(diff))
      throw std::runtime_error("step: fixed-point iteration diverged (dt too large)");
  }

  if (!(residual <= params.fp_tol))
    throw std::runtime_error("step: fixed-point iteration did not converge within " +
                             std::to_string(params.fp_max_iter) +
                             " sweeps (residual " + std::to_string(residual) + "); reduce dt");

  if (diag) {
    diag->iterations = iterations;
    diag->residual = residual;
    diag->mass_vplus = mean(vk);
    diag->mass_vminus = mean(wk);
  }
  return FieldPair(std::move(vk), std::move(wk), state.tau + dt);
}

} // namespace

std::pair<Field, Field> fds1_rhs(const Field& v_new, const Field& v_old,
                                 const Field& w_new, const Field& w_old,
                                 const Field& h_profile, const TermToggles& terms) {
  StepContext ctx{h_profile, terms, terms.coupling && !effectively_zero(h_profile)};
  return rhs_impl(v_new, v_old, w_new, w_old, ctx);
}

FieldPair step(const FieldPair& state, const Field& h_profile, const SchemeParams& params,
               StepDiagnostics* diag) {
  return step_impl(state, h_profile, params, diag);
}

FieldPair kdv_reference_step(const FieldPair& state, const SchemeParams& params,
                             StepDiagnostics* diag) {
  SchemeParams p = params;
  p.terms.coupling = false;
  return step_impl(state, make_zero_field(state.vplus.grid()), p, diag);
}

AveragedRun run(const FieldPair& initial, const Field& h_profile, const SchemeParams& params) {
  if (!(params.tau_end >= 0.0)) throw std::invalid_argument("run: tau_end must be >= 0");
  if (!(params.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");

  const double h = initial.vplus.grid().spacing();
  if (params.dt > h)
    std::fprintf(stderr, "advisory: averaged step dt=%g exceeds mesh h=%g\n", params.dt, h);

  const long n_steps = std::lround(params.tau_end / params.dt);

  // which step indices to keep
  std::vector<bool> keep(std::size_t(n_steps) + 1, params.snapshot_taus.empty());
  keep[0] = true;
  keep[n_steps] = true;
  for (double t : params.snapshot_taus) {
    long idx = std::lround(t / params.dt);
    idx = std::max(0L, std::min(n_steps, idx));
    keep[idx] = true;
  }

  AveragedRun out{{}, h_profile, params, {}};
  out.diagnostics.reserve(n_steps);

  FieldPair state(initial.vplus, initial.vminus, 0.0);
  if (keep[0]) out.snapshots.push_back(state);

  for (long s = 1; s <= n_steps; ++s) {
    StepDiagnostics d;
    state = step_impl(state, h_profile, params, &d);
    state.tau = params.dt * s; // avoid accumulation drift in recorded times
    out.diagnostics.push_back(d);
    if (keep[s]) out.snapshots.push_back(state);
  }

  g_run_count.fetch_add(1, std::memory_order_relaxed);
  return out;
}

long run_invocation_count() { return g_run_count.load(std::memory_order_relaxed); }
void reset_run_invocation_count() { g_run_count.store(0, std::memory_order_relaxed); }

} // namespace hyperavg::solver

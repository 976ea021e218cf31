#pragma once

#include <utility>
#include <vector>

#include "hyperavg/averaging.hpp"
#include "hyperavg/field_ops.hpp"
#include "hyperavg/grid.hpp"

namespace hyperavg::solver {

// Term groups of the averaged system. All on reproduces the coupled
// KdV-with-averaged-coupling pair; switching groups off yields the matching
// averaged system of models without dispersion or without nonlinearity.
struct TermToggles {
  bool dispersion = true;
  bool quadratic = true;
  bool coupling = true;
};

// Inner solver for the implicit step. semi_implicit solves the linear
// Crank-Nicolson dispersive part exactly per sweep (circulant solve) and
// lags only the quadratic and coupling groups; picard lags everything.
// Both converge to the same discrete solution; plain picard contracts only
// when dt is tiny compared to h^3 and exists mainly for cross-validation.
enum class FixedPointMode { semi_implicit, picard };

struct SchemeParams {
  double dt = 1e-3;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;
  double tau_end = 1.0;
  TermToggles terms;
  FixedPointMode fp_mode = FixedPointMode::semi_implicit;
  // slow times at which to keep snapshots, rounded to the nearest step;
  // empty keeps every step
  std::vector<double> snapshot_taus;
};

struct StepDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  double mass_vplus = 0.0;
  double mass_vminus = 0.0;
};

struct AveragedRun {
  std::vector<FieldPair> snapshots; // tau ascending, snapshots.front().tau == 0
  Field h_profile;
  SchemeParams params;
  std::vector<StepDiagnostics> diagnostics; // one entry per time step

  double tau_end() const { return snapshots.empty() ? 0.0 : snapshots.back().tau; }
};

// Scheme right-hand sides evaluated at given old/new iterates:
//   d(V)/dtau = -(1/6) CN(d3 V) - (3/4) dc[(Vn^2 + Vn*Vo + Vo^2)/3] + dF+/4h
//   d(W)/dtau = +(1/6) CN(d3 W) + (3/4) dc[(Wn^2 + Wn*Wo + Wo^2)/3] - dF-/4h
// with CN the two-level average and dF the centered coupling difference.
// Passing new == old gives the semi-discrete (dt -> 0) right-hand side.
std::pair<Field, Field> fds1_rhs(const Field& v_new, const Field& v_old,
                                 const Field& w_new, const Field& w_old,
                                 const Field& h_profile, const TermToggles& terms);

// One implicit step of size params.dt from state.tau. Returns the new state;
// the returned pair satisfies both implicit equations with residual sup-norm
// <= fp_tol. Throws on non-convergence (dt too large for the data).
FieldPair step(const FieldPair& state, const Field& h_profile, const SchemeParams& params,
               StepDiagnostics* diag = nullptr);

// Same scheme with the coupling group omitted: two independent KdV equations.
FieldPair kdv_reference_step(const FieldPair& state, const SchemeParams& params,
                             StepDiagnostics* diag = nullptr);

// Integrate from tau = 0 to params.tau_end (rounded to a whole number of
// steps). Records snapshots and per-step diagnostics; increments the run
// counter used to assert the solve-once-reuse-everywhere property.
AveragedRun run(const FieldPair& initial, const Field& h_profile, const SchemeParams& params);

long run_invocation_count();
void reset_run_invocation_count();

} // namespace hyperavg::solver

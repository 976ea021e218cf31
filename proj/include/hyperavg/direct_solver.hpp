#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperavg/averaged_solver.hpp"
#include "hyperavg/grid.hpp"

namespace hyperavg::direct {

// Variants of the shallow-water model, all sharing the d'Alembert part
// Z_t + U_x = ..., U_t + Z_x = ... with depth H = 1 + eps*h(x):
//   linear_dispersion        Z_t + (HU)_x = -(eps/3) U_xxx, U_t + Z_x = 0
//   linear_regularized       adds -(eps^2/20) U_xxxxx (well posed at all k)
//   nonlinear_nondispersive  Z_t + (HU)_x = -eps (ZU)_x, U_t + Z_x = -eps U U_x
//   simplified_sw            Z_t + U_x = eps(-(1/3)U_xxx - (hU)_x - (ZU)_x),
//                            U_t + Z_x = -eps U U_x
//   full_sw_regularized      Z_t + (HU)_x = eps((1/6)(H^3 U_xx)_x - (1/2)(HU)_xxx
//                              - H H_x (HU)_xx - (ZU)_x) - (eps^2/20) U_xxxxx,
//                            U_t + Z_x = -eps U U_x
enum class ModelKind {
  linear_dispersion,
  linear_regularized,
  nonlinear_nondispersive,
  simplified_sw,
  full_sw_regularized,
};

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Surface elevation Z and velocity U on one grid at fast time t; the small
// parameter travels with the state (physical fields are z = eps*Z, u = eps*U).
struct DirectState {
  Field z;
  Field u;
  double t = 0.0;
  double epsilon = 0.0;

  DirectState(Field z_, Field u_, double t_ = 0.0, double epsilon_ = 0.0);
};

struct DispersionMode {
  int k = 0;
  double omega_squared = 0.0;
  bool stable = true;       // omega_squared >= 0
  double growth_rate = 0.0; // sqrt(-omega^2) when unstable, else 0
};

struct DispersionReport {
  double eps = 0.0;
  bool regularized = false;
  std::vector<DispersionMode> modes; // k = 1..k_max
};

// omega^2(k) = k^2 - eps k^4/3 (+ eps^2 k^6/20 when regularized), the
// per-mode oscillator frequency of the linearized flat-bottom system.
// Without regularization modes with eps k^2 > 3 grow like exp(growth_rate*t);
// the regularized relation is positive for every k != 0. Requires eps > 0.
DispersionMode dispersion_relation(int k, double eps, bool regularized);

// Table of dispersion_relation over k = 1..k_max (empty for k_max = 0).
DispersionReport dispersion_report(double eps, int k_max, bool regularized);

struct DirectOptions {
  double dt = 1e-3;
  std::vector<double> snapshot_times; // rounded to steps; empty keeps only t_end
  double c0 = 1.2;                    // horizon guard: require t_end <= c0/eps
  double blowup_threshold = 1e6;
  bool allow_dt_retry = true; // one dt/2 retry on blow-up of a stable model
};

struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& msg, int mode_, double t_)
      : std::runtime_error(msg), mode(mode_), t(t_) {}
  int mode = 0;
  double t = 0.0;
};

// Pseudo-spectral integration of the selected model: spectral spatial
// derivatives, 2/3-rule dealiased products, the constant-coefficient wave +
// dispersion block advanced exactly per mode (integrating factor), classical
// RK4 on the remaining terms. epsilon is taken from `initial`. Snapshots are
// returned at the requested times (always including t_end). Growth past
// opts.blowup_threshold raises BlowUpError naming the dominant mode;
// every kind except linear_dispersion (whose blow-up is physical) gets one
// automatic retry at dt/2 first when opts.allow_dt_retry is set.
std::vector<DirectState> solve_direct(ModelKind kind, const DirectState& initial,
                                      const Field& h_profile, double t_end,
                                      const DirectOptions& opts = {});

// Riemann variables of the d'Alembert part: v+- = (Z +- U)/2, tagged with
// tau = eps*t; riemann_join inverts exactly, returning (Z, U).
FieldPair riemann_split(const DirectState& state);
std::pair<Field, Field> riemann_join(const FieldPair& pair);

// Asymptotic solution carried by an averaged run:
//   v+(t,x) = V+(eps t, x - t), v-(t,x) = V-(eps t, x + t), then joined.
// Linear interpolation in tau between stored snapshots and periodic linear
// interpolation in y; requires eps > 0 and eps*t <= run tau_end.
DirectState evaluate_asymptotic(const solver::AveragedRun& avg, double eps, double t,
                                const PeriodicGrid& grid);

} // namespace hyperavg::direct

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyperavg/averaged_solver.hpp"
#include "hyperavg/direct_solver.hpp"
#include "hyperavg/spectrum.hpp"

namespace hyperavg::harness {

// One trigonometric term `amp * cos(freq x)` or `amp * sin(freq x)` of an
// inline profile, written in configs as `amp*cos:freq` (amplitude optional).
struct Term {
  double amplitude = 1.0;
  bool is_sin = false;
  int frequency = 0;
};

struct TermList {
  std::vector<Term> terms;

  bool zero() const { return terms.empty(); }
  double operator()(double x) const;
};

// Grammar: comma-separated terms, each `[amp*]cos:k` or `[amp*]sin:k` with
// integer k >= 0; the empty string or `0` is the zero profile.
TermList parse_term_list(const std::string& text);

// Complex-exponential modes of the term list (conjugate-symmetric).
Spectrum term_list_spectrum(const TermList& list);

// One experiment description. Fully deterministic: no seeds, no environment.
struct RunConfig {
  direct::ModelKind model = direct::ModelKind::linear_regularized;
  std::vector<double> epsilons{0.1}; // each in (0, 1); a list sweeps
  int m = 256;                       // grid points, shared by both solvers
  double dt_direct = 1e-3;
  double dt_averaged = 1e-3;
  bool t_end_is_one_over_eps = true; // t_end = 1/eps per sweep member
  double t_end = 0.0;                // used when the flag is false
  TermList z0, u0, h;
  bool write_csv = true;
  bool write_summary = true;
  int k_max = 10;           // dispersion table size
  bool regularized = false; // dispersion table variant
  int levels = 4;           // refinement levels of a convergence study
  double tau_end = 0.5;     // slow-time horizon of a convergence study
};

// Flat `key = value` text, `#` comments, optional `[section]` headers.
// Keys: model, epsilon, M, dt_direct, dt_averaged, t_end (real or
// "one_over_eps"), preset (paper32), Z0, U0, h, outputs (csv, summary),
// k_max, regularized, levels, tau_end. Unknown keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Comparison metrics of one (epsilon, t) pair plus run metadata.
struct ErrorReport {
  double epsilon = 0.0;
  double t = 0.0;
  double sup_error_z = 0.0;
  double sup_error_u = 0.0;
  double l2_error_z = 0.0;
  double l2_error_u = 0.0;
  double runtime_direct_seconds = 0.0;
  double runtime_averaged_seconds = 0.0; // one averaged run, shared by the sweep
  int m = 0;
  double period = 0.0;
};

struct CompareResult {
  std::vector<ErrorReport> reports;    // one per epsilon, config order
  std::vector<std::string> csv_paths;  // written files (empty when csv is off)
};

// Direct-vs-asymptotic comparison: integrates the averaged system once to
// the largest needed slow time, then for every epsilon runs the direct
// solver to t(eps) and reports sup/l2 errors of (Z, U). CSV columns:
// x,Z_direct,U_direct,Z_asym,U_asym.
CompareResult cmd_compare(const RunConfig& cfg, const std::string& out_dir,
                          std::ostream& log);

// Bottom-vs-surface frequency check. Prints the verdict and any vanishing
// combinations; returns the process exit code (0 clear, 2 resonant).
int cmd_resonance(const RunConfig& cfg, std::ostream& out);

void write_dispersion_csv(const direct::DispersionReport& report, std::ostream& out);
int cmd_dispersion(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

struct ConvergenceLevel {
  int m = 0;
  double dt = 0.0;
  double error_to_next = -1.0; // sup difference to the next finer level; -1 for last
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> observed_orders; // log2 ratios of successive errors
  bool order_defined = false;          // false when errors vanish (constant data)
  std::string order_text;              // headline order or "n/a"
};

// Grid–step refinement study of the averaged scheme: levels l use
// (M * 2^l, dt / 2^l); errors compare successive levels on shared nodes.
// Needs at least 3 levels for one observed order.
ConvergenceResult cmd_convergence(const RunConfig& cfg, std::ostream& log);

// Single-solver runs, final profile as CSV (y,V_plus,V_minus / x,Z,U).
int cmd_solve_averaged(const RunConfig& cfg, const std::string& out_dir,
                       std::ostream& log);
int cmd_solve_direct(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

// Term groups of the averaged system that match a given model: each model's
// slow-time limit keeps exactly the groups whose generating terms the model
// contains (dispersion from U_xxx, quadratic from (ZU)_x and U U_x, coupling
// from the variable depth).
solver::TermToggles toggles_for(direct::ModelKind kind);

// Shortest round-trip-exact decimal form (17 significant digits).
std::string format_double(double v);

} // namespace hyperavg::harness

#pragma once

#include <optional>
#include <vector>

#include "hyperavg/spectrum.hpp"

namespace hyperavg::resonance {

// One wave family of a weakly nonlinear hyperbolic system: characteristic
// speed, periods of its data, and (for almost-periodic data) explicit
// frequency lists. Periods/spectra that do not apply stay unset/empty.
struct WaveFamily {
  double lambda = 0.0;

  std::optional<double> init_period;       // spatial period of the initial profile
  std::optional<double> forcing_period_t;  // time period of the forcing, if forced
  std::optional<double> forcing_period_x;  // space period of the forcing, if forced

  Spectrum init_modes;       // almost-periodic initial frequencies
  Spectrum forcing_modes_t;  // almost-periodic forcing time frequencies
  Spectrum forcing_modes_x;  // almost-periodic forcing space frequencies
};

// System description: families with pairwise distinct speeds plus the
// quadratic coupling coefficients (kept for completeness; the resonance
// checks only consume speeds, periods and spectra).
class SystemSpec {
 public:
  explicit SystemSpec(std::vector<WaveFamily> families);

  const std::vector<WaveFamily>& families() const { return families_; }
  int size() const { return int(families_.size()); }

  void set_coupling(int j, int k, int m, double value);
  double coupling(int j, int k, int m) const;

 private:
  std::vector<WaveFamily> families_;
  std::vector<double> coupling_; // n^3 entries, j-major
};

struct Witness {
  std::vector<long> integers;      // (l_t, l_x, l_1..l_n); zero where a slot does not apply
  std::vector<double> frequencies; // chosen frequencies for the frequency-based checks
  double divisor = 0.0;            // value of the combination at this witness
};

struct ResonanceVerdict {
  bool resonant = false;
  std::vector<Witness> witnesses;  // lexicographically smallest first
  long searched_bound = 0;
  double tolerance = 0.0;
};

inline constexpr double default_divisor_tol = 1e-10;
inline constexpr int default_bound = 16;

// Small-divisor check for periodic data: scans integer tuples (l_t, l_x,
// l_1..l_n) with 0 < max|l| <= bound and flags combinations
//   l_t/P_t + lambda_j*l_x/P_x + sum_{k != j} (lambda_j - lambda_k)*l_k/P_k
// that vanish within tol. Forcing slots are enumerated only when the
// corresponding period is set; initial periods of the other families are
// required. Witnesses found at a bound persist at any larger bound.
ResonanceVerdict check_small_divisors(const SystemSpec& spec, int j,
                                      int bound = default_bound,
                                      double tol = default_divisor_tol);
// single-threaded reference implementation, same output bit for bit
ResonanceVerdict check_small_divisors_serial(const SystemSpec& spec, int j,
                                             int bound = default_bound,
                                             double tol = default_divisor_tol);

// Almost-periodic variant: picks at most max_modes frequencies from each
// stored list (plus the "absent" choice) and tests
//   nu_t + nu_x*lambda_j + sum_{k != j} nu0_k*(lambda_j - lambda_k) != 0.
// Zero frequencies are not selectable (profiles are mean-free).
ResonanceVerdict check_almost_periodic(const SystemSpec& spec, int j,
                                       int max_modes = 16,
                                       double tol = default_divisor_tol);

// Shallow-water criterion: the coupled averaged system degenerates to two
// independent KdV equations iff no bottom frequency mu matches +-2 nu for a
// surface frequency nu. Resonant when such a pair exists.
ResonanceVerdict check_shallow_water_resonance(const Spectrum& h_modes,
                                               const Spectrum& z0_modes,
                                               double tol = default_divisor_tol);

} // namespace hyperavg::resonance

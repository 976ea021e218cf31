#pragma once

#include <complex>
#include <vector>

#include "hyperavg/grid.hpp"

namespace hyperavg {

// Amplitudes at or below this magnitude are treated as absent.
inline constexpr double spectrum_amp_eps = 1e-12;
// Two frequencies closer than this are the same mode.
inline constexpr double spectrum_freq_eps = 1e-10;

struct Mode {
  double frequency = 0.0;       // real-valued; integer multiples of 2*pi/P for grid data
  std::complex<double> amplitude{0.0, 0.0};
};

// Finite list of (frequency, complex amplitude) pairs, sorted by frequency,
// frequencies pairwise distinct, negligible amplitudes dropped. Real signals
// carry conjugate-symmetric mode pairs.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<Mode> modes); // merges duplicates, sorts, prunes

  const std::vector<Mode>& modes() const { return modes_; }
  bool empty() const { return modes_.empty(); }
  std::size_t size() const { return modes_.size(); }

  // amplitude at a frequency (0 if absent)
  std::complex<double> amplitude_at(double freq) const;

  // pointwise evaluation sum_k amp_k * exp(i*freq_k*y), real part
  double evaluate(double y) const;

  // true when modes come in conjugate pairs (real-valued signal)
  bool conjugate_symmetric(double tol = 1e-9) const;

 private:
  std::vector<Mode> modes_;
};

// Accumulates contributions mode by mode; nearby frequencies are merged.
class SpectrumBuilder {
 public:
  void add(double frequency, std::complex<double> amplitude);
  Spectrum build() const;

 private:
  std::vector<Mode> raw_;
};

Spectrum derivative(const Spectrum& s);          // multiply each mode by i*freq
Spectrum scaled(const Spectrum& s, std::complex<double> c);

} // namespace hyperavg

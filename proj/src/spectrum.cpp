#include "hyperavg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperavg {

namespace {

std::vector<Mode> normalize(std::vector<Mode> modes) {
  for (const Mode& m : modes)
    if (!std::isfinite(m.frequency) || !std::isfinite(m.amplitude.real()) ||
        !std::isfinite(m.amplitude.imag()))
      throw std::invalid_argument("Spectrum: non-finite mode");
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.frequency < b.frequency; });
  std::vector<Mode> out;
  for (const Mode& m : modes) {
    if (!out.empty() && std::abs(m.frequency - out.back().frequency) <= spectrum_freq_eps)
      out.back().amplitude += m.amplitude;
    else
      out.push_back(m);
  }
  std::erase_if(out, [](const Mode& m) { return std::abs(m.amplitude) <= spectrum_amp_eps; });
  return out;
}

} // namespace

Spectrum::Spectrum(std::vector<Mode> modes) : modes_(normalize(std::move(modes))) {}

std::complex<double> Spectrum::amplitude_at(double freq) const {
  for (const Mode& m : modes_)
    if (std::abs(m.frequency - freq) <= spectrum_freq_eps) return m.amplitude;
  return {0.0, 0.0};
}

double Spectrum::evaluate(double y) const {
  std::complex<double> acc{0.0, 0.0};
  for (const Mode& m : modes_)
    acc += m.amplitude * std::complex<double>(std::cos(m.frequency * y), std::sin(m.frequency * y));
  return acc.real();
}

bool Spectrum::conjugate_symmetric(double tol) const {
  for (const Mode& m : modes_) {
    const std::complex<double> mirror = amplitude_at(-m.frequency);
    if (std::abs(mirror - std::conj(m.amplitude)) > tol) return false;
  }
  return true;
}

void SpectrumBuilder::add(double frequency, std::complex<double> amplitude) {
  raw_.push_back({frequency, amplitude});
}

Spectrum SpectrumBuilder::build() const { return Spectrum(raw_); }

Spectrum derivative(const Spectrum& s) {
  std::vector<Mode> out;
  for (const Mode& m : s.modes())
    out.push_back({m.frequency, m.amplitude * std::complex<double>(0.0, m.frequency)});
  return Spectrum(std::move(out));
}

Spectrum scaled(const Spectrum& s, std::complex<double> c) {
  std::vector<Mode> out;
  for (const Mode& m : s.modes()) out.push_back({m.frequency, m.amplitude * c});
  return Spectrum(std::move(out));
}

} // namespace hyperavg

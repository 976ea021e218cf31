#pragma once

#include "hyperavg/grid.hpp"
#include "hyperavg/spectrum.hpp"

namespace hyperavg {

// Trigonometric interpolation coefficients of a real grid field. Frequencies
// are integer multiples of 2*pi/P; the Nyquist coefficient is split evenly
// between +M/2 and -M/2 so the result stays conjugate-symmetric. Inverse of
// inverse_fourier up to round-off for band-limited data.
Spectrum fourier_coeffs(const Field& f);

// Evaluate a spectrum on grid nodes (real part). Frequencies need not be
// grid-commensurate; synthesis is a direct mode sum.
Field inverse_fourier(const Spectrum& s, const PeriodicGrid& grid);

} // namespace hyperavg

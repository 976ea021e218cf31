#pragma once

#include <complex>
#include <vector>

namespace hyperavg {

using cplx = std::complex<double>;

// Unnormalized forward DFT: X_k = sum_j x_j exp(-2*pi*i*j*k/n).
// Radix-2 for power-of-two sizes, Bluestein otherwise. Deterministic
// operation order, so results are bit-reproducible across runs.
std::vector<cplx> fft(std::vector<cplx> a);

// Inverse DFT with 1/n normalization.
std::vector<cplx> ifft(std::vector<cplx> a);

} // namespace hyperavg

#include "hyperavg/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperavg {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative Cooley-Tukey, decimation in time. a.size() must be a power of two.
void fft_pow2(std::vector<cplx>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / double(len) * (invert ? 1.0 : -1.0);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (invert) {
    for (auto& x : a) x /= double(n);
  }
}

// Bluestein chirp-z transform: DFT of arbitrary size via a power-of-two FFT.
std::vector<cplx> bluestein(const std::vector<cplx>& a) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  // chirp[j] = exp(-i*pi*j^2/n); j^2 taken mod 2n to keep the angle accurate
  std::vector<cplx> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j2 = (j * j) % (2 * n);
    const double ang = std::numbers::pi * double(j2) / double(n);
    chirp[j] = cplx(std::cos(ang), -std::sin(ang));
  }

  std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) u[j] = a[j] * chirp[j];
  v[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) v[j] = v[m - j] = std::conj(chirp[j]);

  fft_pow2(u, false);
  fft_pow2(v, false);
  for (std::size_t j = 0; j < m; ++j) u[j] *= v[j];
  fft_pow2(u, true);

  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = u[j] * chirp[j];
  return out;
}

} // namespace

std::vector<cplx> fft(std::vector<cplx> a) {
  if (a.empty()) throw std::invalid_argument("fft: empty input");
  if (is_pow2(a.size())) {
    fft_pow2(a, false);
    return a;
  }
  return bluestein(a);
}

std::vector<cplx> ifft(std::vector<cplx> a) {
  const std::size_t n = a.size();
  for (auto& x : a) x = std::conj(x);
  a = fft(std::move(a));
  for (auto& x : a) x = std::conj(x) / double(n);
  return a;
}

} // namespace hyperavg

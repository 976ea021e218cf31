#include "hyperavg/fourier.hpp"

#include <cmath>

#include "hyperavg/fft.hpp"

namespace hyperavg {

Spectrum fourier_coeffs(const Field& f) {
  const int m = f.size();
  const double scale = two_pi / f.grid().period();

  std::vector<cplx> a(m);
  for (int j = 0; j < m; ++j) a[j] = cplx(f.values()[j], 0.0);
  a = fft(std::move(a));

  SpectrumBuilder b;
  for (int k = 0; k < m; ++k) {
    const cplx amp = a[k] / double(m);
    if (k == m / 2) {
      // Nyquist: split between +-M/2 to keep conjugate symmetry
      b.add(scale * (m / 2), amp * 0.5);
      b.add(-scale * (m / 2), amp * 0.5);
    } else {
      const int kk = (k <= m / 2) ? k : k - m;
      b.add(scale * kk, amp);
    }
  }
  return b.build();
}

Field inverse_fourier(const Spectrum& s, const PeriodicGrid& grid) {
  std::vector<double> v(grid.num_points(), 0.0);
  for (int j = 0; j < grid.num_points(); ++j) {
    const double y = grid.node(j);
    cplx acc{0.0, 0.0};
    for (const Mode& m : s.modes())
      acc += m.amplitude * cplx(std::cos(m.frequency * y), std::sin(m.frequency * y));
    v[j] = acc.real();
  }
  return Field(grid, std::move(v));
}

} // namespace hyperavg

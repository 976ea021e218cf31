#include "hyperavg/averaging.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hyperavg/fft.hpp"

namespace hyperavg::averaging {

namespace {

constexpr double pair_tol = 1e-10;

void require_coupling_grids(const Field& h_profile, const Field& v_new, const Field& v_old) {
  if (!(h_profile.grid() == v_new.grid()) || !(v_new.grid() == v_old.grid()))
    throw std::invalid_argument("coupling: fields on different grids");
  if (std::abs(h_profile.grid().period() - two_pi) > 1e-12)
    throw std::invalid_argument("coupling: grid period must be 2*pi");
}

double coupling_node(const Field& h_profile, const Field& v_new, const Field& v_old,
                     int j, int sgn) {
  const int m = h_profile.size();
  const double mesh = h_profile.grid().spacing();
  double acc = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double hv = h_profile[j + sgn * i];
    const double vv = 0.5 * (v_new[j + sgn * 2 * i] + v_old[j + sgn * 2 * i]);
    acc += hv * vv;
  }
  return acc * mesh / two_pi;
}

} // namespace

Spectrum spectral_average(const Spectrum& h_modes, const Spectrum& v_modes,
                          AverageDirection /*dir*/) {
  // Both directions keep the same pairs: the phase mu + 2 nu enters with
  // opposite signs, but only its vanishing matters.
  SpectrumBuilder b;
  for (const Mode& hm : h_modes.modes())
    for (const Mode& vm : v_modes.modes())
      if (std::abs(hm.frequency + 2.0 * vm.frequency) <= pair_tol)
        b.add(hm.frequency + vm.frequency, hm.amplitude * vm.amplitude);
  return b.build();
}

Spectrum mj_average_product(const std::vector<double>& lambda, int j, int k, int m,
                            const std::vector<Spectrum>& wave_modes, double tol) {
  const int n = int(lambda.size());
  if (n == 0 || int(wave_modes.size()) != n)
    throw std::invalid_argument("mj_average_product: need one spectrum per speed");
  if (j < 0 || j >= n || k < 0 || k >= n || m < 0 || m >= n)
    throw std::out_of_range("mj_average_product: family index");

  SpectrumBuilder b;
  for (const Mode& km : wave_modes[k].modes()) {
    for (const Mode& mm : wave_modes[m].modes()) {
      const double phase =
          km.frequency * (lambda[j] - lambda[k]) + mm.frequency * (lambda[j] - lambda[m]);
      if (std::abs(phase) <= tol) {
        const cplx damp = mm.amplitude * cplx(0.0, mm.frequency);
        b.add(km.frequency + mm.frequency, km.amplitude * damp);
      }
    }
  }
  return b.build();
}

double discrete_coupling(const Field& h_profile, const Field& v_new, const Field& v_old,
                         int j, AverageDirection dir) {
  require_coupling_grids(h_profile, v_new, v_old);
  return coupling_node(h_profile, v_new, v_old, j, dir == AverageDirection::plus ? -1 : +1);
}

Field coupling_profile_serial(const Field& h_profile, const Field& v_new, const Field& v_old,
                              AverageDirection dir) {
  require_coupling_grids(h_profile, v_new, v_old);
  const int m = h_profile.size();
  const int sgn = (dir == AverageDirection::plus) ? -1 : +1;
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = coupling_node(h_profile, v_new, v_old, j, sgn);
  return Field(h_profile.grid(), std::move(out));
}

Field coupling_profile(const Field& h_profile, const Field& v_new, const Field& v_old,
                       AverageDirection dir) {
  require_coupling_grids(h_profile, v_new, v_old);
  const int m = h_profile.size();
  const int sgn = (dir == AverageDirection::plus) ? -1 : +1;
  std::vector<double> out(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) out[j] = coupling_node(h_profile, v_new, v_old, j, sgn);
  return Field(h_profile.grid(), std::move(out));
}

Field coupling_term_derivative(const Field& h_profile, const Field& v_new,
                               const Field& v_old, AverageDirection dir) {
  const Field f = coupling_profile(h_profile, v_new, v_old, dir);
  const int m = f.size();
  const double inv4h = 1.0 / (4.0 * f.grid().spacing());
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = (f[j + 1] - f[j - 1]) * inv4h;
  return Field(f.grid(), std::move(out));
}

} // namespace hyperavg::averaging

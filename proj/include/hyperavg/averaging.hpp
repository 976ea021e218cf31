#pragma once

#include "hyperavg/field_ops.hpp"
#include "hyperavg/grid.hpp"
#include "hyperavg/spectrum.hpp"

namespace hyperavg::averaging {

// Direction of the characteristic average:
//   plus : <h V->_+ (y) = lim 1/T int_0^T h(y + s) V(y + 2s) ds
//   minus: <h V+>_- (y) = lim 1/T int_0^T h(y - s) V(y - 2s) ds
enum class AverageDirection { plus, minus };

// Long-time average of h(x)*V along a characteristic, in closed form on
// spectra: a mode pair (mu from h, nu from V) survives iff mu + 2 nu = 0 and
// contributes amplitude h_mu * V_nu at output frequency mu + nu = -nu.
Spectrum spectral_average(const Spectrum& h_modes, const Spectrum& v_modes,
                          AverageDirection dir);

// Average of w_k * d(w_m)/dy_m along the j-th characteristic for a system
// with speeds lambda: a pair (nu_k, nu_m) survives iff
//   nu_k (lambda_j - lambda_k) + nu_m (lambda_j - lambda_m) = 0
// and contributes a_k * (i nu_m) * b_m at frequency nu_k + nu_m.
Spectrum mj_average_product(const std::vector<double>& lambda, int j, int k, int m,
                            const std::vector<Spectrum>& wave_modes,
                            double tol = 1e-10);

// Discrete counterpart of the characteristic average, one node:
//   F_+(vn, vo, j) = 1/(2 pi) sum_{i=1..M} h_{j-i} * (vn_{j-2i}+vo_{j-2i})/2 * mesh
//   F_-(vn, vo, j) = 1/(2 pi) sum_{i=1..M} h_{j+i} * (vn_{j+2i}+vo_{j+2i})/2 * mesh
// (vn, vo) are the two time levels entering the Crank-Nicolson average.
// Requires period 2*pi and all fields on one grid.
double discrete_coupling(const Field& h_profile, const Field& v_new, const Field& v_old,
                         int j, AverageDirection dir);

// F evaluated at every node. The per-node sums are independent; the parallel
// version splits nodes across threads and is bit-identical to the serial one.
Field coupling_profile(const Field& h_profile, const Field& v_new, const Field& v_old,
                       AverageDirection dir);
Field coupling_profile_serial(const Field& h_profile, const Field& v_new, const Field& v_old,
                              AverageDirection dir);

// Centered difference of the coupling profile: (F(j+1) - F(j-1)) / (4 mesh).
// Approximates one half of d/dy of the continuous average.
Field coupling_term_derivative(const Field& h_profile, const Field& v_new,
                               const Field& v_old, AverageDirection dir);

} // namespace hyperavg::averaging

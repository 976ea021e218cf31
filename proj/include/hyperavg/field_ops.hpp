#pragma once

#include "hyperavg/grid.hpp"

namespace hyperavg {

double mean(const Field& f);
Field remove_mean(const Field& f);

// second-order central first difference: (v_{j+1} - v_{j-1}) / (2h)
Field d_central(const Field& f);

// second-order third difference, composed backward/forward/central stencil:
// (v_{j+2} - 2 v_{j+1} + 2 v_{j-1} - v_{j-2}) / (2 h^3)
Field d3(const Field& f);

// max_j |a_j - b_j|
double sup_norm(const Field& a, const Field& b);
double sup_norm(const Field& a);

// root mean square of the difference
double l2_norm(const Field& a, const Field& b);
double l2_norm(const Field& a);

// elementwise helpers used throughout the solvers
Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field mul(const Field& a, const Field& b);
Field axpy(double alpha, const Field& x, const Field& y); // alpha*x + y
Field scale(const Field& a, double alpha);

} // namespace hyperavg

#include "hyperavg/field_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperavg {

namespace {

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields on different grids");
}

} // namespace

double mean(const Field& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / f.size();
}

Field remove_mean(const Field& f) {
  const double mu = mean(f);
  std::vector<double> v(f.values());
  for (double& x : v) x -= mu;
  return Field(f.grid(), std::move(v));
}

Field d_central(const Field& f) {
  const int m = f.size();
  const double inv2h = 1.0 / (2.0 * f.grid().spacing());
  std::vector<double> v(m);
  for (int j = 0; j < m; ++j) v[j] = (f[j + 1] - f[j - 1]) * inv2h;
  return Field(f.grid(), std::move(v));
}

Field d3(const Field& f) {
  const int m = f.size();
  const double h = f.grid().spacing();
  const double inv2h3 = 1.0 / (2.0 * h * h * h);
  std::vector<double> v(m);
  for (int j = 0; j < m; ++j)
    v[j] = (f[j + 2] - 2.0 * f[j + 1] + 2.0 * f[j - 1] - f[j - 2]) * inv2h3;
  return Field(f.grid(), std::move(v));
}

double sup_norm(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a.values()[j] - b.values()[j]));
  return s;
}

double sup_norm(const Field& a) {
  double s = 0.0;
  for (double v : a.values()) s = std::max(s, std::abs(v));
  return s;
}

double l2_norm(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    const double d = a.values()[j] - b.values()[j];
    s += d * d;
  }
  return std::sqrt(s / a.size());
}

double l2_norm(const Field& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s / a.size());
}

Field add(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a.values()[j] + b.values()[j];
  return Field(a.grid(), std::move(v));
}

Field sub(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a.values()[j] - b.values()[j];
  return Field(a.grid(), std::move(v));
}

Field mul(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = a.values()[j] * b.values()[j];
  return Field(a.grid(), std::move(v));
}

Field axpy(double alpha, const Field& x, const Field& y) {
  require_same_grid(x, y);
  std::vector<double> v(x.size());
  for (int j = 0; j < x.size(); ++j) v[j] = alpha * x.values()[j] + y.values()[j];
  return Field(x.grid(), std::move(v));
}

Field scale(const Field& a, double alpha) {
  std::vector<double> v(a.size());
  for (int j = 0; j < a.size(); ++j) v[j] = alpha * a.values()[j];
  return Field(a.grid(), std::move(v));
}

} // namespace hyperavg

#pragma once

#include <functional>
#include <numbers>
#include <vector>

namespace hyperavg {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform periodic grid: nodes y_j = j*h, h = P/M, j = 0..M-1.
// M must be even (the coupling quadrature uses j +- 2i node shifts) and >= 8.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(int num_points, double period = two_pi);

  int num_points() const { return m_; }
  double period() const { return period_; }
  double spacing() const { return period_ / m_; }
  double node(int j) const { return spacing() * wrap(j); }

  // wraps any integer index into [0, M)
  int wrap(int j) const {
    int r = j % m_;
    return r < 0 ? r + m_ : r;
  }

  bool operator==(const PeriodicGrid& other) const = default;

 private:
  int m_;
  double period_;
};

// Grid samples of a real periodic function. Values are validated finite on
// construction and treated as immutable afterwards.
class Field {
 public:
  Field(PeriodicGrid grid, std::vector<double> values);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return grid_.num_points(); }

  // periodic (wrapped) element access
  double operator[](int j) const { return values_[grid_.wrap(j)]; }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

Field make_zero_field(const PeriodicGrid& grid);
Field sample(const PeriodicGrid& grid, const std::function<double(double)>& f);

// State of the averaged system at one slow time: (V+, V-) profiles.
struct FieldPair {
  Field vplus;
  Field vminus;
  double tau = 0.0;

  FieldPair(Field vp, Field vm, double t = 0.0);
};

} // namespace hyperavg

#include "hyperavg/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperavg {

PeriodicGrid::PeriodicGrid(int num_points, double period)
    : m_(num_points), period_(period) {
  if (m_ < 8) throw std::invalid_argument("PeriodicGrid: need at least 8 points, got " + std::to_string(m_));
  if (m_ % 2 != 0) throw std::invalid_argument("PeriodicGrid: point count must be even, got " + std::to_string(m_));
  if (!(period_ > 0.0) || !std::isfinite(period_))
    throw std::invalid_argument("PeriodicGrid: period must be positive and finite");
}

Field::Field(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (int(values_.size()) != grid_.num_points())
    throw std::invalid_argument("Field: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite value");
}

Field make_zero_field(const PeriodicGrid& grid) {
  return Field(grid, std::vector<double>(grid.num_points(), 0.0));
}

Field sample(const PeriodicGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.num_points());
  for (int j = 0; j < grid.num_points(); ++j) v[j] = f(grid.node(j));
  return Field(grid, std::move(v));
}

FieldPair::FieldPair(Field vp, Field vm, double t)
    : vplus(std::move(vp)), vminus(std::move(vm)), tau(t) {
  if (!(vplus.grid() == vminus.grid()))
    throw std::invalid_argument("FieldPair: components on different grids");
}

} // namespace hyperavg

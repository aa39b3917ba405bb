#include "rsgame/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace rsg {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("TimeGrid: need at least 2 points");
  mesh_ = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const double step = points_[i + 1] - points_[i];
    if (step <= 0.0) throw std::invalid_argument("TimeGrid: points must be strictly increasing");
    mesh_ = std::max(mesh_, step);
  }
}

TimeGrid TimeGrid::uniform(double t0, double T, std::size_t num_steps) {
  if (num_steps == 0 || T <= t0) throw std::invalid_argument("TimeGrid::uniform: bad arguments");
  std::vector<double> pts(num_steps + 1);
  const double dt = (T - t0) / static_cast<double>(num_steps);
  for (std::size_t i = 0; i <= num_steps; ++i) pts[i] = t0 + static_cast<double>(i) * dt;
  pts.back() = T;
  return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::segment(std::size_t i1, std::size_t i2) const {
  if (i1 >= i2 || i2 >= points_.size()) throw std::invalid_argument("TimeGrid::segment: bad indices");
  return TimeGrid(std::vector<double>(points_.begin() + static_cast<std::ptrdiff_t>(i1),
                                      points_.begin() + static_cast<std::ptrdiff_t>(i2) + 1));
}

}  // namespace rsg

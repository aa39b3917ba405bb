#pragma once

#include <cstddef>
#include <vector>

namespace rsg {

/// Strictly increasing time partition of [t0, T].
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> points);

  static TimeGrid uniform(double t0, double T, std::size_t num_steps);

  double t0() const { return points_.front(); }
  double horizon() const { return points_.back(); }
  std::size_t num_points() const { return points_.size(); }
  std::size_t num_steps() const { return points_.size() - 1; }
  double point(std::size_t i) const { return points_[i]; }
  double dt(std::size_t i) const { return points_[i + 1] - points_[i]; }
  double mesh() const { return mesh_; }
  const std::vector<double>& points() const { return points_; }

  /// Sub-grid over point indices [i1, i2].
  TimeGrid segment(std::size_t i1, std::size_t i2) const;

 private:
  std::vector<double> points_;
  double mesh_ = 0.0;
};

}  // namespace rsg

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgame/game_spec.hpp"
#include "rsgame/grid.hpp"

namespace rsg {

enum class HamiltonianMode { Minus, Plus };  // sup-inf vs inf-sup

/// Uniform 1-D spatial grid on [x_min, x_max].
struct SpaceGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t num_points = 0;

  double dx() const { return (x_max - x_min) / static_cast<double>(num_points - 1); }
  double point(std::size_t k) const { return x_min + static_cast<double>(k) * dx(); }
  void validate() const;
};

enum class ValueProvenance { Pde, Dp };

/// Value function tabulated on a time-space lattice. Row i is time point i
/// (row 0 = initial time, last row = horizon), column k is space node k.
struct ValueGrid {
  TimeGrid times;
  SpaceGrid space;
  Mat values;  // (num time points) x (num space points)
  int player = 1;
  HamiltonianMode mode = HamiltonianMode::Minus;
  ValueProvenance provenance = ValueProvenance::Pde;

  double at(std::size_t time_index, std::size_t space_index) const {
    return values(static_cast<Eigen::Index>(time_index), static_cast<Eigen::Index>(space_index));
  }
  /// Linear interpolation in space at a fixed time index.
  double interpolate(std::size_t time_index, double x) const;
};

struct HamiltonianReport {
  double minus = 0.0;  // sup_u inf_v
  double plus = 0.0;   // inf_v sup_u
  double gap = 0.0;    // plus - minus, always >= 0
  std::size_t argmax_u = 0;  // achieving the minus value
  std::size_t argmin_v = 0;
  double value = 0.0;  // value of the requested mode
};

/// Exhaustive sup-inf / inf-sup enumeration of
/// H_j = 1/2 sigma^2 A + p b + f_j(t, x, y, p sigma, u, v)
/// over the finite control grids. Ties break toward the lowest index.
HamiltonianReport hamiltonian(const GameSpec& spec, int j, double t, double x, double y,
                              double p, double A, HamiltonianMode mode);

/// Monotone explicit backward scheme for the obstacle Isaacs equation
/// min{W - h_j, -dW/dt - H_j^mode(t, x, W, DW, D^2 W)} = 0, W(T,.) = Phi_j.
/// Upwind first differences per control candidate, central second
/// differences, zero-curvature linear extrapolation at the boundary.
/// Throws when the CFL bound dt <= dx^2 / (sup sigma^2 + dx sup|b|) fails.
ValueGrid solve_obstacle_isaacs(const GameSpec& spec, int j, HamiltonianMode mode,
                                const TimeGrid& times, const SpaceGrid& space);

/// Max over interior nodes of |min{W - h, -dtW - H}| in the discrete sense
/// used by the scheme above.
double residual_check(const ValueGrid& grid, const GameSpec& spec);

struct IsaacsScanResult {
  double max_gap = 0.0;
  double mean_gap = 0.0;
  bool satisfied = false;  // max_gap <= 1e-9
};

/// Samples (t, x, y, p, A) tuples and reports the worst H^+ - H^- gap over
/// both players.
IsaacsScanResult isaacs_scan(const GameSpec& spec, double T, double x_radius,
                             std::size_t samples, std::uint64_t seed);

struct SchemeOrderingReport {
  std::size_t violations = 0;
  double max_excess = 0.0;  // max W_A - W_B over violating nodes
  double max_gap = 0.0;     // max W_B - W_A anywhere
};

/// Solves both specs (which must satisfy Phi_A <= Phi_B, f_A <= f_B,
/// h_A <= h_B on the grid; checked) and reports order violations.
SchemeOrderingReport scheme_comparison_test(const GameSpec& spec_a, const GameSpec& spec_b,
                                            int j, HamiltonianMode mode, const TimeGrid& times,
                                            const SpaceGrid& space);

}  // namespace rsg

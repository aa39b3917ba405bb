#pragma once

#include <cstddef>
#include <vector>

#include "rsgame/game_spec.hpp"
#include "rsgame/grid.hpp"

namespace rsg {

/// One lattice branch set: up to three children with probabilities summing
/// to 1 and the Brownian-increment estimate associated with each branch.
struct LatticeTransition {
  int child[3] = {0, 0, 0};
  double prob[3] = {0.0, 0.0, 0.0};
  double db[3] = {0.0, 0.0, 0.0};
  int count = 0;
};

/// Recombining 1-D lattice whose per-node transition probabilities reproduce
/// the first two moments of the Euler step. Conditional expectations on it
/// are exact, which is what makes it usable as an oracle.
class LatticeModel {
 public:
  enum class Kind { BinomialCRR, Trinomial };

  /// Cox-Ross-Rubinstein geometric lattice; probabilities are control-free.
  static LatticeModel binomial_crr(double x0, double sigma, double rate, TimeGrid grid);

  /// Additive trinomial lattice with spacing dx; probabilities are
  /// moment-matched per node and per control pair against `spec`.
  /// The spec must outlive the lattice.
  static LatticeModel trinomial(const GameSpec& spec, double x0, TimeGrid grid, double dx);

  /// Spacing sqrt(3) * sup|sigma| * sqrt(mesh), the usual stability choice.
  static double default_spacing(const GameSpec& spec, const TimeGrid& grid);

  Kind kind() const { return kind_; }
  const TimeGrid& grid() const { return grid_; }
  std::size_t depth() const { return grid_.num_steps(); }
  std::size_t num_nodes(std::size_t level) const { return states_[level].size(); }
  double state(std::size_t level, std::size_t node) const { return states_[level][node]; }
  double x0() const { return states_[0][0]; }
  double dx() const { return dx_; }

  LatticeTransition transition(std::size_t level, std::size_t node,
                               const Vec& u, const Vec& v) const;

  /// Terminal-to-root expectation of a terminal payoff under fixed controls
  /// (driver-free backward pass; handy as an independent check).
  double expectation(const std::vector<double>& terminal_values,
                     const ControlPath& u, const ControlPath& v,
                     const GameSpec& spec) const;

 private:
  Kind kind_ = Kind::Trinomial;
  TimeGrid grid_;
  std::vector<std::vector<double>> states_;
  double dx_ = 0.0;
  // binomial parameters
  double up_ = 0.0, down_ = 0.0, p_up_ = 0.0, sigma_ = 0.0;
  const GameSpec* spec_ = nullptr;
};

}  // namespace rsg

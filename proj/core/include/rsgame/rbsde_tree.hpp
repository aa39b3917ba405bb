#pragma once

#include <functional>
#include <vector>

#include "rsgame/game_spec.hpp"
#include "rsgame/lattice.hpp"

namespace rsg {

/// Reflected BSDE data posed on a lattice: driver f(t,x,y,z), terminal
/// payoff xi(x) and lower obstacle s(t,x).
struct LatticeProblem {
  std::function<double(double t, double x, double y, double z)> driver;
  std::function<double(double x)> terminal;
  std::function<double(double t, double x)> obstacle;
};

/// Discrete (Y, Z, K) triple on the lattice. dk[i][k] is the reflection
/// increment applied at level i, node k; K is its running sum along any path.
struct LatticeSolution {
  std::vector<std::vector<double>> y;   // levels 0..n
  std::vector<std::vector<double>> z;   // levels 0..n-1
  std::vector<std::vector<double>> dk;  // levels 0..n-1 (and level n where xi < s is impossible)
  double y0 = 0.0;
  double skorokhod_residual = 0.0;      // max |(y - s) * dk| over nodes
};

struct TreeOptions {
  int max_fixed_point_iters = 20;
  double fixed_point_tol = 1e-12;
};

/// Backward induction with exact lattice expectations. Each step solves the
/// implicit-in-y equation yhat = E[Y_{i+1}] + f(t, x, yhat, z) dt by fixed
/// point, then projects: y = max(yhat, s), dk = y - yhat.
LatticeSolution solve_tree(const LatticeModel& lattice, const LatticeProblem& problem,
                           const GameSpec& spec, const ControlPath& u, const ControlPath& v,
                           const TreeOptions& opt = {});

/// Same recursion over levels [i1, i2] only, starting from given terminal
/// values at level i2. Throws if any terminal value sits below the obstacle.
LatticeSolution solve_tree_segment(const LatticeModel& lattice, const LatticeProblem& problem,
                                   const GameSpec& spec, const ControlPath& u,
                                   const ControlPath& v, std::size_t i1, std::size_t i2,
                                   const std::vector<double>& terminal_values,
                                   const TreeOptions& opt = {});

/// Penalized (unreflected) variant: driver f + lambda * (s - y)^+ with no
/// projection. The scalar implicit equation is solved exactly per node, so
/// large lambda * dt is fine.
LatticeSolution solve_penalized_tree(const LatticeModel& lattice, const LatticeProblem& problem,
                                     const GameSpec& spec, const ControlPath& u,
                                     const ControlPath& v, double lambda);

struct OrderingReport {
  std::size_t y_violations = 0;   // nodes with Y_A > Y_B + tol
  double max_y_excess = 0.0;
  std::size_t dk_violations = 0;  // nodes with dK_A < dK_B - tol
  double max_dk_deficit = 0.0;
};

/// Pointwise order check Y_A <= Y_B (and, for equal obstacles, dK_A >= dK_B).
OrderingReport compare_solutions(const LatticeSolution& a, const LatticeSolution& b,
                                 bool check_dk = false, double tol = 1e-12);

}  // namespace rsg

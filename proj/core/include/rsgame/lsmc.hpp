#pragma once

#include <functional>
#include <vector>

#include "rsgame/sde.hpp"

namespace rsg {

/// Regression basis: monomials of the state up to `degree` plus, when it
/// actually varies across paths, the obstacle itself (captures the kink).
struct BasisSpec {
  int degree = 3;
  bool include_obstacle = true;
};

/// Reflected BSDE data along simulated paths. `driver` sees the step index
/// and path index (state access goes through the bundle), `terminal` is per
/// path and `obstacle[i][p]` is the barrier at grid point i on path p.
struct PathProblem {
  std::function<double(std::size_t step, std::size_t path, double y, const Vec& z)> driver;
  std::vector<double> terminal;
  std::vector<std::vector<double>> obstacle;
  std::function<double(double x)> obstacle_shape;  // basis element; may be empty
};

/// Builds the doubly controlled problem (driver f_j, obstacle h_j, terminal
/// Phi_j) for player j on an existing bundle under piecewise controls.
PathProblem make_path_problem(const GameSpec& spec, const PathBundle& bundle, int j,
                              const ControlPath& u, const ControlPath& v);

struct PathSolution {
  std::vector<std::vector<double>> y;   // [grid point][path]
  std::vector<Mat> z;                   // [interval] (paths x noise_dim)
  std::vector<std::vector<double>> dk;  // [interval][path]
  double y0 = 0.0;
  double y0_stderr = 0.0;
  std::vector<double> regression_residual;  // RMS residual per regression step
};

/// Least-squares Monte Carlo backward recursion: conditional expectations of
/// Y_{i+1} and Y_{i+1} dB_i / dt are replaced by regressions on the state,
/// then the same implicit driver step and projection as the tree solver.
PathSolution solve_lsmc(const PathBundle& bundle, const PathProblem& problem,
                        const BasisSpec& basis = {});

/// Penalized unreflected recursion with driver f + lambda (S - y)^+.
PathSolution solve_penalized_lsmc(const PathBundle& bundle, const PathProblem& problem,
                                  double lambda, const BasisSpec& basis = {});

/// LSMC over grid points [i1, i2] only, starting from per-path terminal
/// values eta. Throws, listing offending paths, if eta drops below the
/// obstacle at i2.
PathSolution solve_lsmc_segment(const PathBundle& bundle, const PathProblem& problem,
                                std::size_t i1, std::size_t i2,
                                const std::vector<double>& eta, const BasisSpec& basis = {});

}  // namespace rsg

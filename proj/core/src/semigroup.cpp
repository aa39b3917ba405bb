#include "rsgame/semigroup.hpp"

#include <stdexcept>

namespace rsg {
namespace {

LatticeProblem lattice_problem(const GameSpec& spec, int j, const ControlPath& u,
                               const ControlPath& v, const TimeGrid& grid) {
  LatticeProblem problem;
  problem.driver = [&spec, j, u, v, &grid](double t, double x, double y, double z) {
    // locate the interval containing t (piecewise-constant controls)
    std::size_t i = 0;
    while (i + 1 < grid.num_steps() && grid.point(i + 1) <= t + 1e-14) ++i;
    Vec xv(1), zv(1);
    xv[0] = x;
    zv[0] = z;
    return spec.cost(j)(t, xv, y, zv, spec.u_set[static_cast<std::size_t>(u[i])],
                        spec.v_set[static_cast<std::size_t>(v[i])]);
  };
  problem.terminal = [&spec, j](double x) {
    Vec xv(1);
    xv[0] = x;
    return spec.terminal(j)(xv);
  };
  problem.obstacle = [&spec, j](double t, double x) {
    Vec xv(1);
    xv[0] = x;
    return spec.barrier(j)(t, xv);
  };
  return problem;
}

}  // namespace

std::vector<double> semigroup_lattice(const GameSpec& spec, const LatticeModel& lattice, int j,
                                      const ControlPath& u, const ControlPath& v,
                                      std::size_t i1, std::size_t i2,
                                      const std::vector<double>& eta) {
  const LatticeProblem problem = lattice_problem(spec, j, u, v, lattice.grid());
  const LatticeSolution sol = solve_tree_segment(lattice, problem, spec, u, v, i1, i2, eta);
  return sol.y[0];
}

std::vector<double> semigroup_paths(const GameSpec& spec, const PathBundle& bundle, int j,
                                    const ControlPath& u, const ControlPath& v,
                                    std::size_t i1, std::size_t i2,
                                    const std::vector<double>& eta, const BasisSpec& basis) {
  const PathProblem problem = make_path_problem(spec, bundle, j, u, v);
  const PathSolution sol = solve_lsmc_segment(bundle, problem, i1, i2, eta, basis);
  return sol.y[0];
}

double cost_functional_lattice(const GameSpec& spec, const LatticeModel& lattice, int j,
                               const ControlPath& u, const ControlPath& v) {
  const LatticeProblem problem = lattice_problem(spec, j, u, v, lattice.grid());
  return solve_tree(lattice, problem, spec, u, v).y0;
}

double cost_functional_paths(const GameSpec& spec, const PathBundle& bundle, int j,
                             const ControlPath& u, const ControlPath& v, double* stderr_out) {
  const PathProblem problem = make_path_problem(spec, bundle, j, u, v);
  const PathSolution sol = solve_lsmc(bundle, problem);
  if (stderr_out) *stderr_out = sol.y0_stderr;
  return sol.y0;
}

}  // namespace rsg

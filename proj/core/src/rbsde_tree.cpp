#include "rsgame/rbsde_tree.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsg {
namespace {

double implicit_driver_step(const LatticeProblem& problem, double t, double x,
                            double expectation, double z, double dt,
                            const TreeOptions& opt, std::size_t level) {
  double y = expectation;
  for (int it = 0; it < opt.max_fixed_point_iters; ++it) {
    const double next = expectation + problem.driver(t, x, y, z) * dt;
    if (std::abs(next - y) <= opt.fixed_point_tol) return next;
    y = next;
  }
  // contraction requires L*dt < 1; diagnose rather than return garbage
  const double next = expectation + problem.driver(t, x, y, z) * dt;
  if (std::abs(next - y) > 1e-6)
    throw std::runtime_error(
        "solve_tree: driver fixed point did not converge at level " + std::to_string(level) +
        " (likely Lipschitz-in-y constant times dt >= 1; refine the time grid)");
  return next;
}

LatticeSolution backward_pass(const LatticeModel& lattice, const LatticeProblem& problem,
                              const GameSpec& spec, const ControlPath& u, const ControlPath& v,
                              std::size_t i1, std::size_t i2,
                              const std::vector<double>& terminal_values,
                              const TreeOptions& opt, bool reflect, double lambda) {
  if (terminal_values.size() != lattice.num_nodes(i2))
    throw std::invalid_argument("backward_pass: terminal values size mismatch");

  LatticeSolution sol;
  const std::size_t span = i2 - i1;
  sol.y.resize(span + 1);
  sol.z.resize(span);
  sol.dk.resize(span);
  sol.y[span] = terminal_values;

  // terminal must dominate the obstacle when reflecting
  if (reflect) {
    const double tT = lattice.grid().point(i2);
    for (std::size_t k = 0; k < terminal_values.size(); ++k)
      if (terminal_values[k] < problem.obstacle(tT, lattice.state(i2, k)) - 1e-12)
        throw std::runtime_error("solve_tree: terminal value below obstacle at node " +
                                 std::to_string(k));
  }

  for (std::size_t i = i2; i-- > i1;) {
    const std::size_t li = i - i1;
    const double t = lattice.grid().point(i);
    const double dt = lattice.grid().dt(i);
    const Vec& uu = spec.u_set[static_cast<std::size_t>(u[i])];
    const Vec& vv = spec.v_set[static_cast<std::size_t>(v[i])];
    const std::size_t nodes = lattice.num_nodes(i);
    sol.y[li].resize(nodes);
    sol.z[li].resize(nodes);
    sol.dk[li].resize(nodes);

    for (std::size_t k = 0; k < nodes; ++k) {
      const LatticeTransition tr = lattice.transition(i, k, uu, vv);
      double ey = 0.0, eydb = 0.0;
      for (int c = 0; c < tr.count; ++c) {
        const double ynext = sol.y[li + 1][static_cast<std::size_t>(tr.child[c])];
        ey += tr.prob[c] * ynext;
        eydb += tr.prob[c] * ynext * tr.db[c];
      }
      const double x = lattice.state(i, k);
      const double z = eydb / dt;
      sol.z[li][k] = z;

      if (reflect) {
        const double yhat = implicit_driver_step(problem, t, x, ey, z, dt, opt, i);
        const double s = problem.obstacle(t, x);
        const double y = std::max(yhat, s);
        sol.y[li][k] = y;
        sol.dk[li][k] = y - yhat;
        sol.skorokhod_residual =
            std::max(sol.skorokhod_residual, std::abs((y - s) * (y - yhat)));
      } else {
        // exact root of g(y) = y - ey - [f(y) + lambda (s-y)^+] dt, monotone
        // increasing in y for L*dt < 1; bisection on a safe bracket
        const double s = problem.obstacle(t, x);
        auto g = [&](double yy) {
          const double pen = lambda * std::max(0.0, s - yy);
          return yy - ey - (problem.driver(t, x, yy, z) + pen) * dt;
        };
        double lo = ey, hi = ey;
        double width = std::max(1.0, std::abs(ey)) * 0.5;
        while (g(lo) > 0.0) { lo -= width; width *= 2.0; }
        width = std::max(1.0, std::abs(ey)) * 0.5;
        while (g(hi) < 0.0) { hi += width; width *= 2.0; }
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          (g(mid) < 0.0 ? lo : hi) = mid;
        }
        sol.y[li][k] = 0.5 * (lo + hi);
        sol.dk[li][k] = 0.0;
      }
    }
  }
  sol.y0 = sol.y[0][0];
  return sol;
}

}  // namespace

LatticeSolution solve_tree(const LatticeModel& lattice, const LatticeProblem& problem,
                           const GameSpec& spec, const ControlPath& u, const ControlPath& v,
                           const TreeOptions& opt) {
  const std::size_t n = lattice.depth();
  std::vector<double> terminal(lattice.num_nodes(n));
  for (std::size_t k = 0; k < terminal.size(); ++k)
    terminal[k] = problem.terminal(lattice.state(n, k));
  return backward_pass(lattice, problem, spec, u, v, 0, n, terminal, opt, true, 0.0);
}

LatticeSolution solve_tree_segment(const LatticeModel& lattice, const LatticeProblem& problem,
                                   const GameSpec& spec, const ControlPath& u,
                                   const ControlPath& v, std::size_t i1, std::size_t i2,
                                   const std::vector<double>& terminal_values,
                                   const TreeOptions& opt) {
  if (i1 >= i2 || i2 > lattice.depth())
    throw std::invalid_argument("solve_tree_segment: bad level indices");
  return backward_pass(lattice, problem, spec, u, v, i1, i2, terminal_values, opt, true, 0.0);
}

LatticeSolution solve_penalized_tree(const LatticeModel& lattice, const LatticeProblem& problem,
                                     const GameSpec& spec, const ControlPath& u,
                                     const ControlPath& v, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("solve_penalized_tree: lambda must be >= 0");
  const std::size_t n = lattice.depth();
  std::vector<double> terminal(lattice.num_nodes(n));
  for (std::size_t k = 0; k < terminal.size(); ++k)
    terminal[k] = problem.terminal(lattice.state(n, k));
  return backward_pass(lattice, problem, spec, u, v, 0, n, terminal, {}, false, lambda);
}

OrderingReport compare_solutions(const LatticeSolution& a, const LatticeSolution& b,
                                 bool check_dk, double tol) {
  if (a.y.size() != b.y.size())
    throw std::invalid_argument("compare_solutions: depth mismatch");
  OrderingReport rep;
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    if (a.y[i].size() != b.y[i].size())
      throw std::invalid_argument("compare_solutions: level size mismatch");
    for (std::size_t k = 0; k < a.y[i].size(); ++k) {
      const double excess = a.y[i][k] - b.y[i][k];
      if (excess > tol) {
        ++rep.y_violations;
        rep.max_y_excess = std::max(rep.max_y_excess, excess);
      }
    }
  }
  if (check_dk) {
    for (std::size_t i = 0; i < a.dk.size(); ++i) {
      for (std::size_t k = 0; k < a.dk[i].size(); ++k) {
        const double deficit = b.dk[i][k] - a.dk[i][k];
        if (deficit > tol) {
          ++rep.dk_violations;
          rep.max_dk_deficit = std::max(rep.max_dk_deficit, deficit);
        }
      }
    }
  }
  return rep;
}

}  // namespace rsg

#include "rsgame/lsmc.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsg {

PathProblem make_path_problem(const GameSpec& spec, const PathBundle& bundle, int j,
                              const ControlPath& u, const ControlPath& v) {
  const std::size_t steps = bundle.grid.num_steps();
  if (u.size() != steps || v.size() != steps)
    throw std::invalid_argument("make_path_problem: control length mismatch");

  PathProblem problem;
  problem.driver = [&spec, &bundle, j, u, v](std::size_t i, std::size_t p, double y,
                                             const Vec& z) {
    const double t = bundle.grid.point(i);
    const Vec x = bundle.states[p].row(i).transpose();
    return spec.cost(j)(t, x, y, z, spec.u_set[static_cast<std::size_t>(u[i])],
                        spec.v_set[static_cast<std::size_t>(v[i])]);
  };
  problem.terminal.resize(bundle.num_paths());
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    problem.terminal[p] = spec.terminal(j)(bundle.states[p].row(steps).transpose());
  problem.obstacle.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    problem.obstacle[i].resize(bundle.num_paths());
    const double t = bundle.grid.point(i);
    for (std::size_t p = 0; p < bundle.num_paths(); ++p)
      problem.obstacle[i][p] = spec.barrier(j)(t, bundle.states[p].row(i).transpose());
  }
  const double t_mid = 0.5 * (bundle.grid.t0() + bundle.grid.horizon());
  problem.obstacle_shape = [&spec, j, t_mid](double x) {
    Vec xv(1);
    xv[0] = x;
    return spec.barrier(j)(t_mid, xv);
  };
  return problem;
}

namespace {

// Design matrix at one grid point: constant, scaled monomials, and the
// obstacle shape when it is not (numerically) constant across paths.
Mat build_design(const PathBundle& bundle, const PathProblem& problem, std::size_t i,
                 const BasisSpec& basis, std::size_t* cols_out) {
  const std::size_t paths = bundle.num_paths();
  double mean = 0.0, sq = 0.0;
  for (std::size_t p = 0; p < paths; ++p) {
    const double x = bundle.state1(p, i);
    mean += x;
    sq += x * x;
  }
  mean /= static_cast<double>(paths);
  const double sd = std::sqrt(std::max(1e-300, sq / static_cast<double>(paths) - mean * mean));

  bool use_obstacle = false;
  if (basis.include_obstacle && problem.obstacle_shape && i < problem.obstacle.size()) {
    double lo = problem.obstacle[i][0], hi = lo;
    for (std::size_t p = 1; p < paths; ++p) {
      lo = std::min(lo, problem.obstacle[i][p]);
      hi = std::max(hi, problem.obstacle[i][p]);
    }
    use_obstacle = hi - lo > 1e-8;
  }

  const std::size_t cols = 1 + static_cast<std::size_t>(basis.degree) + (use_obstacle ? 1 : 0);
  Mat design(paths, cols);
  for (std::size_t p = 0; p < paths; ++p) {
    const double x = (bundle.state1(p, i) - mean) / sd;
    design(p, 0) = 1.0;
    double pw = 1.0;
    for (int deg = 1; deg <= basis.degree; ++deg) {
      pw *= x;
      design(p, static_cast<std::size_t>(deg)) = pw;
    }
    if (use_obstacle) design(p, cols - 1) = problem.obstacle[i][p];
  }
  *cols_out = cols;
  return design;
}

// Pathwise backward recursion: the carried per-path value `current` is only
// ever reassigned (obstacle hit) or incremented by a driver step, while the
// regressed conditional expectation is used solely for the reflection
// decision and the driver arguments. Decision errors are second order, so the
// bias does not accumulate with the number of time steps the way propagating
// the regressed values themselves would.
PathSolution backward_lsmc(const PathBundle& bundle, const PathProblem& problem,
                           std::size_t i1, std::size_t i2, std::vector<double> current,
                           const BasisSpec& basis, bool reflect, double lambda) {
  const std::size_t paths = bundle.num_paths();
  const int d = static_cast<int>(bundle.increments[0].cols());
  const std::size_t min_paths = 10 * (2 + static_cast<std::size_t>(basis.degree));
  if (paths < min_paths)
    throw std::invalid_argument("solve_lsmc: need at least " + std::to_string(min_paths) +
                                " paths for the requested basis");

  PathSolution sol;
  const std::size_t span = i2 - i1;
  sol.y.resize(span + 1);
  sol.z.resize(span);
  sol.dk.resize(span);
  sol.regression_residual.resize(span, 0.0);
  sol.y[span] = current;

  for (std::size_t i = i2; i-- > i1;) {
    const std::size_t li = i - i1;
    const double t = bundle.grid.point(i);
    const double dt = bundle.grid.dt(i);

    Eigen::VectorXd ynext(paths);
    for (std::size_t p = 0; p < paths; ++p) ynext[static_cast<int>(p)] = current[p];

    Eigen::VectorXd cont(paths);
    Mat zmat(paths, d);

    double xmean = 0.0, xsq = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
      const double x = bundle.state1(p, i);
      xmean += x;
      xsq += x * x;
    }
    xmean /= static_cast<double>(paths);
    const double xsd =
        std::sqrt(std::max(0.0, xsq / static_cast<double>(paths) - xmean * xmean));

    if (xsd < 1e-12) {
      // degenerate states (e.g. the deterministic start of the bundle):
      // conditional expectation is the plain mean
      const double mean = ynext.mean();
      cont.setConstant(mean);
      for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t p = 0; p < paths; ++p)
          acc += current[p] * bundle.increments[p](i, k);
        zmat.col(k).setConstant(acc / static_cast<double>(paths) / dt);
      }
    } else {
      std::size_t cols = 0;
      const Mat design = build_design(bundle, problem, i, basis, &cols);
      Eigen::ColPivHouseholderQR<Mat> qr(design);
      qr.setThreshold(1e-10);
      if (static_cast<std::size_t>(qr.rank()) < cols)
        throw std::runtime_error("solve_lsmc: rank-deficient regression matrix at step " +
                                 std::to_string(i));
      const Eigen::VectorXd coef = qr.solve(ynext);
      cont = design * coef;
      sol.regression_residual[li] =
          std::sqrt((design * coef - ynext).squaredNorm() / static_cast<double>(paths));
      for (int k = 0; k < d; ++k) {
        Eigen::VectorXd target(paths);
        for (std::size_t p = 0; p < paths; ++p)
          target[static_cast<int>(p)] = current[p] * bundle.increments[p](i, k) / dt;
        zmat.col(k) = design * qr.solve(target);
      }
    }

    sol.z[li] = zmat;
    sol.dk[li].resize(paths);
    std::vector<double> smoothed(paths);
    for (std::size_t p = 0; p < paths; ++p) {
      const double ey = cont[static_cast<int>(p)];
      const Vec z = zmat.row(static_cast<int>(p)).transpose();
      const double s = problem.obstacle[i][p];
      if (reflect) {
        double y = ey;
        for (int it = 0; it < 20; ++it) {
          const double next = ey + problem.driver(i, p, y, z) * dt;
          if (std::abs(next - y) <= 1e-12) { y = next; break; }
          y = next;
        }
        const double yhat = y;
        smoothed[p] = std::max(yhat, s);
        sol.dk[li][p] = smoothed[p] - yhat;
        if (s >= yhat)
          current[p] = s;
        else
          current[p] += problem.driver(i, p, yhat, z) * dt;
      } else {
        auto g = [&](double yy) {
          const double pen = lambda * std::max(0.0, s - yy);
          return yy - ey - (problem.driver(i, p, yy, z) + pen) * dt;
        };
        double lo = ey, hi = ey, width = std::max(1.0, std::abs(ey)) * 0.5;
        while (g(lo) > 0.0) { lo -= width; width *= 2.0; }
        width = std::max(1.0, std::abs(ey)) * 0.5;
        while (g(hi) < 0.0) { hi += width; width *= 2.0; }
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          (g(mid) < 0.0 ? lo : hi) = mid;
        }
        const double ystar = 0.5 * (lo + hi);
        smoothed[p] = ystar;
        sol.dk[li][p] = 0.0;
        // Damp the carried martingale residual by the slope of the one-step
        // map: the penalty makes it a sharply kinked function of the
        // conditional expectation, and carrying undamped noise through that
        // kink rectifies into a bias that grows with lambda * dt.
        const double slope = s > ystar ? 1.0 / (1.0 + lambda * dt) : 1.0;
        current[p] = ystar + slope * (current[p] - ey);
      }
    }
    sol.y[li] = std::move(smoothed);
  }

  double mean = 0.0;
  for (double v : current) mean += v;
  sol.y0 = mean / static_cast<double>(paths);
  double var = 0.0;
  for (double v : current) var += (v - sol.y0) * (v - sol.y0);
  sol.y0_stderr = std::sqrt(var) / static_cast<double>(paths);
  return sol;
}

}  // namespace

PathSolution solve_lsmc(const PathBundle& bundle, const PathProblem& problem,
                        const BasisSpec& basis) {
  if (problem.terminal.size() != bundle.num_paths())
    throw std::invalid_argument("solve_lsmc: terminal size mismatch");
  const std::size_t n = bundle.grid.num_steps();
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    if (problem.terminal[p] < problem.obstacle[n][p] - 1e-12)
      throw std::runtime_error("solve_lsmc: terminal below obstacle on path " + std::to_string(p));
  return backward_lsmc(bundle, problem, 0, n, problem.terminal, basis, true, 0.0);
}

PathSolution solve_penalized_lsmc(const PathBundle& bundle, const PathProblem& problem,
                                  double lambda, const BasisSpec& basis) {
  if (lambda < 0.0) throw std::invalid_argument("solve_penalized_lsmc: lambda must be >= 0");
  return backward_lsmc(bundle, problem, 0, bundle.grid.num_steps(), problem.terminal, basis,
                       false, lambda);
}

PathSolution solve_lsmc_segment(const PathBundle& bundle, const PathProblem& problem,
                                std::size_t i1, std::size_t i2,
                                const std::vector<double>& eta, const BasisSpec& basis) {
  if (i1 >= i2 || i2 > bundle.grid.num_steps())
    throw std::invalid_argument("solve_lsmc_segment: bad indices");
  std::vector<std::size_t> offenders;
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    if (eta[p] < problem.obstacle[i2][p] - 1e-12) offenders.push_back(p);
  if (!offenders.empty()) {
    std::string msg = "solve_lsmc_segment: terminal below obstacle on paths";
    for (std::size_t k = 0; k < std::min<std::size_t>(offenders.size(), 10); ++k)
      msg += " " + std::to_string(offenders[k]);
    if (offenders.size() > 10) msg += " ...";
    throw std::runtime_error(msg);
  }
  return backward_lsmc(bundle, problem, i1, i2, eta, basis, true, 0.0);
}

}  // namespace rsg

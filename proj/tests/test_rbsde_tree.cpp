#include <doctest.h>

#include <cmath>
#include <random>

#include "rsgame/catalog.hpp"
#include "rsgame/rbsde_tree.hpp"

using namespace rsg;

namespace {

// Independent American put oracle: textbook CRR backward recursion with
// discrete discounting. Shares nothing with the RBSDE solver but the lattice
// geometry.
double binomial_american_put(double s0, double strike, double rate, double sigma, double T,
                             std::size_t steps) {
  const double dt = T / static_cast<double>(steps);
  const double up = std::exp(sigma * std::sqrt(dt));
  const double down = 1.0 / up;
  const double p = (std::exp(rate * dt) - down) / (up - down);
  const double disc = std::exp(-rate * dt);

  std::vector<double> value(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double s = s0 * std::pow(up, static_cast<double>(k)) *
                     std::pow(down, static_cast<double>(steps - k));
    value[k] = std::max(strike - s, 0.0);
  }
  for (std::size_t i = steps; i-- > 0;) {
    for (std::size_t k = 0; k <= i; ++k) {
      const double s = s0 * std::pow(up, static_cast<double>(k)) *
                       std::pow(down, static_cast<double>(i - k));
      const double cont = disc * (p * value[k + 1] + (1.0 - p) * value[k]);
      value[k] = std::max(strike - s, cont);
    }
  }
  return value[0];
}

GameSpec unit_spec() { return make_catalog_spec("constant-drift", {{"mu", 0.0}, {"s", 1.0}}); }

LatticeProblem plain_problem(double terminal_c, double obstacle_c) {
  LatticeProblem p;
  p.driver = [](double, double, double, double) { return 0.0; };
  p.terminal = [terminal_c](double) { return terminal_c; };
  p.obstacle = [obstacle_c](double, double) { return obstacle_c; };
  return p;
}

}  // namespace

TEST_CASE("constant terminal, inactive obstacle: Y constant, Z = 0, K = 0") {
  const GameSpec spec = unit_spec();
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 20);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());
  const LatticeSolution sol = solve_tree(lat, plain_problem(3.5, kNoObstacle), spec, c, c);
  for (std::size_t i = 0; i < sol.y.size(); ++i)
    for (std::size_t k = 0; k < sol.y[i].size(); ++k)
      CHECK(sol.y[i][k] == doctest::Approx(3.5).epsilon(1e-14));
  for (std::size_t i = 0; i < sol.z.size(); ++i)
    for (std::size_t k = 0; k < sol.z[i].size(); ++k) {
      CHECK(std::abs(sol.z[i][k]) < 1e-12);
      CHECK(sol.dk[i][k] == 0.0);
    }
}

TEST_CASE("obstacle touching the terminal value never pushes") {
  const GameSpec spec = unit_spec();
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());
  const LatticeSolution sol = solve_tree(lat, plain_problem(2.0, 2.0), spec, c, c);
  for (std::size_t i = 0; i < sol.dk.size(); ++i)
    for (double dk : sol.dk[i]) CHECK(dk == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sol.y0 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("American put value matches the independent binomial oracle") {
  const double s0 = 100.0, strike = 100.0, rate = 0.05, sigma = 0.2, T = 1.0;
  const std::size_t steps = 500;

  const GameSpec spec = make_catalog_spec("american-put");
  const TimeGrid grid = TimeGrid::uniform(0.0, T, steps);
  const LatticeModel lat = LatticeModel::binomial_crr(s0, sigma, rate, grid);

  LatticeProblem problem;
  problem.driver = [rate](double, double, double y, double) { return -rate * y; };
  problem.terminal = [strike](double x) { return std::max(strike - x, 0.0); };
  problem.obstacle = [strike](double, double x) { return std::max(strike - x, 0.0); };
  const ControlPath c = ControlPath::constant(0, steps);
  const LatticeSolution sol = solve_tree(lat, problem, spec, c, c);

  const double oracle = binomial_american_put(s0, strike, rate, sigma, T, steps);
  CHECK(std::abs(sol.y0 - oracle) <= 1e-4);
  CHECK(sol.skorokhod_residual <= 1e-12);
}

TEST_CASE("discrete Skorokhod complementarity holds nodewise") {
  const GameSpec spec = unit_spec();
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 40);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  LatticeProblem problem;
  problem.driver = [](double, double, double y, double) { return -0.1 * y; };
  problem.terminal = [](double x) { return std::max(1.0 - x, 0.0); };
  problem.obstacle = [](double, double x) { return std::max(1.0 - x, 0.0); };
  const ControlPath c = ControlPath::constant(0, grid.num_steps());
  const LatticeSolution sol = solve_tree(lat, problem, spec, c, c);
  CHECK(sol.skorokhod_residual <= 1e-12);
  for (std::size_t i = 0; i < sol.dk.size(); ++i)
    for (double dk : sol.dk[i]) CHECK(dk >= 0.0);
}

TEST_CASE("comparison: ordered data give ordered solutions, randomized") {
  const GameSpec spec = unit_spec();
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 12);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());

  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const double a = unif(gen), shift_xi = unif(gen), shift_f = unif(gen);
    const double obstacle_level = -0.5 + unif(gen);
    const bool equal_obstacles = trial % 2 == 0;
    const double obstacle_shift = equal_obstacles ? 0.0 : 0.3 * unif(gen);

    LatticeProblem lo, hi;
    lo.driver = [a](double, double x, double y, double) { return a * std::sin(x) - 0.2 * y; };
    hi.driver = [a, shift_f](double, double x, double y, double) {
      return a * std::sin(x) - 0.2 * y + shift_f;
    };
    lo.obstacle = [obstacle_level](double, double x) { return obstacle_level - 0.1 * x * x; };
    hi.obstacle = [obstacle_level, obstacle_shift](double, double x) {
      return obstacle_level - 0.1 * x * x + obstacle_shift;
    };
    // clamp terminals to the obstacles; max() preserves the pairwise ordering
    lo.terminal = [&lo](double x) { return std::max(std::cos(x), lo.obstacle(1.0, x)); };
    hi.terminal = [&hi, shift_xi](double x) {
      return std::max(std::cos(x) + shift_xi, hi.obstacle(1.0, x));
    };

    const LatticeSolution sol_lo = solve_tree(lat, lo, spec, c, c);
    const LatticeSolution sol_hi = solve_tree(lat, hi, spec, c, c);
    const OrderingReport rep = compare_solutions(sol_lo, sol_hi, equal_obstacles);
    CHECK(rep.y_violations == 0);
    if (equal_obstacles) CHECK(rep.dk_violations == 0);
  }
}

TEST_CASE("stability: perturbing the terminal moves Y0 by at most e^{LT} delta") {
  const GameSpec spec = unit_spec();
  const double L = 0.2, T = 1.0;
  const TimeGrid grid = TimeGrid::uniform(0.0, T, 30);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());

  LatticeProblem base;
  const auto barrier = [](double x) { return -0.8 + 0.3 * std::sin(x); };
  base.driver = [L](double, double, double y, double) { return L * y; };
  // clamp to the obstacle so the terminal condition is admissible everywhere;
  // the clamp is 1-Lipschitz in the shift, so the stability bound still applies
  base.terminal = [barrier](double x) { return std::max(std::cos(x), barrier(x)); };
  base.obstacle = [barrier](double, double x) { return barrier(x); };

  const double y_base = solve_tree(lat, base, spec, c, c).y0;
  for (double delta : {1e-3, 1e-2, 1e-1}) {
    LatticeProblem pert = base;
    pert.terminal = [barrier, delta](double x) {
      return std::max(std::cos(x) + delta, barrier(x));
    };
    const double y_pert = solve_tree(lat, pert, spec, c, c).y0;
    CHECK(std::abs(y_pert - y_base) <= std::exp(L * T) * delta + 1e-12);
  }
}

TEST_CASE("a-priori bound on randomized bounded instances") {
  const GameSpec spec = unit_spec();
  const double L = 0.3, T = 1.0;
  const TimeGrid grid = TimeGrid::uniform(0.0, T, 16);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  for (int trial = 0; trial < 50; ++trial) {
    const double xi_amp = unif(gen), f0 = unif(gen), s_level = unif(gen);
    LatticeProblem problem;
    problem.driver = [L, f0](double, double, double y, double) { return f0 + L * std::sin(y); };
    problem.terminal = [xi_amp](double x) { return xi_amp * std::cos(x); };
    problem.obstacle = [s_level, xi_amp](double, double) {
      return std::min(s_level, -std::abs(xi_amp)) - 0.01;
    };
    const LatticeSolution sol = solve_tree(lat, problem, spec, c, c);
    const double bound = std::exp(2.0 * L * T) *
                         (std::abs(xi_amp) + T * std::abs(f0) +
                          std::max(0.0, s_level));
    CHECK(std::abs(sol.y0) <= bound + 1e-9);
  }
}

TEST_CASE("penalization: lambda ladder is monotone and approaches the reflected value") {
  const double s0 = 100.0, strike = 100.0, rate = 0.05, sigma = 0.2, T = 1.0;
  const std::size_t steps = 200;
  const GameSpec spec = make_catalog_spec("american-put");
  const TimeGrid grid = TimeGrid::uniform(0.0, T, steps);
  const LatticeModel lat = LatticeModel::binomial_crr(s0, sigma, rate, grid);

  LatticeProblem problem;
  problem.driver = [rate](double, double, double y, double) { return -rate * y; };
  problem.terminal = [strike](double x) { return std::max(strike - x, 0.0); };
  problem.obstacle = [strike](double, double x) { return std::max(strike - x, 0.0); };
  const ControlPath c = ControlPath::constant(0, steps);

  const LatticeSolution reflected = solve_tree(lat, problem, spec, c, c);
  LatticeSolution prev = solve_penalized_tree(lat, problem, spec, c, c, 0.0);
  // lambda = 0 stays below the reflected solution
  CHECK(compare_solutions(prev, reflected).y_violations == 0);

  for (double lambda : {10.0, 100.0, 1000.0}) {
    const LatticeSolution cur = solve_penalized_tree(lat, problem, spec, c, c, lambda);
    CHECK(compare_solutions(prev, cur).y_violations == 0);  // nondecreasing in lambda
    prev = cur;
  }
  CHECK(std::abs(prev.y0 - reflected.y0) <= 0.02);
}

TEST_CASE("penalty never activates without an obstacle") {
  const GameSpec spec = unit_spec();
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());
  const LatticeProblem problem = plain_problem(1.0, kNoObstacle);
  const LatticeSolution base = solve_penalized_tree(lat, problem, spec, c, c, 0.0);
  const LatticeSolution high = solve_penalized_tree(lat, problem, spec, c, c, 1e3);
  for (std::size_t i = 0; i < base.y.size(); ++i)
    for (std::size_t k = 0; k < base.y[i].size(); ++k)
      CHECK(base.y[i][k] == doctest::Approx(high.y[i][k]).epsilon(1e-14));
}

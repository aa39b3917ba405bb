#include <benchmark/benchmark.h>

#include <cmath>

#include "rsgame/catalog.hpp"
#include "rsgame/dp.hpp"
#include "rsgame/pde.hpp"
#include "rsgame/rbsde_tree.hpp"
#include "rsgame/sde.hpp"

using namespace rsg;

static void BM_SimulateForward(benchmark::State& state) {
  const GameSpec spec = make_catalog_spec("additive-control");
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 64);
  const ControlPath c = ControlPath::constant(0, 64);
  const std::size_t paths = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const PathBundle bundle = simulate_forward(spec, grid, Vec::Zero(1), c, c, paths, 1);
    benchmark::DoNotOptimize(bundle.states.back()(64, 0));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(paths * 64));
}
BENCHMARK(BM_SimulateForward)->Arg(1000)->Arg(10000);

static void BM_TreeSolve(benchmark::State& state) {
  const std::size_t steps = static_cast<std::size_t>(state.range(0));
  const GameSpec spec = make_catalog_spec("american-put");
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, steps);
  const LatticeModel lat = LatticeModel::binomial_crr(100.0, 0.2, 0.05, grid);
  LatticeProblem problem;
  problem.driver = [](double, double, double y, double) { return -0.05 * y; };
  problem.terminal = [](double x) { return std::max(100.0 - x, 0.0); };
  problem.obstacle = [](double, double x) { return std::max(100.0 - x, 0.0); };
  const ControlPath c = ControlPath::constant(0, steps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_tree(lat, problem, spec, c, c).y0);
  }
}
BENCHMARK(BM_TreeSolve)->Arg(200)->Arg(500);

static void BM_PdeSweep(benchmark::State& state) {
  const GameSpec spec = make_catalog_spec("heat");
  const SpaceGrid space{-4.0, 4.0, static_cast<std::size_t>(state.range(0))};
  const double dx = space.dx();
  const std::size_t steps = static_cast<std::size_t>(0.5 / (dx * dx / 2.0)) + 1;
  const TimeGrid times = TimeGrid::uniform(0.0, 0.5, steps);
  for (auto _ : state) {
    const ValueGrid w = solve_obstacle_isaacs(spec, 1, HamiltonianMode::Minus, times, space);
    benchmark::DoNotOptimize(w.at(0, space.num_points / 2));
  }
}
BENCHMARK(BM_PdeSweep)->Arg(81)->Arg(161);

static void BM_ValueDp(benchmark::State& state) {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const std::size_t steps = static_cast<std::size_t>(state.range(0));
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, steps);
  const LatticeModel lat =
      LatticeModel::trinomial(spec, 0.0, grid, LatticeModel::default_spacing(spec, grid));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_value_dp(spec, 1, HamiltonianMode::Minus, lat).root());
  }
}
BENCHMARK(BM_ValueDp)->Arg(20)->Arg(50);

#include <doctest.h>

#include <cmath>

#include "rsgame/catalog.hpp"
#include "rsgame/pde.hpp"
#include "rsgame/rbsde_tree.hpp"

using namespace rsg;

TEST_CASE("decoupled Hamiltonian: both orders agree and the saddle is found") {
  // b = u + v, f = 0, sigma = 1: H = A/2 + p u + p v separates in (u, v)
  const GameSpec spec = make_catalog_spec("additive-control");
  const HamiltonianReport minus = hamiltonian(spec, 1, 0.0, 0.0, 0.0, 2.0, 3.0,
                                              HamiltonianMode::Minus);
  const HamiltonianReport plus = hamiltonian(spec, 1, 0.0, 0.0, 0.0, 2.0, 3.0,
                                             HamiltonianMode::Plus);
  CHECK(minus.minus == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(plus.plus == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(minus.gap == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(spec.u_set[minus.argmax_u][0] == 1.0);   // sup at u = +1 for p = 2
  CHECK(spec.v_set[minus.argmin_v][0] == -1.0);  // inf at v = -1
}

TEST_CASE("coupled running cost opens a sup-inf / inf-sup gap of 2|cp|") {
  const GameSpec spec = make_catalog_spec("multiplicative-coupled", {{"c", 1.0}});
  const HamiltonianReport rep = hamiltonian(spec, 1, 0.0, 0.0, 0.0, 1.0, 0.0,
                                            HamiltonianMode::Minus);
  CHECK(rep.minus == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(rep.plus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.gap == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Isaacs scan separates the two catalog families") {
  const GameSpec ok = make_catalog_spec("additive-control");
  const IsaacsScanResult good = isaacs_scan(ok, 1.0, 2.0, 500, 17);
  CHECK(good.satisfied);
  CHECK(good.max_gap <= 1e-9);

  const GameSpec bad = make_catalog_spec("multiplicative-coupled");
  const IsaacsScanResult fail = isaacs_scan(bad, 1.0, 2.0, 500, 17);
  CHECK_FALSE(fail.satisfied);
  CHECK(fail.max_gap > 0.1);
}

TEST_CASE("heat equation benchmark: W = e^{-(T-t)} cos x") {
  const GameSpec spec = make_catalog_spec("heat");
  const double span = 2.0 * 3.14159265358979 + 1.0;
  const SpaceGrid space{-span, span, 2 * static_cast<std::size_t>(span / 0.02) + 1};
  const double T = 0.5;
  const TimeGrid times = TimeGrid::uniform(0.0, T, 2600);  // CFL: dt <= dx^2 / 2

  const ValueGrid w = solve_obstacle_isaacs(spec, 1, HamiltonianMode::Minus, times, space);
  double max_err = 0.0;
  for (std::size_t k = 0; k < space.num_points; ++k) {
    const double x = space.point(k);
    if (std::abs(x) > 3.2) continue;  // interior region, away from the extrapolated boundary
    max_err = std::max(max_err, std::abs(w.at(0, k) - std::exp(-T) * std::cos(x)));
  }
  CHECK(max_err <= 0.01);
  CHECK(residual_check(w, spec) <= 1e-10);
}

TEST_CASE("residual check detects a perturbed solution") {
  const GameSpec spec = make_catalog_spec("heat");
  const SpaceGrid space{-4.0, 4.0, 81};
  const TimeGrid times = TimeGrid::uniform(0.0, 0.2, 100);  // dx^2/2 = 0.005 > dt = 0.002
  ValueGrid w = solve_obstacle_isaacs(spec, 1, HamiltonianMode::Minus, times, space);
  CHECK(residual_check(w, spec) <= 1e-10);
  w.values(50, 40) += 1e-3;
  CHECK(residual_check(w, spec) > 1e-4);
}

TEST_CASE("obstacle case: PDE value tracks the American put tree") {
  const GameSpec spec = make_catalog_spec("american-put");
  const SpaceGrid space{0.0, 300.0, 301};
  const TimeGrid times = TimeGrid::uniform(0.0, 1.0, 6500);
  const ValueGrid w = solve_obstacle_isaacs(spec, 1, HamiltonianMode::Minus, times, space);

  const TimeGrid tree_grid = TimeGrid::uniform(0.0, 1.0, 500);
  const LatticeModel lat = LatticeModel::binomial_crr(100.0, 0.2, 0.05, tree_grid);
  LatticeProblem problem;
  problem.driver = [](double, double, double y, double) { return -0.05 * y; };
  problem.terminal = [](double x) { return std::max(100.0 - x, 0.0); };
  problem.obstacle = [](double, double x) { return std::max(100.0 - x, 0.0); };
  const ControlPath c = ControlPath::constant(0, 500);
  const double tree_value = solve_tree(lat, problem, spec, c, c).y0;

  CHECK(std::abs(w.interpolate(0, 100.0) - tree_value) <= 0.2);

  // the obstacle is respected everywhere
  for (std::size_t i = 0; i < times.num_points(); ++i)
    for (std::size_t k = 0; k < space.num_points; ++k)
      CHECK(w.at(i, k) >= std::max(100.0 - space.point(k), 0.0) - 1e-12);
}

TEST_CASE("CFL violation is rejected up front") {
  const GameSpec spec = make_catalog_spec("heat");
  const SpaceGrid space{-4.0, 4.0, 81};
  const TimeGrid times = TimeGrid::uniform(0.0, 1.0, 20);  // dt = 0.05 >> dx^2/2
  CHECK_THROWS_WITH_AS(solve_obstacle_isaacs(spec, 1, HamiltonianMode::Minus, times, space),
                       doctest::Contains("CFL"), std::runtime_error);
}

TEST_CASE("comparison principle holds on ordered obstacle data") {
  const GameSpec lo = make_catalog_spec("additive-control", {{"obstacle", -0.5}});
  const GameSpec hi = make_catalog_spec("additive-control", {{"obstacle", 0.5}});
  const SpaceGrid space{-4.0, 4.0, 81};
  const TimeGrid times = TimeGrid::uniform(0.0, 1.0, 500);  // dx^2/(s^2 + dx b) = 1/120 > dt

  const SchemeOrderingReport rep =
      scheme_comparison_test(lo, hi, 1, HamiltonianMode::Minus, times, space);
  CHECK(rep.violations == 0);
  CHECK(rep.max_gap >= 0.0);

  CHECK_THROWS_AS(scheme_comparison_test(hi, lo, 1, HamiltonianMode::Minus, times, space),
                  std::invalid_argument);
}

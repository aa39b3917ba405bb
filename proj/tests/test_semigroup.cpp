#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsgame/catalog.hpp"
#include "rsgame/semigroup.hpp"

using namespace rsg;

namespace {

// Forward node probabilities on the lattice under fixed controls. Built from
// the transitions alone, independently of any backward solver.
std::vector<std::vector<double>> forward_probabilities(const LatticeModel& lat,
                                                       const GameSpec& spec,
                                                       const ControlPath& u,
                                                       const ControlPath& v) {
  std::vector<std::vector<double>> prob(lat.depth() + 1);
  prob[0] = {1.0};
  for (std::size_t i = 0; i < lat.depth(); ++i) {
    prob[i + 1].assign(lat.num_nodes(i + 1), 0.0);
    for (std::size_t k = 0; k < lat.num_nodes(i); ++k) {
      const LatticeTransition tr =
          lat.transition(i, k, spec.u_set[static_cast<std::size_t>(u[i])],
                         spec.v_set[static_cast<std::size_t>(v[i])]);
      for (int c = 0; c < tr.count; ++c)
        prob[i + 1][static_cast<std::size_t>(tr.child[c])] += prob[i][k] * tr.prob[c];
    }
  }
  return prob;
}

std::vector<double> terminal_values(const LatticeModel& lat, const GameSpec& spec, int j) {
  std::vector<double> eta(lat.num_nodes(lat.depth()));
  for (std::size_t k = 0; k < eta.size(); ++k)
    eta[k] = spec.terminal(j)(Vec::Constant(1, lat.state(lat.depth(), k)));
  return eta;
}

}  // namespace

TEST_CASE("cost functional with control-only running cost integrates exactly") {
  // f1 = -u^2 depends on the control alone, so J1 = Phi + sum f dt pathwise
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const double T = 0.8;
  const TimeGrid grid = TimeGrid::uniform(0.0, T, 20);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath u = ControlPath::constant(0, 20);  // u = -1 throughout
  const ControlPath v = ControlPath::constant(1, 20);  // v = 0

  CHECK(cost_functional_lattice(spec, lat, 1, u, v) == doctest::Approx(-T).epsilon(1e-12));
  CHECK(cost_functional_lattice(spec, lat, 2, u, v) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("state-dependent running cost matches a forward-probability sum") {
  GameSpec spec = make_catalog_spec("constant-drift", {{"mu", 0.3}, {"s", 0.7}});
  const auto fcost = [](double t, const Vec& x, double, const Vec&, const Vec&, const Vec&) {
    return std::cos(x[0]) + 0.5 * t;
  };
  spec.running_cost = {fcost, fcost};
  spec.bounds.sup_running_cost = 2.0;

  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 25);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.2, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, 25);

  const auto prob = forward_probabilities(lat, spec, c, c);
  double direct = 0.0;
  for (std::size_t i = 0; i < lat.depth(); ++i)
    for (std::size_t k = 0; k < lat.num_nodes(i); ++k)
      direct += prob[i][k] *
                fcost(grid.point(i), Vec::Constant(1, lat.state(i, k)), 0.0, Vec(), Vec(), Vec()) *
                grid.dt(i);
  for (std::size_t k = 0; k < lat.num_nodes(lat.depth()); ++k)
    direct += prob[lat.depth()][k] * lat.state(lat.depth(), k);

  CHECK(cost_functional_lattice(spec, lat, 1, c, c) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("driver-free expectation agrees with the forward-probability sum") {
  const GameSpec spec = make_catalog_spec("additive-control");
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 15);
  const LatticeModel lat = LatticeModel::trinomial(spec, 0.0, grid,
                                                   LatticeModel::default_spacing(spec, grid));
  const ControlPath u = ControlPath::constant(1, 15);
  const ControlPath v = ControlPath::constant(0, 15);

  const auto prob = forward_probabilities(lat, spec, u, v);
  const std::vector<double> eta = terminal_values(lat, spec, 1);
  double direct = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k) direct += prob[lat.depth()][k] * eta[k];
  CHECK(lat.expectation(eta, u, v, spec) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("flow property: composing sub-interval operators reproduces the full solve") {
  const GameSpec spec = make_catalog_spec("american-put");
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 40);
  const LatticeModel lat = LatticeModel::binomial_crr(100.0, 0.2, 0.05, grid);
  const ControlPath c = ControlPath::constant(0, 40);

  const std::vector<double> eta = terminal_values(lat, spec, 1);
  const std::vector<double> full = semigroup_lattice(spec, lat, 1, c, c, 0, 40, eta);

  for (std::size_t mid : {1u, 13u, 20u, 39u}) {
    const std::vector<double> at_mid = semigroup_lattice(spec, lat, 1, c, c, mid, 40, eta);
    const std::vector<double> composed = semigroup_lattice(spec, lat, 1, c, c, 0, mid, at_mid);
    REQUIRE(composed.size() == full.size());
    for (std::size_t k = 0; k < full.size(); ++k)
      CHECK(composed[k] == doctest::Approx(full[k]).epsilon(1e-12));
  }
}

TEST_CASE("semigroup rejects terminal data below the obstacle") {
  const GameSpec spec = make_catalog_spec("american-put");
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);
  const LatticeModel lat = LatticeModel::binomial_crr(100.0, 0.2, 0.05, grid);
  const ControlPath c = ControlPath::constant(0, 10);
  const std::vector<double> bad(lat.num_nodes(5), -1.0);  // put obstacle is >= 0
  CHECK_THROWS_AS(semigroup_lattice(spec, lat, 1, c, c, 0, 5, bad), std::runtime_error);
}

TEST_CASE("Monte Carlo cost functional tracks the lattice value") {
  const GameSpec spec = make_catalog_spec("american-put");
  const std::size_t steps = 50;
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, steps);
  const ControlPath c = ControlPath::constant(0, steps);

  const LatticeModel lat = LatticeModel::binomial_crr(100.0, 0.2, 0.05, grid);
  const double lattice_value = cost_functional_lattice(spec, lat, 1, c, c);

  const PathBundle bundle =
      simulate_forward(spec, grid, Vec::Constant(1, 100.0), c, c, 20000, 2718);
  double se = 0.0;
  const double mc_value = cost_functional_paths(spec, bundle, 1, c, c, &se);
  CHECK(std::abs(mc_value - lattice_value) <= 3.0 * se + 0.05);
}

TEST_CASE("path semigroup composes on the same bundle up to regression error") {
  // unlike the lattice operator, the Monte Carlo realization re-smooths the
  // mid-time data, so composition holds only up to the regression bias
  const GameSpec spec = make_catalog_spec("american-put");
  const std::size_t steps = 20;
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, steps);
  const ControlPath c = ControlPath::constant(0, steps);
  const PathBundle bundle = simulate_forward(spec, grid, Vec::Constant(1, 100.0), c, c, 4000, 5);

  std::vector<double> eta(bundle.num_paths());
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    eta[p] = spec.terminal(1)(bundle.states[p].row(steps).transpose());

  const std::vector<double> full = semigroup_paths(spec, bundle, 1, c, c, 0, steps, eta);
  const std::vector<double> at_mid = semigroup_paths(spec, bundle, 1, c, c, 8, steps, eta);
  const std::vector<double> composed = semigroup_paths(spec, bundle, 1, c, c, 0, 8, at_mid);
  // the root state is deterministic: both are constant across paths there
  CHECK(composed[0] == doctest::Approx(full[0]).epsilon(0.0025));
}

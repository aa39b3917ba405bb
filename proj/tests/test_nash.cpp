#include <doctest.h>

#include <cmath>

#include "rsgame/catalog.hpp"
#include "rsgame/nash.hpp"

using namespace rsg;

namespace {

LatticeModel make_lattice(const GameSpec& spec, std::size_t steps, double T = 1.0) {
  const TimeGrid grid = TimeGrid::uniform(0.0, T, steps);
  return LatticeModel::trinomial(spec, 0.0, grid, LatticeModel::default_spacing(spec, grid));
}

constexpr std::size_t kNotPunished = static_cast<std::size_t>(-1);

}  // namespace

TEST_CASE("value tables of the decoupled game: both conventions agree near zero") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  // sup_u of -u^2 is 0 and nothing else enters: both roots sit at 0
  CHECK(std::abs(tables.w1.root()) <= 1e-9);
  CHECK(std::abs(tables.w2.root()) <= 1e-9);
  const double tol = 5.0 * (lat.grid().mesh() + lat.dx());
  CHECK(std::abs(tables.w1_guarantee.root() - tables.w1.root()) <= tol);
  CHECK(std::abs(tables.w2_guarantee.root() - tables.w2.root()) <= tol);
}

TEST_CASE("candidate construction picks the (0, 0) pair on the decoupled game") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const StateCellPartition cells{-2.0, 2.0, 5};
  const CandidatePair cand = construct_candidate(spec, lat, tables, 2, cells, 0.05);

  CHECK(cand.complete);
  CHECK(cand.failed_cells.empty());
  for (const auto& interval : cand.margins)
    for (double m : interval) CHECK(m >= 0.0);
  for (std::size_t step = 0; step < 10; ++step) {
    const auto [ui, vi] = cand.at_step(step, 0.3);
    CHECK(spec.u_set[static_cast<std::size_t>(ui)][0] == 0.0);
    CHECK(spec.v_set[static_cast<std::size_t>(vi)][0] == 0.0);
  }
}

TEST_CASE("candidate construction refuses a non-Isaacs game") {
  const GameSpec spec = make_catalog_spec("multiplicative-coupled");
  const LatticeModel lat = make_lattice(spec, 6);
  const NashValueTables tables = compute_nash_values(spec, lat);
  CHECK_THROWS_WITH_AS(construct_candidate(spec, lat, tables, 2, {-2.0, 2.0, 4}, 0.1),
                       doctest::Contains("Isaacs"), std::runtime_error);
}

TEST_CASE("certificate accepted on the decoupled game, payoffs near (0, 0)") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const StateCellPartition cells{-2.0, 2.0, 5};
  const CandidatePair cand = construct_candidate(spec, lat, tables, 2, cells, 0.05);
  const NashCertificate cert = verify_conditions(spec, lat, cand, tables, 0.05, 400, 12);

  CHECK(cert.accepted);
  CHECK(cert.min_probability >= 0.99);
  CHECK(std::abs(cert.payoffs[0]) <= 0.02);
  CHECK(std::abs(cert.payoffs[1]) <= 0.02);
  CHECK(cert.probabilities[0].size() == lat.grid().num_points());
  CHECK(cert.probabilities[1].size() == lat.grid().num_points());
}

TEST_CASE("a deliberately suboptimal candidate is rejected") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const StateCellPartition cells{-2.0, 2.0, 5};
  CandidatePair cand = construct_candidate(spec, lat, tables, 2, cells, 0.05);
  // force u = v = -1 everywhere: both running costs become -1
  for (auto& interval : cand.controls)
    for (auto& cell : interval) cell = {{0, 0}};
  const NashCertificate cert = verify_conditions(spec, lat, cand, tables, 0.05, 400, 12);
  CHECK_FALSE(cert.accepted);
  CHECK_FALSE(cert.note.empty());
}

TEST_CASE("certificate monotonicity: enlarging epsilon keeps acceptance") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const CandidatePair cand = construct_candidate(spec, lat, tables, 2, {-2.0, 2.0, 5}, 0.05);
  const NashCertificate tight = verify_conditions(spec, lat, cand, tables, 0.05, 300, 4);
  const NashCertificate loose = verify_conditions(spec, lat, cand, tables, 0.10, 300, 4);
  if (tight.accepted) CHECK(loose.accepted);
  CHECK(loose.min_probability >= tight.min_probability - 1e-12);
}

TEST_CASE("detector fires exactly one interval after the first mismatch") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 3, 0.3);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const StateCellPartition cells{-1.0, 1.0, 3};
  const CandidatePair cand = construct_candidate(spec, lat, tables, 1, cells, 0.1);
  REQUIRE(cand.complete);
  const PunishmentProfile profile = build_punishment(cand, tables, 2, 0.1);

  // nominal u index is 1 (the control value 0); deviate at step 1 only
  ControlPath deviation;
  deviation.indices = {1, 0, 0};
  const DeviationResult res = deviation_gap(spec, lat, cand, profile, deviation, 1, 100, 19);
  for (std::size_t step : res.detection_steps) CHECK(step == 2);
  CHECK(res.gap <= 0.05);  // wasting control effort cannot pay in this game

  // playing the nominal control is never flagged and changes nothing
  const DeviationResult nominal_res =
      deviation_gap(spec, lat, cand, profile, ControlPath::constant(1, 3), 1, 100, 19);
  for (std::size_t step : nominal_res.detection_steps) CHECK(step == kNotPunished);
  CHECK(nominal_res.gap == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("deviation harness validates its inputs") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 4, 0.4);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const CandidatePair cand = construct_candidate(spec, lat, tables, 2, {-1.0, 1.0, 3}, 0.1);
  const PunishmentProfile profile = build_punishment(cand, tables, 2, 0.1);
  CHECK_THROWS_AS(deviation_gap(spec, lat, cand, profile, ControlPath::constant(1, 7), 1, 60, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(deviation_gap(spec, lat, cand, profile, ControlPath::constant(1, 4), 2, 60, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_punishment(cand, tables, 3, 0.1), std::invalid_argument);
}

TEST_CASE("zero-sum game: punishment caps unilateral deviations") {
  const GameSpec spec = make_catalog_spec("zero-sum-absolute-terminal");
  const LatticeModel lat = make_lattice(spec, 10);
  const NashValueTables tables = compute_nash_values(spec, lat);
  const StateCellPartition cells{-2.0, 2.0, 5};
  const CandidatePair cand = construct_candidate(spec, lat, tables, 2, cells, 0.2, 2);
  REQUIRE(cand.complete);
  const PunishmentProfile punish_p1 = build_punishment(cand, tables, 2, 0.05);

  for (int dev_index = 0; dev_index < 2; ++dev_index) {
    const DeviationResult res = deviation_gap(spec, lat, cand, punish_p1,
                                              ControlPath::constant(dev_index, 10), 1, 400, 23);
    CHECK(res.gap <= 0.3);
  }
}

TEST_CASE("existence scan: payoff ladder settles on the decoupled game") {
  const GameSpec spec = make_catalog_spec("decoupled-quadratic-costs");
  const LatticeModel lat = make_lattice(spec, 10);
  const StateCellPartition cells{-2.0, 2.0, 5};
  const ExistenceScanResult scan =
      existence_scan(spec, lat, {0.2, 0.1}, 2, cells, 300, 31);
  CHECK(scan.payoffs.size() == 2);
  CHECK(scan.diagnostics.empty());
  CHECK(scan.final_distance <= 0.05);

  CHECK_THROWS_AS(existence_scan(spec, lat, {0.1}, 2, cells, 300, 31), std::invalid_argument);
}

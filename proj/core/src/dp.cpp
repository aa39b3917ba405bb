#include "rsgame/dp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsg {

double DpValue::interpolate(std::size_t level, double x) const {
  const auto& row = values[level];
  const std::size_t n = row.size();
  if (n == 1) return row[0];
  const double x_lo = lattice->state(level, 0);
  const double dx = lattice->state(level, 1) - x_lo;
  const double pos = (x - x_lo) / dx;
  if (pos <= 0.0) return row[0];
  if (pos >= static_cast<double>(n - 1)) return row[n - 1];
  const std::size_t k = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * row[k] + w * row[k + 1];
}

namespace {

void check_contraction(const GameSpec& spec, const TimeGrid& grid) {
  if (spec.bounds.lip_running_cost_yz * grid.mesh() >= 1.0)
    throw std::runtime_error("compute_value_dp: L * dt >= 1, driver step not a contraction");
}

// One-step reflected value at (level, node) under control pair (ui, vi).
double one_step(const GameSpec& spec, int j, const LatticeModel& lattice, std::size_t level,
                std::size_t node, std::size_t ui, std::size_t vi,
                const std::vector<double>& next) {
  const double t = lattice.grid().point(level);
  const double dt = lattice.grid().dt(level);
  const double x = lattice.state(level, node);
  const LatticeTransition tr = lattice.transition(level, node, spec.u_set[ui], spec.v_set[vi]);
  double ey = 0.0, eydb = 0.0;
  for (int c = 0; c < tr.count; ++c) {
    const double yn = next[static_cast<std::size_t>(tr.child[c])];
    ey += tr.prob[c] * yn;
    eydb += tr.prob[c] * yn * tr.db[c];
  }
  Vec xv(1), zv(1);
  xv[0] = x;
  zv[0] = eydb / dt;
  double y = ey;
  for (int it = 0; it < 20; ++it) {
    const double fy = spec.cost(j)(t, xv, y, zv, spec.u_set[ui], spec.v_set[vi]);
    const double nexty = ey + fy * dt;
    if (std::abs(nexty - y) <= 1e-12) { y = nexty; break; }
    y = nexty;
  }
  return std::max(y, spec.barrier(j)(t, xv));
}

}  // namespace

DpValue compute_value_dp_segment(const GameSpec& spec, int j, HamiltonianMode mode,
                                 const LatticeModel& lattice, std::size_t i1, std::size_t i2,
                                 const std::vector<double>& terminal_values,
                                 bool maximizer_is_v) {
  if (i1 >= i2 || i2 > lattice.depth())
    throw std::invalid_argument("compute_value_dp_segment: bad level indices");
  if (terminal_values.size() != lattice.num_nodes(i2))
    throw std::invalid_argument("compute_value_dp_segment: terminal size mismatch");
  check_contraction(spec, lattice.grid());

  DpValue dp;
  dp.lattice = &lattice;
  dp.player = j;
  dp.mode = mode;
  dp.maximizer_is_v = maximizer_is_v;
  const std::size_t span = i2 - i1;
  dp.values.resize(span + 1);
  dp.saddle.resize(span);
  dp.values[span] = terminal_values;

  const std::size_t nu = spec.u_set.size();
  const std::size_t nv = spec.v_set.size();

  for (std::size_t i = i2; i-- > i1;) {
    const std::size_t li = i - i1;
    const std::size_t nodes = lattice.num_nodes(i);
    dp.values[li].resize(nodes);
    dp.saddle[li].resize(nodes);
    const auto& next = dp.values[li + 1];

    for (std::size_t k = 0; k < nodes; ++k) {
      // Minus: the maximizer moves outside (sup-inf); Plus: the minimizer
      // does (inf-sup). Which physical player maximizes depends on
      // maximizer_is_v.
      const bool outer_u = (mode == HamiltonianMode::Minus) ? !maximizer_is_v : maximizer_is_v;
      const bool outer_max = mode == HamiltonianMode::Minus;
      double best = outer_max ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
      std::size_t best_outer = 0, best_inner = 0;
      const std::size_t outer_count = outer_u ? nu : nv;
      const std::size_t inner_count = outer_u ? nv : nu;

      for (std::size_t oi = 0; oi < outer_count; ++oi) {
        double inner_best = outer_max ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
        std::size_t inner_arg = 0;
        for (std::size_t ii = 0; ii < inner_count; ++ii) {
          const std::size_t ui = outer_u ? oi : ii;
          const std::size_t vi = outer_u ? ii : oi;
          const double val = one_step(spec, j, lattice, i, k, ui, vi, next);
          if (outer_max ? val < inner_best : val > inner_best) {
            inner_best = val;
            inner_arg = ii;
          }
        }
        if (outer_max ? inner_best > best : inner_best < best) {
          best = inner_best;
          best_outer = oi;
          best_inner = inner_arg;
        }
      }
      dp.values[li][k] = best;
      const std::size_t ui = outer_u ? best_outer : best_inner;
      const std::size_t vi = outer_u ? best_inner : best_outer;
      dp.saddle[li][k] = {static_cast<int>(ui), static_cast<int>(vi)};
    }
  }
  return dp;
}

DpValue compute_value_dp(const GameSpec& spec, int j, HamiltonianMode mode,
                         const LatticeModel& lattice, bool maximizer_is_v) {
  const std::size_t n = lattice.depth();
  std::vector<double> terminal(lattice.num_nodes(n));
  for (std::size_t k = 0; k < terminal.size(); ++k) {
    Vec xv(1);
    xv[0] = lattice.state(n, k);
    terminal[k] = spec.terminal(j)(xv);
  }
  return compute_value_dp_segment(spec, j, mode, lattice, 0, n, terminal, maximizer_is_v);
}

double test_dpp(const GameSpec& spec, int j, HamiltonianMode mode, const LatticeModel& lattice,
                std::size_t split_level, bool maximizer_is_v) {
  const std::size_t n = lattice.depth();
  if (split_level > n) throw std::invalid_argument("test_dpp: split level out of range");

  const DpValue full = compute_value_dp(spec, j, mode, lattice, maximizer_is_v);
  if (split_level == 0 || split_level == n) return 0.0;

  std::vector<double> terminal(lattice.num_nodes(n));
  for (std::size_t k = 0; k < terminal.size(); ++k) {
    Vec xv(1);
    xv[0] = lattice.state(n, k);
    terminal[k] = spec.terminal(j)(xv);
  }
  const DpValue inner = compute_value_dp_segment(spec, j, mode, lattice, split_level, n,
                                                 terminal, maximizer_is_v);
  const DpValue outer = compute_value_dp_segment(spec, j, mode, lattice, 0, split_level,
                                                 inner.values[0], maximizer_is_v);
  double worst = 0.0;
  for (std::size_t i = 0; i <= split_level; ++i)
    for (std::size_t k = 0; k < outer.values[i].size(); ++k)
      worst = std::max(worst, std::abs(outer.values[i][k] - full.values[i][k]));
  return worst;
}

RegularityReport regularity_probe(const DpValue& value) {
  const LatticeModel& lat = *value.lattice;
  if (lat.grid().num_points() < 3)
    throw std::invalid_argument("regularity_probe: need at least 3 time levels");
  RegularityReport rep;
  const std::size_t levels = value.values.size();
  for (std::size_t i = 0; i < levels; ++i) {
    const auto& row = value.values[i];
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
      const double dx = lat.state(i, k + 1) - lat.state(i, k);
      rep.lipschitz_x = std::max(rep.lipschitz_x, std::abs(row[k + 1] - row[k]) / dx);
    }
  }
  // fixed-state comparison across adjacent levels (trinomial: node k at
  // level i and node k+1 at level i+1 share the same state)
  if (lat.kind() == LatticeModel::Kind::Trinomial) {
    for (std::size_t i = 0; i + 1 < levels; ++i) {
      const double dt = lat.grid().dt(i);
      for (std::size_t k = 0; k < value.values[i].size(); ++k) {
        const double x = lat.state(i, k);
        const double dw = std::abs(value.values[i][k] - value.values[i + 1][k + 1]);
        rep.holder_t = std::max(rep.holder_t, dw / ((1.0 + std::abs(x)) * std::sqrt(dt)));
      }
    }
  }
  return rep;
}

CoincidenceReport coincidence_test(const GameSpec& spec, const LatticeModel& lattice,
                                   std::size_t isaacs_samples, std::uint64_t seed) {
  CoincidenceReport rep;
  const double T = lattice.grid().horizon();
  const std::size_t n = lattice.depth();
  double radius = 1.0;
  for (std::size_t k = 0; k < lattice.num_nodes(n); ++k)
    radius = std::max(radius, std::abs(lattice.state(n, k)));
  const IsaacsScanResult scan = isaacs_scan(spec, T, radius, isaacs_samples, seed);
  if (!scan.satisfied) {
    rep.refused = true;
    rep.message = "Isaacs condition fails (max gap " + std::to_string(scan.max_gap) +
                  "); coincidence gap carries no meaning";
    return rep;
  }

  for (int j = 1; j <= 2; ++j) {
    const DpValue w = compute_value_dp(spec, j, HamiltonianMode::Minus, lattice);
    const DpValue uval = compute_value_dp(spec, j, HamiltonianMode::Plus, lattice);
    for (std::size_t i = 0; i < w.values.size(); ++i)
      for (std::size_t k = 0; k < w.values[i].size(); ++k)
        rep.max_gap = std::max(rep.max_gap, std::abs(w.values[i][k] - uval.values[i][k]));
  }
  return rep;
}

ValueGrid tabulate_dp(const DpValue& value, const SpaceGrid& space) {
  space.validate();
  const LatticeModel& lat = *value.lattice;
  ValueGrid grid;
  grid.times = lat.grid();
  grid.space = space;
  grid.player = value.player;
  grid.mode = value.mode;
  grid.provenance = ValueProvenance::Dp;
  const std::size_t nt = grid.times.num_points();
  grid.values.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(space.num_points));
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t k = 0; k < space.num_points; ++k)
      grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          value.interpolate(i, space.point(k));
  return grid;
}

}  // namespace rsg

#include "rsgame/pde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsgame/rng.hpp"

namespace rsg {

void SpaceGrid::validate() const {
  if (num_points < 5) throw std::invalid_argument("SpaceGrid: need at least 5 points");
  if (x_max <= x_min) throw std::invalid_argument("SpaceGrid: x_max must exceed x_min");
}

double ValueGrid::interpolate(std::size_t time_index, double x) const {
  const double dx = space.dx();
  const double pos = (x - space.x_min) / dx;
  if (pos <= 0.0) return at(time_index, 0);
  const std::size_t last = space.num_points - 1;
  if (pos >= static_cast<double>(last)) return at(time_index, last);
  const std::size_t k = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * at(time_index, k) + w * at(time_index, k + 1);
}

namespace {

double eval_h(const GameSpec& spec, int j, double t, double x, double y, double p, double A,
              std::size_t ui, std::size_t vi) {
  Vec xv(1);
  xv[0] = x;
  const Vec& u = spec.u_set[ui];
  const Vec& v = spec.v_set[vi];
  const double b = spec.drift(t, xv, u, v)(0);
  const double sig = spec.diffusion(t, xv, u, v)(0, 0);
  Vec zv(1);
  zv[0] = p * sig;
  return 0.5 * sig * sig * A + p * b + spec.cost(j)(t, xv, y, zv, u, v);
}

template <typename Fn>
void enumerate_minimax(std::size_t nu, std::size_t nv, const Fn& value, double* minus,
                       double* plus, std::size_t* argmax_u, std::size_t* argmin_v) {
  // sup_u inf_v
  double best_u = -std::numeric_limits<double>::infinity();
  std::size_t au = 0, av = 0;
  for (std::size_t ui = 0; ui < nu; ++ui) {
    double worst_v = std::numeric_limits<double>::infinity();
    std::size_t wv = 0;
    for (std::size_t vi = 0; vi < nv; ++vi) {
      const double h = value(ui, vi);
      if (h < worst_v) { worst_v = h; wv = vi; }
    }
    if (worst_v > best_u) { best_u = worst_v; au = ui; av = wv; }
  }
  *minus = best_u;
  if (argmax_u) *argmax_u = au;
  if (argmin_v) *argmin_v = av;

  // inf_v sup_u
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t vi = 0; vi < nv; ++vi) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t ui = 0; ui < nu; ++ui) top = std::max(top, value(ui, vi));
    best_v = std::min(best_v, top);
  }
  *plus = best_v;
}

}  // namespace

HamiltonianReport hamiltonian(const GameSpec& spec, int j, double t, double x, double y,
                              double p, double A, HamiltonianMode mode) {
  HamiltonianReport rep;
  enumerate_minimax(spec.u_set.size(), spec.v_set.size(),
                    [&](std::size_t ui, std::size_t vi) { return eval_h(spec, j, t, x, y, p, A, ui, vi); },
                    &rep.minus, &rep.plus, &rep.argmax_u, &rep.argmin_v);
  rep.gap = rep.plus - rep.minus;
  rep.value = mode == HamiltonianMode::Minus ? rep.minus : rep.plus;
  return rep;
}

namespace {

// Upwinded numerical Hamiltonian at interior node k against the next time
// level. The first derivative is one-sided in the direction of b per control
// candidate, which keeps the explicit step monotone under the CFL bound.
double numerical_hamiltonian(const GameSpec& spec, int j, HamiltonianMode mode, double t,
                             const SpaceGrid& space, const std::vector<double>& w,
                             std::size_t k) {
  const double dx = space.dx();
  const double x = space.point(k);
  const std::size_t last = space.num_points - 1;
  // zero-curvature ghost values
  const double w_m = k == 0 ? 2.0 * w[0] - w[1] : w[k - 1];
  const double w_p = k == last ? 2.0 * w[last] - w[last - 1] : w[k + 1];
  const double d2 = (w_p - 2.0 * w[k] + w_m) / (dx * dx);
  const double fwd = (w_p - w[k]) / dx;
  const double bwd = (w[k] - w_m) / dx;
  const double ctr = 0.5 * (fwd + bwd);
  const double y = w[k];

  Vec xv(1);
  xv[0] = x;
  auto value = [&](std::size_t ui, std::size_t vi) {
    const Vec& u = spec.u_set[ui];
    const Vec& v = spec.v_set[vi];
    const double b = spec.drift(t, xv, u, v)(0);
    const double sig = spec.diffusion(t, xv, u, v)(0, 0);
    const double p_up = b >= 0.0 ? fwd : bwd;
    Vec zv(1);
    zv[0] = ctr * sig;
    return 0.5 * sig * sig * d2 + b * p_up + spec.cost(j)(t, xv, y, zv, u, v);
  };
  double minus = 0.0, plus = 0.0;
  enumerate_minimax(spec.u_set.size(), spec.v_set.size(), value, &minus, &plus, nullptr, nullptr);
  return mode == HamiltonianMode::Minus ? minus : plus;
}

void check_cfl(const GameSpec& spec, const TimeGrid& times, const SpaceGrid& space) {
  const double dx = space.dx();
  const double sig = spec.bounds.sup_diffusion;
  const double b = spec.bounds.sup_drift;
  const double limit = dx * dx / (sig * sig + dx * b + 1e-300);
  if (times.mesh() > limit + 1e-14)
    throw std::runtime_error("solve_obstacle_isaacs: CFL violated, dt = " +
                             std::to_string(times.mesh()) + " > " + std::to_string(limit));
}

}  // namespace

ValueGrid solve_obstacle_isaacs(const GameSpec& spec, int j, HamiltonianMode mode,
                                const TimeGrid& times, const SpaceGrid& space) {
  space.validate();
  check_cfl(spec, times, space);

  const std::size_t nt = times.num_points();
  const std::size_t nx = space.num_points;
  ValueGrid grid;
  grid.times = times;
  grid.space = space;
  grid.player = j;
  grid.mode = mode;
  grid.provenance = ValueProvenance::Pde;
  grid.values.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nx));

  std::vector<double> w(nx), w_new(nx);
  for (std::size_t k = 0; k < nx; ++k) {
    Vec xv(1);
    xv[0] = space.point(k);
    w[k] = spec.terminal(j)(xv);
    grid.values(static_cast<Eigen::Index>(nt - 1), static_cast<Eigen::Index>(k)) = w[k];
  }

  for (std::size_t i = nt - 1; i-- > 0;) {
    const double t = times.point(i);
    const double dt = times.dt(i);
    for (std::size_t k = 0; k < nx; ++k) {
      const double ham = numerical_hamiltonian(spec, j, mode, t, space, w, k);
      Vec xv(1);
      xv[0] = space.point(k);
      const double candidate = w[k] + dt * ham;
      w_new[k] = std::max(spec.barrier(j)(t, xv), candidate);
      if (!std::isfinite(w_new[k]))
        throw std::runtime_error("solve_obstacle_isaacs: non-finite value at time level " +
                                 std::to_string(i) + ", node " + std::to_string(k));
    }
    w.swap(w_new);
    for (std::size_t k = 0; k < nx; ++k)
      grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = w[k];
  }
  return grid;
}

double residual_check(const ValueGrid& grid, const GameSpec& spec) {
  const std::size_t nt = grid.times.num_points();
  const std::size_t nx = grid.space.num_points;
  double worst = 0.0;
  std::vector<double> next(nx);
  for (std::size_t i = 0; i + 1 < nt; ++i) {
    const double t = grid.times.point(i);
    const double dt = grid.times.dt(i);
    for (std::size_t k = 0; k < nx; ++k) next[k] = grid.at(i + 1, k);
    for (std::size_t k = 1; k + 1 < nx; ++k) {
      const double ham =
          numerical_hamiltonian(spec, grid.player, grid.mode, t, grid.space, next, k);
      Vec xv(1);
      xv[0] = grid.space.point(k);
      const double parabolic = (grid.at(i, k) - grid.at(i + 1, k)) / dt - ham;
      const double obstacle_slack = grid.at(i, k) - spec.barrier(grid.player)(t, xv);
      worst = std::max(worst, std::abs(std::min(obstacle_slack, parabolic)));
    }
  }
  return worst;
}

IsaacsScanResult isaacs_scan(const GameSpec& spec, double T, double x_radius,
                             std::size_t samples, std::uint64_t seed) {
  const CounterRng rng(seed);
  IsaacsScanResult result;
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = T * rng.uniform(s, 0, 0);
    const double x = x_radius * (2.0 * rng.uniform(s, 0, 1) - 1.0);
    const double y = 2.0 * (2.0 * rng.uniform(s, 0, 2) - 1.0);
    const double p = 3.0 * (2.0 * rng.uniform(s, 0, 3) - 1.0);
    const double A = 3.0 * (2.0 * rng.uniform(s, 0, 4) - 1.0);
    for (int j = 1; j <= 2; ++j) {
      const HamiltonianReport rep = hamiltonian(spec, j, t, x, y, p, A, HamiltonianMode::Minus);
      result.max_gap = std::max(result.max_gap, rep.gap);
      total += rep.gap;
    }
  }
  result.mean_gap = total / (2.0 * static_cast<double>(samples));
  result.satisfied = result.max_gap <= 1e-9;
  return result;
}

SchemeOrderingReport scheme_comparison_test(const GameSpec& spec_a, const GameSpec& spec_b,
                                            int j, HamiltonianMode mode, const TimeGrid& times,
                                            const SpaceGrid& space) {
  // precondition: ordered data on the grid
  const Vec z0 = Vec::Zero(1);
  for (std::size_t k = 0; k < space.num_points; ++k) {
    Vec xv(1);
    xv[0] = space.point(k);
    if (spec_a.terminal(j)(xv) > spec_b.terminal(j)(xv) + 1e-12)
      throw std::invalid_argument("scheme_comparison_test: terminal data not ordered");
    for (std::size_t i = 0; i < times.num_points(); ++i) {
      const double t = times.point(i);
      if (spec_a.barrier(j)(t, xv) > spec_b.barrier(j)(t, xv) + 1e-12)
        throw std::invalid_argument("scheme_comparison_test: obstacle data not ordered");
      for (std::size_t ui = 0; ui < spec_a.u_set.size(); ++ui)
        for (std::size_t vi = 0; vi < spec_a.v_set.size(); ++vi)
          if (spec_a.cost(j)(t, xv, 0.0, z0, spec_a.u_set[ui], spec_a.v_set[vi]) >
              spec_b.cost(j)(t, xv, 0.0, z0, spec_b.u_set[ui], spec_b.v_set[vi]) + 1e-12)
            throw std::invalid_argument("scheme_comparison_test: driver data not ordered");
    }
  }

  const ValueGrid wa = solve_obstacle_isaacs(spec_a, j, mode, times, space);
  const ValueGrid wb = solve_obstacle_isaacs(spec_b, j, mode, times, space);
  SchemeOrderingReport rep;
  for (std::size_t i = 0; i < times.num_points(); ++i) {
    for (std::size_t k = 0; k < space.num_points; ++k) {
      const double excess = wa.at(i, k) - wb.at(i, k);
      if (excess > 1e-12) {
        ++rep.violations;
        rep.max_excess = std::max(rep.max_excess, excess);
      }
      rep.max_gap = std::max(rep.max_gap, -excess);
    }
  }
  return rep;
}

}  // namespace rsg

#include "rsgame/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "rsgame/rng.hpp"

namespace rsg {
namespace {

void check_finite(const Vec& x, std::size_t path, std::size_t step) {
  if (!x.allFinite())
    throw std::runtime_error("simulate_forward: non-finite state at path " +
                             std::to_string(path) + ", step " + std::to_string(step));
}

template <typename ControlFn>
void run_paths(const GameSpec& spec, const TimeGrid& grid, const Vec& x0,
               std::size_t num_paths, std::uint64_t seed, const ControlFn& controls,
               std::vector<Mat>& states, std::vector<Mat>& increments) {
  const std::size_t steps = grid.num_steps();
  const int n = spec.state_dim;
  const int d = spec.noise_dim;
  const CounterRng rng(seed);

  states.assign(num_paths, Mat(steps + 1, n));
  increments.assign(num_paths, Mat(steps, d));

  auto simulate_one = [&](std::size_t p) {
    Vec x = x0;
    states[p].row(0) = x.transpose();
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = grid.point(i);
      const double dt = grid.dt(i);
      const double sqdt = std::sqrt(dt);
      Vec db(d);
      for (int k = 0; k < d; ++k)
        db[k] = sqdt * rng.normal(p, i, static_cast<std::uint64_t>(k));
      increments[p].row(i) = db.transpose();

      const auto [u, v] = controls(i, x, p);
      x = x + spec.drift(t, x, u, v) * dt + spec.diffusion(t, x, u, v) * db;
      check_finite(x, p, i + 1);
      states[p].row(i + 1) = x.transpose();
    }
  };

  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (num_paths < 64 || hw == 1) {
    for (std::size_t p = 0; p < num_paths; ++p) simulate_one(p);
  } else {
    const std::size_t workers = std::min(hw, num_paths);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < num_paths; p += workers) simulate_one(p);
      });
    }
    for (auto& th : pool) th.join();
  }
}

}  // namespace

PathBundle simulate_forward(const GameSpec& spec, const TimeGrid& grid, const Vec& x0,
                            const ControlPath& u, const ControlPath& v,
                            std::size_t num_paths, std::uint64_t seed) {
  if (num_paths == 0) throw std::invalid_argument("simulate_forward: num_paths must be >= 1");
  if (u.size() != grid.num_steps() || v.size() != grid.num_steps())
    throw std::invalid_argument("simulate_forward: control path length must equal grid intervals");

  PathBundle bundle;
  bundle.grid = grid;
  bundle.x0 = x0;
  bundle.seed = seed;
  auto controls = [&](std::size_t i, const Vec&, std::size_t) {
    return std::pair<const Vec&, const Vec&>(spec.u_set[static_cast<std::size_t>(u[i])],
                                             spec.v_set[static_cast<std::size_t>(v[i])]);
  };
  run_paths(spec, grid, x0, num_paths, seed, controls, bundle.states, bundle.increments);
  return bundle;
}

PathBundle simulate_feedback(const GameSpec& spec, const TimeGrid& grid, const Vec& x0,
                             const FeedbackPolicy& policy, std::size_t num_paths,
                             std::uint64_t seed,
                             std::vector<std::vector<int>>* u_applied,
                             std::vector<std::vector<int>>* v_applied) {
  if (num_paths == 0) throw std::invalid_argument("simulate_feedback: num_paths must be >= 1");
  PathBundle bundle;
  bundle.grid = grid;
  bundle.x0 = x0;
  bundle.seed = seed;
  if (u_applied) u_applied->assign(num_paths, std::vector<int>(grid.num_steps(), 0));
  if (v_applied) v_applied->assign(num_paths, std::vector<int>(grid.num_steps(), 0));

  auto controls = [&](std::size_t i, const Vec& x, std::size_t p) {
    const auto [ui, vi] = policy(i, x, p);
    if (u_applied) (*u_applied)[p][i] = ui;
    if (v_applied) (*v_applied)[p][i] = vi;
    return std::pair<const Vec&, const Vec&>(spec.u_set[static_cast<std::size_t>(ui)],
                                             spec.v_set[static_cast<std::size_t>(vi)]);
  };
  run_paths(spec, grid, x0, num_paths, seed, controls, bundle.states, bundle.increments);
  return bundle;
}

MomentReport moment_report(const PathBundle& bundle, int p, const PathBundle* paired) {
  if (bundle.num_paths() == 0) throw std::invalid_argument("moment_report: empty bundle");
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("moment_report: p must be even and >= 2");

  MomentReport rep;
  const std::size_t paths = bundle.num_paths();
  const std::size_t points = bundle.grid.num_points();

  for (std::size_t i = 0; i < points; ++i) {
    double acc = 0.0;
    for (std::size_t q = 0; q < paths; ++q)
      acc += std::pow(bundle.states[q].row(i).norm(), p);
    rep.sup_abs_moment = std::max(rep.sup_abs_moment, acc / static_cast<double>(paths));
  }

  double mean = 0.0, sq = 0.0;
  for (std::size_t q = 0; q < paths; ++q) {
    const double xt = bundle.states[q](points - 1, 0);
    mean += xt;
    sq += xt * xt;
  }
  mean /= static_cast<double>(paths);
  rep.terminal_mean = mean;
  rep.terminal_variance = sq / static_cast<double>(paths) - mean * mean;

  if (paired) {
    if (paired->num_paths() != paths || paired->grid.num_points() != points)
      throw std::invalid_argument("moment_report: paired bundle shape mismatch");
    double acc = 0.0;
    for (std::size_t q = 0; q < paths; ++q) {
      double sup = 0.0;
      for (std::size_t i = 0; i < points; ++i)
        sup = std::max(sup, (bundle.states[q].row(i) - paired->states[q].row(i)).norm());
      acc += std::pow(sup, p);
    }
    rep.sup_gap_moment = acc / static_cast<double>(paths);
  }
  return rep;
}

}  // namespace rsg

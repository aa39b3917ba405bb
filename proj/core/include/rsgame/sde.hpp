#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rsgame/game_spec.hpp"
#include "rsgame/grid.hpp"

namespace rsg {

/// Monte Carlo forward paths with their Brownian increments.
/// Storage is path-major: states[p] is a (num_points x state_dim) matrix,
/// increments[p] is a (num_steps x noise_dim) matrix.
struct PathBundle {
  TimeGrid grid;
  Vec x0;
  std::vector<Mat> states;
  std::vector<Mat> increments;
  std::uint64_t seed = 0;

  std::size_t num_paths() const { return states.size(); }
  double state1(std::size_t path, std::size_t i) const { return states[path](i, 0); }
};

/// Feedback policy: control-set indices (u, v) as a function of step and state.
using FeedbackPolicy = std::function<std::pair<int, int>(std::size_t step, const Vec& x,
                                                         std::size_t path)>;

/// Euler-Maruyama forward simulation under deterministic piecewise-constant
/// controls. Identical (seed, path) pairs give identical paths regardless of
/// scheduling. Throws on non-finite states, identifying path and step.
PathBundle simulate_forward(const GameSpec& spec, const TimeGrid& grid, const Vec& x0,
                            const ControlPath& u, const ControlPath& v,
                            std::size_t num_paths, std::uint64_t seed);

/// Same scheme with per-step feedback controls; the applied control indices
/// are returned through u_applied / v_applied (path-major, one per interval).
PathBundle simulate_feedback(const GameSpec& spec, const TimeGrid& grid, const Vec& x0,
                             const FeedbackPolicy& policy, std::size_t num_paths,
                             std::uint64_t seed,
                             std::vector<std::vector<int>>* u_applied = nullptr,
                             std::vector<std::vector<int>>* v_applied = nullptr);

struct MomentReport {
  double sup_abs_moment = 0.0;       // sup over grid of E[|X_s|^p]
  double terminal_mean = 0.0;        // componentwise mean of X_T (first component)
  double terminal_variance = 0.0;    // first component
  double sup_gap_moment = 0.0;       // E[sup_s |X_s - X'_s|^p] against a paired bundle
};

/// Empirical p-th moment statistics; `paired` may be null.
MomentReport moment_report(const PathBundle& bundle, int p, const PathBundle* paired = nullptr);

}  // namespace rsg

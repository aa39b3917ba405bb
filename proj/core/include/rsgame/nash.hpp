#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rsgame/dp.hpp"
#include "rsgame/lattice.hpp"
#include "rsgame/sde.hpp"

namespace rsg {

/// Uniform partition of the truncated state range into cells; feedback
/// controls are constant per (partition interval, cell).
struct StateCellPartition {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t num_cells = 1;

  double width() const { return (x_max - x_min) / static_cast<double>(num_cells); }
  std::size_t cell_of(double x) const;
  double center(std::size_t cell) const {
    return x_min + (static_cast<double>(cell) + 0.5) * width();
  }
};

/// Candidate equilibrium control pair: per partition interval and state cell,
/// a short control-pair sequence (chattering over the lattice sub-steps of
/// the interval; length 1 = constant pair).
struct CandidatePair {
  std::vector<std::size_t> partition_levels;  // lattice levels of the partition points
  StateCellPartition cells;
  double epsilon = 0.0;
  // controls[interval][cell] -> chattering sequence of (u index, v index)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> controls;
  std::vector<std::vector<double>> margins;  // worst-player slack per interval/cell
  bool complete = false;
  std::vector<std::pair<std::size_t, std::size_t>> failed_cells;  // (interval, cell)

  /// Control pair assigned at a lattice step given the current state.
  std::pair<int, int> at_step(std::size_t lattice_step, double x) const;
};

/// Value tables the candidate search and the punishment construction need:
/// W1 = sup-inf for J1 (u maximizes), W2 = sup-inf for J2 (v maximizes),
/// plus the inf-sup counterparts whose outer-minimizer feedback is what a
/// punisher plays (under the Isaacs condition the values coincide).
struct NashValueTables {
  DpValue w1;
  DpValue w2;
  DpValue w1_guarantee;  // inf_v sup_u for J1; its v-feedback punishes player 1
  DpValue w2_guarantee;  // inf_u sup_v for J2; its u-feedback punishes player 2
};

NashValueTables compute_nash_values(const GameSpec& spec, const LatticeModel& lattice);

/// Per-interval, per-cell search for a control-pair sequence satisfying the
/// one-step inequality W_j(t_i, x_cell) - eps <= G_{t_i,t_{i+1}}[W_j(t_{i+1}, .)]
/// for both players simultaneously. Refuses to run when the Isaacs scan
/// fails. On unreachable cells the result carries the cell list and best
/// margins rather than silently degrading.
CandidatePair construct_candidate(const GameSpec& spec, const LatticeModel& lattice,
                                  const NashValueTables& tables, std::size_t partition_stride,
                                  const StateCellPartition& cells, double epsilon,
                                  int chattering_depth = 1);

struct NashCertificate {
  double payoffs[2] = {0.0, 0.0};
  double payoff_stderr[2] = {0.0, 0.0};
  double epsilon = 0.0;
  // empirical P(Y_s >= W_j(s, X_s) - eps) per player, per grid checkpoint
  std::vector<double> probabilities[2];
  double min_probability = 1.0;
  bool accepted = false;
  std::string note;
};

/// Simulates the candidate feedback pair, solves the controlled RBSDE for
/// each player along the paths, and checks the closeness conditions at every
/// grid time. Payoffs are the empirical cost functionals.
NashCertificate verify_conditions(const GameSpec& spec, const LatticeModel& lattice,
                                  const CandidatePair& candidate, const NashValueTables& tables,
                                  double epsilon, std::size_t num_paths, std::uint64_t seed);

/// Punishment profile for one player: play the nominal candidate control
/// until the opponent's observed control mismatches the nominal one, then
/// (from the next grid time on) switch to the zero-sum saddle feedback that
/// punishes the deviator.
struct PunishmentProfile {
  int punisher = 2;  // 2 punishes player 1's deviations, 1 punishes player 2's
  const CandidatePair* nominal = nullptr;
  const DpValue* saddle_source = nullptr;  // W1 for punisher 2, W2 for punisher 1
  double epsilon1 = 0.0;

  /// Own control at a lattice step given the state and whether a deviation
  /// was detected at any earlier step.
  int control_at(std::size_t lattice_step, double x, bool detected) const;
};

PunishmentProfile build_punishment(const CandidatePair& candidate, const NashValueTables& tables,
                                   int punisher, double epsilon1);

struct DeviationResult {
  double payoff_nominal = 0.0;
  double payoff_deviation = 0.0;
  double gap = 0.0;  // deviation - nominal for the deviating player
  std::vector<std::size_t> detection_steps;  // per path, first punished step (or npos)
};

/// Player j deviates to the given control path; the opponent follows its
/// punishment profile. Returns the deviator's payoff change.
DeviationResult deviation_gap(const GameSpec& spec, const LatticeModel& lattice,
                              const CandidatePair& candidate, const PunishmentProfile& profile,
                              const ControlPath& deviation, int j, std::size_t num_paths,
                              std::uint64_t seed);

struct ExistenceScanResult {
  std::vector<double> ladder;
  std::vector<std::pair<double, double>> payoffs;
  double final_distance = 0.0;  // distance between the last two payoff pairs
  std::vector<std::string> diagnostics;
};

/// Runs construct + verify for each epsilon in the ladder and reports the
/// payoff sequence and its Cauchy behavior.
ExistenceScanResult existence_scan(const GameSpec& spec, const LatticeModel& lattice,
                                   const std::vector<double>& ladder,
                                   std::size_t partition_stride, const StateCellPartition& cells,
                                   std::size_t num_paths, std::uint64_t seed);

}  // namespace rsg

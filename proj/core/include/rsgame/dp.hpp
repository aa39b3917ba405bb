#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsgame/lattice.hpp"
#include "rsgame/pde.hpp"

namespace rsg {

/// Game value computed by lattice dynamic programming, with the per-node
/// minimax control selection recorded for reproducibility and for the
/// punishment construction.
struct DpValue {
  const LatticeModel* lattice = nullptr;
  int player = 1;
  HamiltonianMode mode = HamiltonianMode::Minus;
  bool maximizer_is_v = false;  // player 2's value uses sup over v, inf over u
  std::vector<std::vector<double>> values;                 // per level, per node
  std::vector<std::vector<std::pair<int, int>>> saddle;    // chosen (u index, v index)

  double root() const { return values[0][0]; }
  double interpolate(std::size_t level, double x) const;
};

/// Backward minimax over lattice levels: at each node enumerate control
/// pairs, apply the one-step reflected operator (exact expectation, implicit
/// driver step, projection on h_j), then sup-inf (Minus) or inf-sup (Plus).
/// Ties break toward the lowest control index.
DpValue compute_value_dp(const GameSpec& spec, int j, HamiltonianMode mode,
                         const LatticeModel& lattice, bool maximizer_is_v = false);

/// DP over levels [i1, i2] only, from given terminal data at level i2.
DpValue compute_value_dp_segment(const GameSpec& spec, int j, HamiltonianMode mode,
                                 const LatticeModel& lattice, std::size_t i1, std::size_t i2,
                                 const std::vector<double>& terminal_values,
                                 bool maximizer_is_v = false);

/// Split-composition check of the dynamic programming principle: value in
/// one pass vs inner value at level k re-used as terminal data for an outer
/// pass. Returns the max node discrepancy (exactly 0 for exact lattice
/// arithmetic).
double test_dpp(const GameSpec& spec, int j, HamiltonianMode mode, const LatticeModel& lattice,
                std::size_t split_level, bool maximizer_is_v = false);

struct RegularityReport {
  double lipschitz_x = 0.0;  // max |dW| / |dx| over same-level neighbors
  double holder_t = 0.0;     // max |dW| / ((1+|x|) sqrt(dt)) at fixed state
};

RegularityReport regularity_probe(const DpValue& value);

struct CoincidenceReport {
  bool refused = false;
  std::string message;
  double max_gap = 0.0;  // max over players and nodes of |W_j - U_j|
};

/// Computes both minimax conventions and reports the worst node gap;
/// refuses when the Isaacs scan fails (the gap then carries no meaning).
CoincidenceReport coincidence_test(const GameSpec& spec, const LatticeModel& lattice,
                                   std::size_t isaacs_samples = 2000,
                                   std::uint64_t seed = 7);

/// Interpolates DP values onto a uniform time-space grid (provenance Dp).
ValueGrid tabulate_dp(const DpValue& value, const SpaceGrid& space);

}  // namespace rsg

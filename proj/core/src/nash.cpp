#include "rsgame/nash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsgame/lsmc.hpp"
#include "rsgame/pde.hpp"
#include "rsgame/rbsde_tree.hpp"

namespace rsg {

std::size_t StateCellPartition::cell_of(double x) const {
  if (x <= x_min) return 0;
  if (x >= x_max) return num_cells - 1;
  return std::min(num_cells - 1, static_cast<std::size_t>((x - x_min) / width()));
}

std::pair<int, int> CandidatePair::at_step(std::size_t lattice_step, double x) const {
  std::size_t interval = 0;
  while (interval + 1 < partition_levels.size() - 1 &&
         partition_levels[interval + 1] <= lattice_step)
    ++interval;
  const std::size_t cell = cells.cell_of(x);
  const auto& seq = controls[interval][cell];
  const std::size_t sub = (lattice_step - partition_levels[interval]) % seq.size();
  return seq[sub];
}

NashValueTables compute_nash_values(const GameSpec& spec, const LatticeModel& lattice) {
  NashValueTables tables;
  tables.w1 = compute_value_dp(spec, 1, HamiltonianMode::Minus, lattice, false);
  tables.w2 = compute_value_dp(spec, 2, HamiltonianMode::Minus, lattice, true);
  tables.w1_guarantee = compute_value_dp(spec, 1, HamiltonianMode::Plus, lattice, false);
  tables.w2_guarantee = compute_value_dp(spec, 2, HamiltonianMode::Plus, lattice, true);
  return tables;
}

namespace {

double lattice_radius(const LatticeModel& lattice) {
  double r = 1.0;
  const std::size_t n = lattice.depth();
  for (std::size_t k = 0; k < lattice.num_nodes(n); ++k)
    r = std::max(r, std::abs(lattice.state(n, k)));
  return r;
}

// Candidate chattering sequences: all constant pairs, then (depth 2) all
// ordered pairs of pairs.
std::vector<std::vector<std::pair<int, int>>> candidate_sequences(std::size_t nu, std::size_t nv,
                                                                  int depth) {
  std::vector<std::vector<std::pair<int, int>>> seqs;
  for (std::size_t ui = 0; ui < nu; ++ui)
    for (std::size_t vi = 0; vi < nv; ++vi)
      seqs.push_back({{static_cast<int>(ui), static_cast<int>(vi)}});
  if (depth >= 2) {
    const std::size_t constants = seqs.size();
    for (std::size_t a = 0; a < constants; ++a)
      for (std::size_t b = 0; b < constants; ++b)
        if (a != b) seqs.push_back({seqs[a][0], seqs[b][0]});
  }
  return seqs;
}

// G_{t_{l0}, t_{l1}}[W_j(t_{l1}, .)] started from x_c, under a fixed control
// sequence. Both the terminal data and the semigroup are evaluated on the
// same local lattice rooted at (t_{l0}, x_c): `eta` holds the local DP values
// at level seg_steps, so no cross-lattice interpolation enters.
double one_interval_semigroup(const GameSpec& spec, const LatticeModel& local, int j,
                              std::size_t seg_steps, const std::vector<double>& eta,
                              const std::vector<std::pair<int, int>>& seq) {
  ControlPath u, v;
  u.indices.resize(seg_steps);
  v.indices.resize(seg_steps);
  for (std::size_t s = 0; s < seg_steps; ++s) {
    const auto& pair = seq[s % seq.size()];
    u.indices[s] = pair.first;
    v.indices[s] = pair.second;
  }

  const TimeGrid& grid = local.grid();
  LatticeProblem problem;
  problem.driver = [&spec, j, &grid, seg_steps, &u, &v](double t, double x, double y, double z) {
    std::size_t i = 0;
    while (i + 1 < seg_steps && grid.point(i + 1) <= t + 1e-14) ++i;
    Vec xv(1), zv(1);
    xv[0] = x;
    zv[0] = z;
    return spec.cost(j)(t, xv, y, zv, spec.u_set[static_cast<std::size_t>(u[i])],
                        spec.v_set[static_cast<std::size_t>(v[i])]);
  };
  problem.obstacle = [&spec, j](double t, double x) {
    Vec xv(1);
    xv[0] = x;
    return spec.barrier(j)(t, xv);
  };
  problem.terminal = [](double) { return 0.0; };  // unused; eta supplied below

  const LatticeSolution sol = solve_tree_segment(local, problem, spec, u, v, 0, seg_steps, eta);
  return sol.y0;
}

PathProblem per_path_problem(const GameSpec& spec, const PathBundle& bundle, int j,
                             const std::vector<std::vector<int>>& u_applied,
                             const std::vector<std::vector<int>>& v_applied) {
  PathProblem problem;
  problem.driver = [&spec, &bundle, j, &u_applied, &v_applied](std::size_t i, std::size_t p,
                                                               double y, const Vec& z) {
    const double t = bundle.grid.point(i);
    const Vec x = bundle.states[p].row(i).transpose();
    return spec.cost(j)(t, x, y, z, spec.u_set[static_cast<std::size_t>(u_applied[p][i])],
                        spec.v_set[static_cast<std::size_t>(v_applied[p][i])]);
  };
  const std::size_t steps = bundle.grid.num_steps();
  problem.terminal.resize(bundle.num_paths());
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    problem.terminal[p] = spec.terminal(j)(bundle.states[p].row(steps).transpose());
  problem.obstacle.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    problem.obstacle[i].resize(bundle.num_paths());
    const double t = bundle.grid.point(i);
    for (std::size_t p = 0; p < bundle.num_paths(); ++p)
      problem.obstacle[i][p] = spec.barrier(j)(t, bundle.states[p].row(i).transpose());
  }
  return problem;
}

}  // namespace

CandidatePair construct_candidate(const GameSpec& spec, const LatticeModel& lattice,
                                  const NashValueTables& tables, std::size_t partition_stride,
                                  const StateCellPartition& cells, double epsilon,
                                  int chattering_depth) {
  if (partition_stride == 0) throw std::invalid_argument("construct_candidate: zero stride");
  const IsaacsScanResult scan =
      isaacs_scan(spec, lattice.grid().horizon(), lattice_radius(lattice), 2000, 11);
  if (!scan.satisfied)
    throw std::runtime_error("construct_candidate: Isaacs condition fails (max gap " +
                             std::to_string(scan.max_gap) + ")");

  CandidatePair cand;
  cand.cells = cells;
  cand.epsilon = epsilon;
  const std::size_t depth = lattice.depth();
  for (std::size_t l = 0; l < depth; l += partition_stride) cand.partition_levels.push_back(l);
  cand.partition_levels.push_back(depth);

  const auto seqs = candidate_sequences(spec.u_set.size(), spec.v_set.size(), chattering_depth);
  const std::size_t intervals = cand.partition_levels.size() - 1;
  cand.controls.resize(intervals);
  cand.margins.resize(intervals);

  for (std::size_t i = 0; i < intervals; ++i) {
    const std::size_t l0 = cand.partition_levels[i];
    const std::size_t l1 = cand.partition_levels[i + 1];
    cand.controls[i].resize(cells.num_cells);
    cand.margins[i].resize(cells.num_cells);

    for (std::size_t c = 0; c < cells.num_cells; ++c) {
      const double xc = cells.center(c);
      // value tables local to the cell: a lattice rooted at (t_{l0}, x_c)
      // over the remaining horizon covers exactly the states the interval
      // semigroup reaches, which the global cone does not at early levels
      const TimeGrid tail = lattice.grid().segment(l0, depth);
      const LatticeModel local =
          LatticeModel::trinomial(spec, xc, tail, LatticeModel::default_spacing(spec, tail));
      const DpValue w1_local = compute_value_dp(spec, 1, HamiltonianMode::Minus, local, false);
      const DpValue w2_local = compute_value_dp(spec, 2, HamiltonianMode::Minus, local, true);
      const double target1 = w1_local.root() - epsilon;
      const double target2 = w2_local.root() - epsilon;
      const std::size_t seg_steps = l1 - l0;
      const std::vector<double>& eta1 = w1_local.values[seg_steps];
      const std::vector<double>& eta2 = w2_local.values[seg_steps];

      double best_margin = -std::numeric_limits<double>::infinity();
      std::size_t best_seq = 0;
      for (std::size_t s = 0; s < seqs.size(); ++s) {
        const double g1 = one_interval_semigroup(spec, local, 1, seg_steps, eta1, seqs[s]);
        const double margin1 = g1 - target1;
        if (margin1 <= best_margin) continue;  // min over players can't beat best
        const double g2 = one_interval_semigroup(spec, local, 2, seg_steps, eta2, seqs[s]);
        const double margin = std::min(margin1, g2 - target2);
        if (margin > best_margin) {
          best_margin = margin;
          best_seq = s;
        }
      }
      cand.controls[i][c] = seqs[best_seq];
      cand.margins[i][c] = best_margin;
      if (best_margin < 0.0) cand.failed_cells.push_back({i, c});
    }
  }
  cand.complete = cand.failed_cells.empty();
  return cand;
}

NashCertificate verify_conditions(const GameSpec& spec, const LatticeModel& lattice,
                                  const CandidatePair& candidate, const NashValueTables& tables,
                                  double epsilon, std::size_t num_paths, std::uint64_t seed) {
  NashCertificate cert;
  cert.epsilon = epsilon;

  std::vector<std::vector<int>> u_applied, v_applied;
  const FeedbackPolicy policy = [&candidate](std::size_t step, const Vec& x, std::size_t) {
    return candidate.at_step(step, x[0]);
  };
  const PathBundle bundle = simulate_feedback(spec, lattice.grid(), Vec::Constant(1, lattice.x0()),
                                              policy, num_paths, seed, &u_applied, &v_applied);

  const std::size_t points = lattice.grid().num_points();
  for (int j = 1; j <= 2; ++j) {
    const DpValue& wj = j == 1 ? tables.w1 : tables.w2;
    const PathProblem problem = per_path_problem(spec, bundle, j, u_applied, v_applied);
    const PathSolution sol = solve_lsmc(bundle, problem);
    cert.payoffs[j - 1] = sol.y0;
    cert.payoff_stderr[j - 1] = sol.y0_stderr;

    auto& probs = cert.probabilities[j - 1];
    probs.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      std::size_t good = 0;
      for (std::size_t p = 0; p < num_paths; ++p) {
        const double w = wj.interpolate(i, bundle.state1(p, i));
        if (sol.y[i][p] >= w - epsilon) ++good;
      }
      probs[i] = static_cast<double>(good) / static_cast<double>(num_paths);
      cert.min_probability = std::min(cert.min_probability, probs[i]);
    }
  }
  cert.accepted = cert.min_probability >= 1.0 - epsilon;
  if (!cert.accepted)
    cert.note = "closeness condition fails: min probability " +
                std::to_string(cert.min_probability) + " < " + std::to_string(1.0 - epsilon);
  return cert;
}

int PunishmentProfile::control_at(std::size_t lattice_step, double x, bool detected) const {
  if (!detected) {
    const auto pair = nominal->at_step(lattice_step, x);
    return punisher == 2 ? pair.second : pair.first;
  }
  const LatticeModel& lat = *saddle_source->lattice;
  const std::size_t level = std::min(lattice_step, lat.depth() - 1);
  // nearest lattice node at this level
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lat.num_nodes(level); ++k) {
    const double dist = std::abs(lat.state(level, k) - x);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  const auto& chosen = saddle_source->saddle[level][best];
  return punisher == 2 ? chosen.second : chosen.first;
}

PunishmentProfile build_punishment(const CandidatePair& candidate, const NashValueTables& tables,
                                   int punisher, double epsilon1) {
  if (punisher != 1 && punisher != 2)
    throw std::invalid_argument("build_punishment: punisher must be 1 or 2");
  PunishmentProfile profile;
  profile.punisher = punisher;
  profile.nominal = &candidate;
  profile.epsilon1 = epsilon1;
  // player 2 punishes deviations in J1's game, player 1 in J2's; the
  // outer-minimizer feedback of the guaranteed (inf-sup) value is what
  // caps the deviator's payoff
  profile.saddle_source = punisher == 2 ? &tables.w1_guarantee : &tables.w2_guarantee;
  return profile;
}

DeviationResult deviation_gap(const GameSpec& spec, const LatticeModel& lattice,
                              const CandidatePair& candidate, const PunishmentProfile& profile,
                              const ControlPath& deviation, int j, std::size_t num_paths,
                              std::uint64_t seed) {
  if (deviation.size() != lattice.depth())
    throw std::invalid_argument("deviation_gap: deviation length mismatch");
  if (profile.punisher == j)
    throw std::invalid_argument("deviation_gap: profile must belong to the non-deviating player");

  const Vec x0 = Vec::Constant(1, lattice.x0());
  constexpr std::size_t kNotPunished = static_cast<std::size_t>(-1);

  // nominal run
  std::vector<std::vector<int>> u_nom, v_nom;
  const FeedbackPolicy nominal_policy = [&candidate](std::size_t step, const Vec& x,
                                                     std::size_t) {
    return candidate.at_step(step, x[0]);
  };
  const PathBundle nominal_bundle =
      simulate_feedback(spec, lattice.grid(), x0, nominal_policy, num_paths, seed, &u_nom, &v_nom);

  // deviation run with per-path detection state (paths are independent, each
  // entry is touched only by its own path)
  std::vector<char> detected(num_paths, 0);
  DeviationResult result;
  result.detection_steps.assign(num_paths, kNotPunished);

  std::vector<std::vector<int>> u_dev, v_dev;
  const FeedbackPolicy deviation_policy = [&](std::size_t step, const Vec& x, std::size_t p) {
    const bool is_detected = detected[p] != 0;
    const int own = profile.control_at(step, x[0], is_detected);
    const int dev = deviation[step];
    // detection for later steps: compare the deviator's control with the
    // nominal one at the current cell
    const auto nominal_pair = candidate.at_step(step, x[0]);
    const int nominal_dev = j == 1 ? nominal_pair.first : nominal_pair.second;
    if (dev != nominal_dev && detected[p] == 0) {
      detected[p] = 1;
      result.detection_steps[p] = step + 1;  // punishment starts one interval later
    }
    return j == 1 ? std::make_pair(dev, own) : std::make_pair(own, dev);
  };
  const PathBundle dev_bundle = simulate_feedback(spec, lattice.grid(), x0, deviation_policy,
                                                  num_paths, seed, &u_dev, &v_dev);

  {
    const PathProblem problem = per_path_problem(spec, nominal_bundle, j, u_nom, v_nom);
    result.payoff_nominal = solve_lsmc(nominal_bundle, problem).y0;
  }
  {
    const PathProblem problem = per_path_problem(spec, dev_bundle, j, u_dev, v_dev);
    result.payoff_deviation = solve_lsmc(dev_bundle, problem).y0;
  }
  result.gap = result.payoff_deviation - result.payoff_nominal;
  return result;
}

ExistenceScanResult existence_scan(const GameSpec& spec, const LatticeModel& lattice,
                                   const std::vector<double>& ladder,
                                   std::size_t partition_stride, const StateCellPartition& cells,
                                   std::size_t num_paths, std::uint64_t seed) {
  if (ladder.size() < 2) throw std::invalid_argument("existence_scan: need at least 2 epsilons");
  const NashValueTables tables = compute_nash_values(spec, lattice);

  ExistenceScanResult result;
  result.ladder = ladder;
  for (double eps : ladder) {
    const CandidatePair cand =
        construct_candidate(spec, lattice, tables, partition_stride, cells, eps);
    if (!cand.complete)
      result.diagnostics.push_back("epsilon " + std::to_string(eps) + ": " +
                                   std::to_string(cand.failed_cells.size()) +
                                   " cells without an eps-good pair");
    const NashCertificate cert =
        verify_conditions(spec, lattice, cand, tables, eps, num_paths, seed);
    result.payoffs.push_back({cert.payoffs[0], cert.payoffs[1]});
    if (!cert.accepted)
      result.diagnostics.push_back("epsilon " + std::to_string(eps) + ": certificate rejected");
  }
  const auto& [a1, a2] = result.payoffs[result.payoffs.size() - 2];
  const auto& [b1, b2] = result.payoffs.back();
  result.final_distance = std::hypot(b1 - a1, b2 - a2);
  return result;
}

}  // namespace rsg

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rsgame/catalog.hpp"
#include "rsgame/dp.hpp"
#include "rsgame/io.hpp"
#include "rsgame/lsmc.hpp"
#include "rsgame/nash.hpp"
#include "rsgame/pde.hpp"
#include "rsgame/rbsde_tree.hpp"
#include "rsgame/semigroup.hpp"

namespace rsg::cli {
namespace {

using nlohmann::json;

const json& require(const json& config, const std::string& key) {
  if (!config.contains(key)) throw ConfigError("config: missing field '" + key + "'");
  return config.at(key);
}

double num(const json& config, const std::string& key) {
  const json& v = require(config, key);
  if (!v.is_number()) throw ConfigError("config: field '" + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& config, const std::string& key, double fallback) {
  return config.contains(key) ? num(config, key) : fallback;
}

std::size_t count_or(const json& config, const std::string& key, std::size_t fallback) {
  const double v = num_or(config, key, static_cast<double>(fallback));
  if (v < 1.0 || v != std::floor(v))
    throw ConfigError("config: field '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

GameSpec spec_from(const json& config) {
  const json& s = require(config, "spec");
  const std::string name = require(s, "name").get<std::string>();
  CatalogParams params;
  if (s.contains("params"))
    for (const auto& [key, value] : s.at("params").items()) {
      if (!value.is_number())
        throw ConfigError("config: spec parameter '" + key + "' must be a number");
      params[key] = value.get<double>();
    }
  try {
    return make_catalog_spec(name, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

TimeGrid time_from(const json& config) {
  const json& t = require(config, "time");
  return TimeGrid::uniform(num_or(t, "t0", 0.0), num(t, "T"), count_or(t, "steps", 100));
}

SpaceGrid space_from(const json& config) {
  const json& s = require(config, "space");
  SpaceGrid grid{num(s, "x_min"), num(s, "x_max"), count_or(s, "points", 101)};
  grid.validate();
  return grid;
}

LatticeModel lattice_from(const json& config, const GameSpec& spec, const TimeGrid& grid) {
  const double x0 = num_or(config, "x0", 0.0);
  const std::string kind =
      config.contains("lattice") ? require(config, "lattice").get<std::string>() : "trinomial";
  if (kind == "trinomial")
    return LatticeModel::trinomial(spec, x0, grid, LatticeModel::default_spacing(spec, grid));
  if (kind == "crr") {
    const json& p = require(config, "spec").value("params", json::object());
    return LatticeModel::binomial_crr(x0, p.value("sigma", 0.2), p.value("rate", 0.05), grid);
  }
  throw ConfigError("config: lattice must be 'trinomial' or 'crr'");
}

HamiltonianMode mode_from(const json& config) {
  const std::string mode =
      config.contains("mode") ? require(config, "mode").get<std::string>() : "minus";
  if (mode == "minus") return HamiltonianMode::Minus;
  if (mode == "plus") return HamiltonianMode::Plus;
  throw ConfigError("config: mode must be 'minus' or 'plus'");
}

int player_from(const json& config) {
  const double j = num_or(config, "player", 1.0);
  if (j != 1.0 && j != 2.0) throw ConfigError("config: player must be 1 or 2");
  return static_cast<int>(j);
}

StateCellPartition cells_from(const json& config) {
  const json& c = require(config, "cells");
  return StateCellPartition{num(c, "x_min"), num(c, "x_max"), count_or(c, "count", 5)};
}

LatticeProblem lattice_problem_from(const GameSpec& spec, int j, const TimeGrid& grid,
                                    const ControlPath& u, const ControlPath& v) {
  LatticeProblem problem;
  problem.driver = [&spec, j, grid, u, v](double t, double x, double y, double z) {
    std::size_t i = 0;
    while (i + 1 < grid.num_steps() && grid.point(i + 1) <= t + 1e-14) ++i;
    Vec xv(1), zv(1);
    xv[0] = x;
    zv[0] = z;
    return spec.cost(j)(t, xv, y, zv, spec.u_set[static_cast<std::size_t>(u[i])],
                        spec.v_set[static_cast<std::size_t>(v[i])]);
  };
  problem.terminal = [&spec, j](double x) { return spec.terminal(j)(Vec::Constant(1, x)); };
  problem.obstacle = [&spec, j](double t, double x) {
    return spec.barrier(j)(t, Vec::Constant(1, x));
  };
  return problem;
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check(RunReport& report, bool ok, const std::string& what) {
  report.lines.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
  report.passed = report.passed && ok;
}

ControlPath control_from(const json& config, const char* key, const ControlSet& set,
                         std::size_t steps) {
  std::size_t index = 0;
  if (config.contains("controls") && config.at("controls").contains(key)) {
    const double v = num(config.at("controls"), key);
    if (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(set.size()))
      throw ConfigError(std::string("config: controls.") + key + " out of range");
    index = static_cast<std::size_t>(v);
  }
  return ControlPath::constant(static_cast<int>(index), steps);
}

// --- subcommand handlers -------------------------------------------------

RunReport run_simulate(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const std::size_t paths = count_or(config, "paths", 1000);
  const std::uint64_t seed = static_cast<std::uint64_t>(num_or(config, "seed", 1.0));
  const ControlPath u = control_from(config, "u", spec.u_set, grid.num_steps());
  const ControlPath v = control_from(config, "v", spec.v_set, grid.num_steps());

  const PathBundle bundle = simulate_forward(spec, grid, Vec::Constant(1, num_or(config, "x0", 0.0)),
                                             u, v, paths, seed);
  write_bundle_csv(bundle, join(outdir, "bundle.csv"), join(outdir, "bundle.json"));
  report.manifest = {join(outdir, "bundle.csv"), join(outdir, "bundle.json")};

  const MomentReport moments = moment_report(bundle, 2);
  report.lines.push_back("paths " + std::to_string(paths) + ", steps " +
                         std::to_string(grid.num_steps()));
  report.lines.push_back("terminal mean " + fmt(moments.terminal_mean) + ", variance " +
                         fmt(moments.terminal_variance));
  report.lines.push_back("sup E|X|^2 " + fmt(moments.sup_abs_moment));
  check(report, true, "all simulated states finite");
  return report;
}

RunReport run_solve_rbsde(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const int j = player_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  const ControlPath u = control_from(config, "u", spec.u_set, grid.num_steps());
  const ControlPath v = control_from(config, "v", spec.v_set, grid.num_steps());
  const LatticeProblem problem = lattice_problem_from(spec, j, grid, u, v);

  const LatticeSolution tree = solve_tree(lattice, problem, spec, u, v);
  write_lattice_solution_csv(tree, lattice, join(outdir, "tree.csv"));
  report.manifest.push_back(join(outdir, "tree.csv"));
  report.lines.push_back("Y0 tree " + fmt(tree.y0));
  check(report, tree.skorokhod_residual <= 1e-12,
        "Skorokhod residual " + fmt(tree.skorokhod_residual) + " <= 1e-12");

  std::vector<double> ladder{10.0, 100.0, 1000.0};
  if (config.contains("penalty_ladder")) {
    ladder.clear();
    for (const auto& l : config.at("penalty_ladder")) ladder.push_back(l.get<double>());
  }
  double prev = -1e300;
  bool monotone = true;
  double last = tree.y0;
  for (double lambda : ladder) {
    const LatticeSolution pen = solve_penalized_tree(lattice, problem, spec, u, v, lambda);
    report.lines.push_back("Y0 penalized lambda=" + fmt(lambda) + " " + fmt(pen.y0));
    monotone = monotone && pen.y0 >= prev - 1e-12;
    prev = pen.y0;
    last = pen.y0;
  }
  check(report, monotone, "penalized values nondecreasing in lambda");
  report.lines.push_back("penalization gap " + fmt(std::abs(last - tree.y0)));

  const std::size_t paths = count_or(config, "paths", 4000);
  const std::uint64_t seed = static_cast<std::uint64_t>(num_or(config, "seed", 1.0));
  const PathBundle bundle = simulate_forward(spec, grid, Vec::Constant(1, lattice.x0()), u, v,
                                             paths, seed);
  const PathProblem path_problem = make_path_problem(spec, bundle, j, u, v);
  const PathSolution lsmc = solve_lsmc(bundle, path_problem);
  write_path_solution_csv(lsmc, bundle, join(outdir, "lsmc.csv"));
  report.manifest.push_back(join(outdir, "lsmc.csv"));
  report.lines.push_back("Y0 lsmc " + fmt(lsmc.y0) + " +/- " + fmt(lsmc.y0_stderr));
  check(report, std::abs(lsmc.y0 - tree.y0) <= 3.0 * lsmc.y0_stderr + 0.05,
        "LSMC within 3 SE + 0.05 of the lattice value");
  return report;
}

RunReport run_solve_pde(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid times = time_from(config);
  const SpaceGrid space = space_from(config);
  const ValueGrid w = solve_obstacle_isaacs(spec, player_from(config), mode_from(config), times,
                                            space);
  write_value_grid(w, join(outdir, "pde.csv"), join(outdir, "pde.json"));
  report.manifest = {join(outdir, "pde.csv"), join(outdir, "pde.json")};

  const double residual = residual_check(w, spec);
  report.lines.push_back("grid " + std::to_string(times.num_steps()) + " x " +
                         std::to_string(space.num_points));
  check(report, residual <= 1e-8, "scheme residual " + fmt(residual) + " <= 1e-8");
  return report;
}

RunReport run_value(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const int j = player_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  const DpValue value = compute_value_dp(spec, j, mode_from(config), lattice,
                                         config.value("maximizer_is_v", j == 2));

  const ValueGrid tab = tabulate_dp(value, space_from(config));
  write_value_grid(tab, join(outdir, "value.csv"), join(outdir, "value.json"));
  write_saddle_csv(value, join(outdir, "saddle.csv"));
  report.manifest = {join(outdir, "value.csv"), join(outdir, "value.json"),
                     join(outdir, "saddle.csv")};
  report.lines.push_back("root value " + fmt(value.root()));

  bool obstacle_ok = true;
  for (std::size_t i = 0; i < value.values.size() && obstacle_ok; ++i)
    for (std::size_t k = 0; k < value.values[i].size(); ++k) {
      const double h = spec.barrier(j)(grid.point(i), Vec::Constant(1, lattice.state(i, k)));
      if (value.values[i][k] < h - 1e-12) {
        obstacle_ok = false;
        break;
      }
    }
  check(report, obstacle_ok, "obstacle respected at every node");
  return report;
}

RunReport run_dpp_test(const json& config, const std::string& outdir) {
  RunReport report;
  (void)outdir;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const int j = player_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  const std::size_t splits = count_or(config, "splits", 5);

  double worst = 0.0;
  for (std::size_t s = 1; s <= splits; ++s) {
    const std::size_t level = std::max<std::size_t>(
        1, s * lattice.depth() / (splits + 1));
    const double residual = test_dpp(spec, j, mode_from(config), lattice, level,
                                     config.value("maximizer_is_v", j == 2));
    worst = std::max(worst, residual);
    report.lines.push_back("split at level " + std::to_string(level) + ": residual " +
                           fmt(residual));
  }
  check(report, worst <= 1e-12, "DPP split-composition residual <= 1e-12");
  return report;
}

RunReport run_isaacs_scan(const json& config, const std::string& outdir) {
  RunReport report;
  (void)outdir;
  const GameSpec spec = spec_from(config);
  const double T = num(require(config, "time"), "T");
  const IsaacsScanResult scan =
      isaacs_scan(spec, T, num_or(config, "x_radius", 2.0), count_or(config, "samples", 10000),
                  static_cast<std::uint64_t>(num_or(config, "seed", 1.0)));
  report.lines.push_back("max gap " + fmt(scan.max_gap) + ", mean gap " + fmt(scan.mean_gap));
  report.lines.push_back(scan.satisfied ? "Isaacs condition SATISFIED"
                                        : "Isaacs condition FAILS");
  check(report, scan.max_gap >= -1e-12, "minimax inequality H+ >= H- at every sample");
  return report;
}

RunReport run_nash_build(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  const NashValueTables tables = compute_nash_values(spec, lattice);
  const CandidatePair cand = construct_candidate(
      spec, lattice, tables, count_or(config, "partition_stride", 2), cells_from(config),
      num_or(config, "epsilon", 0.1), static_cast<int>(count_or(config, "chattering_depth", 1)));

  std::ofstream csv(join(outdir, "margins.csv"));
  csv << "interval,cell,margin,sequence_length\n";
  for (std::size_t i = 0; i < cand.margins.size(); ++i)
    for (std::size_t c = 0; c < cand.margins[i].size(); ++c)
      csv << i << "," << c << "," << cand.margins[i][c] << "," << cand.controls[i][c].size()
          << "\n";
  report.manifest.push_back(join(outdir, "margins.csv"));
  report.lines.push_back("values W1 " + fmt(tables.w1.root()) + ", W2 " + fmt(tables.w2.root()));
  report.lines.push_back(std::to_string(cand.failed_cells.size()) + " cells without an eps-good pair");
  check(report, cand.complete, "eps-good control pair found in every cell");
  return report;
}

RunReport run_nash_verify(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  const double epsilon = num_or(config, "epsilon", 0.1);
  const std::size_t paths = count_or(config, "paths", 2000);
  const std::uint64_t seed = static_cast<std::uint64_t>(num_or(config, "seed", 1.0));

  const NashValueTables tables = compute_nash_values(spec, lattice);
  const CandidatePair cand = construct_candidate(
      spec, lattice, tables, count_or(config, "partition_stride", 2), cells_from(config), epsilon,
      static_cast<int>(count_or(config, "chattering_depth", 1)));
  check(report, cand.complete, "candidate complete");

  const NashCertificate cert = verify_conditions(spec, lattice, cand, tables, epsilon, paths, seed);
  write_certificate_json(cert, join(outdir, "certificate.json"));
  report.manifest.push_back(join(outdir, "certificate.json"));
  report.lines.push_back("payoffs (" + fmt(cert.payoffs[0]) + ", " + fmt(cert.payoffs[1]) + ")");
  report.lines.push_back("min closeness probability " + fmt(cert.min_probability));
  check(report, cert.accepted, "closeness condition holds at every grid time");

  // deviation table: all constant controls plus random piecewise deviations
  std::ofstream csv(join(outdir, "deviations.csv"));
  csv << "player,kind,gap\n";
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ull);
  const std::size_t randoms = count_or(config, "random_deviations", 20);
  double worst_gap = -1e300;
  for (int j = 1; j <= 2; ++j) {
    const PunishmentProfile profile =
        build_punishment(cand, tables, 3 - j, num_or(config, "epsilon1", epsilon));
    const std::size_t n = j == 1 ? spec.u_set.size() : spec.v_set.size();
    std::vector<ControlPath> deviations;
    for (std::size_t c = 0; c < n; ++c)
      deviations.push_back(ControlPath::constant(static_cast<int>(c), lattice.depth()));
    for (std::size_t r = 0; r < randoms; ++r) {
      ControlPath path;
      path.indices.resize(lattice.depth());
      for (auto& idx : path.indices)
        idx = static_cast<int>(gen() % n);
      deviations.push_back(std::move(path));
    }
    for (std::size_t d = 0; d < deviations.size(); ++d) {
      const DeviationResult res =
          deviation_gap(spec, lattice, cand, profile, deviations[d], j, paths, seed + d + 1);
      csv << j << "," << (d < n ? "constant" : "random") << "," << res.gap << "\n";
      worst_gap = std::max(worst_gap, res.gap);
    }
  }
  report.manifest.push_back(join(outdir, "deviations.csv"));
  report.lines.push_back("worst deviation gap " + fmt(worst_gap));
  check(report, worst_gap <= epsilon, "no tested deviation gains more than epsilon");
  return report;
}

RunReport run_nash_scan(const json& config, const std::string& outdir) {
  RunReport report;
  const GameSpec spec = spec_from(config);
  const TimeGrid grid = time_from(config);
  const LatticeModel lattice = lattice_from(config, spec, grid);
  std::vector<double> ladder{0.2, 0.1, 0.05};
  if (config.contains("ladder")) {
    ladder.clear();
    for (const auto& l : config.at("ladder")) ladder.push_back(l.get<double>());
  }
  const ExistenceScanResult scan = existence_scan(
      spec, lattice, ladder, count_or(config, "partition_stride", 2), cells_from(config),
      count_or(config, "paths", 2000), static_cast<std::uint64_t>(num_or(config, "seed", 1.0)));

  json doc{{"ladder", scan.ladder}, {"final_distance", scan.final_distance},
           {"diagnostics", scan.diagnostics}};
  doc["payoffs"] = json::array();
  for (const auto& [e1, e2] : scan.payoffs) doc["payoffs"].push_back({e1, e2});
  std::ofstream(join(outdir, "scan.json")) << doc.dump(2) << "\n";
  report.manifest.push_back(join(outdir, "scan.json"));

  for (std::size_t i = 0; i < scan.ladder.size(); ++i)
    report.lines.push_back("eps " + fmt(scan.ladder[i]) + ": payoffs (" +
                           fmt(scan.payoffs[i].first) + ", " + fmt(scan.payoffs[i].second) + ")");
  for (const auto& d : scan.diagnostics) report.lines.push_back("diagnostic: " + d);
  check(report, scan.diagnostics.empty(), "every ladder step produced an accepted certificate");
  check(report, scan.final_distance <= num_or(config, "final_distance_tol", 0.05),
        "payoff sequence Cauchy: final distance " + fmt(scan.final_distance));
  return report;
}

RunReport run_proptest(const json& config, const std::string& outdir) {
  RunReport report;
  (void)outdir;
  const std::uint64_t seed = static_cast<std::uint64_t>(num_or(config, "seed", 1.0));
  const std::size_t trials = count_or(config, "trials", 25);

  const GameSpec spec = make_catalog_spec("constant-drift", {{"mu", 0.0}, {"s", 1.0}});
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 12);
  const LatticeModel lattice =
      LatticeModel::trinomial(spec, 0.0, grid, LatticeModel::default_spacing(spec, grid));
  const ControlPath c = ControlPath::constant(0, grid.num_steps());

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t order_violations = 0, dk_violations = 0;
  double worst_skorokhod = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const double amp = unif(gen), shift = unif(gen), level = -0.5 + unif(gen);
    LatticeProblem lo, hi;
    lo.driver = [amp](double, double x, double y, double) {
      return amp * std::sin(x) - 0.2 * y;
    };
    hi.driver = [amp, shift](double, double x, double y, double) {
      return amp * std::sin(x) - 0.2 * y + shift;
    };
    lo.obstacle = hi.obstacle = [level](double, double x) { return level - 0.1 * x * x; };
    // clamp terminals to the shared obstacle; max() preserves the ordering
    lo.terminal = [&lo](double x) { return std::max(std::cos(x), lo.obstacle(1.0, x)); };
    hi.terminal = [&hi, shift](double x) {
      return std::max(std::cos(x) + shift, hi.obstacle(1.0, x));
    };
    const LatticeSolution a = solve_tree(lattice, lo, spec, c, c);
    const LatticeSolution b = solve_tree(lattice, hi, spec, c, c);
    const OrderingReport rep = compare_solutions(a, b, true);
    order_violations += rep.y_violations;
    dk_violations += rep.dk_violations;
    worst_skorokhod = std::max({worst_skorokhod, a.skorokhod_residual, b.skorokhod_residual});
  }
  report.lines.push_back(std::to_string(trials) + " randomized ordered pairs");
  check(report, order_violations == 0, "comparison theorem: zero Y order violations");
  check(report, dk_violations == 0, "comparison theorem: zero dK order violations");
  check(report, worst_skorokhod <= 1e-12,
        "Skorokhod residual " + fmt(worst_skorokhod) + " <= 1e-12");
  return report;
}

}  // namespace

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> table = {
      {"simulate", "forward SDE paths under constant controls", run_simulate},
      {"solve-rbsde", "reflected BSDE by tree, penalization and LSMC", run_solve_rbsde},
      {"solve-pde", "obstacle Isaacs PDE by the monotone scheme", run_solve_pde},
      {"value", "game value by lattice dynamic programming", run_value},
      {"dpp-test", "dynamic programming principle split-composition check", run_dpp_test},
      {"isaacs-scan", "sup-inf vs inf-sup Hamiltonian gap scan", run_isaacs_scan},
      {"nash-build", "construct an eps-Nash candidate control pair", run_nash_build},
      {"nash-verify", "verify a candidate: certificate plus deviation table", run_nash_verify},
      {"nash-scan", "existence scan over an epsilon ladder", run_nash_scan},
      {"proptest", "randomized property suite on the solvers", run_proptest},
  };
  return table;
}

void print_catalog(std::ostream& out) {
  for (const auto& entry : catalog_list()) {
    out << entry.name << ": " << entry.description << "\n";
    for (const auto& [key, value] : entry.defaults)
      out << "    " << key << " = " << value << "\n";
  }
}

int run_with_config(const std::string& name, const nlohmann::json& config, std::ostream& out) {
  const auto& table = subcommands();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&name](const Subcommand& s) { return s.name == name; });
  if (it == table.end()) {
    out << "unknown subcommand '" << name << "'\n";
    return 2;
  }

  const std::string outdir = config.value("output_dir", std::string("out"));
  try {
    std::filesystem::create_directories(outdir);
    const auto start = std::chrono::steady_clock::now();
    RunReport report = it->handler(config, outdir);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream summary(std::filesystem::path(outdir) / "summary.txt");
    for (const auto& line : report.lines) {
      out << line << "\n";
      summary << line << "\n";
    }
    for (const auto& file : report.manifest) summary << "wrote " << file << "\n";
    summary << "wall seconds " << report.wall_seconds << "\n";
    out << (report.passed ? "OK" : "FAILED") << " (" << report.wall_seconds << " s)\n";
    return report.passed ? 0 : 1;
  } catch (const ConfigError& e) {
    out << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    out << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << name << " failed: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::string& name, const std::string& config_path, std::ostream& out) {
  std::ifstream in(config_path);
  if (!in) {
    out << "cannot open config '" << config_path << "'\n";
    return 2;
  }
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    out << "config parse error in '" << config_path << "': " << e.what() << "\n";
    return 2;
  }
  return run_with_config(name, config, out);
}

}  // namespace rsg::cli

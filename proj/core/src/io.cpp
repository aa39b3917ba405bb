#include "rsgame/io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

namespace rsg {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

nlohmann::json grid_json(const TimeGrid& grid) {
  return {{"t0", grid.t0()}, {"horizon", grid.horizon()}, {"num_steps", grid.num_steps()},
          {"mesh", grid.mesh()}};
}

}  // namespace

void write_bundle_csv(const PathBundle& bundle, const std::string& csv_path,
                      const std::string& json_header_path) {
  auto out = open_out(csv_path);
  out << "path,time_index,t";
  const auto dim = bundle.states[0].cols();
  for (Eigen::Index c = 0; c < dim; ++c) out << ",x" << c;
  out << "\n";
  for (std::size_t p = 0; p < bundle.num_paths(); ++p)
    for (std::size_t i = 0; i < bundle.grid.num_points(); ++i) {
      out << p << "," << i << "," << bundle.grid.point(i);
      for (Eigen::Index c = 0; c < dim; ++c) out << "," << bundle.states[p](static_cast<Eigen::Index>(i), c);
      out << "\n";
    }

  nlohmann::json header = {{"grid", grid_json(bundle.grid)},
                           {"seed", bundle.seed},
                           {"num_paths", bundle.num_paths()},
                           {"x0", std::vector<double>(bundle.x0.data(), bundle.x0.data() + bundle.x0.size())}};
  open_out(json_header_path) << header.dump(2) << "\n";
}

void write_lattice_solution_csv(const LatticeSolution& sol, const LatticeModel& lattice,
                                const std::string& path) {
  auto out = open_out(path);
  out << "level,node,state,y,z,dk\n";
  for (std::size_t i = 0; i < sol.y.size(); ++i)
    for (std::size_t k = 0; k < sol.y[i].size(); ++k) {
      out << i << "," << k << "," << lattice.state(i, k) << "," << sol.y[i][k] << ","
          << (i < sol.z.size() ? sol.z[i][k] : 0.0) << ","
          << (i < sol.dk.size() ? sol.dk[i][k] : 0.0) << "\n";
    }
}

void write_path_solution_csv(const PathSolution& sol, const PathBundle& bundle,
                             const std::string& path) {
  auto out = open_out(path);
  out << "path,time_index,y,z0,dk\n";
  for (std::size_t i = 0; i < sol.y.size(); ++i)
    for (std::size_t p = 0; p < sol.y[i].size(); ++p)
      out << p << "," << i << "," << sol.y[i][p] << ","
          << (i < sol.z.size() ? sol.z[i](static_cast<Eigen::Index>(p), 0) : 0.0) << ","
          << (i < sol.dk.size() ? sol.dk[i][p] : 0.0) << "\n";
  (void)bundle;
}

void write_value_grid(const ValueGrid& grid, const std::string& csv_path,
                      const std::string& json_header_path) {
  auto out = open_out(csv_path);
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    for (Eigen::Index k = 0; k < grid.values.cols(); ++k)
      out << (k ? "," : "") << grid.values(i, k);
    out << "\n";
  }
  nlohmann::json header = {
      {"times", grid_json(grid.times)},
      {"space", {{"x_min", grid.space.x_min}, {"x_max", grid.space.x_max},
                 {"num_points", grid.space.num_points}}},
      {"player", grid.player},
      {"mode", grid.mode == HamiltonianMode::Minus ? "minus" : "plus"},
      {"provenance", grid.provenance == ValueProvenance::Pde ? "pde" : "dp"}};
  open_out(json_header_path) << header.dump(2) << "\n";
}

void write_saddle_csv(const DpValue& value, const std::string& path) {
  auto out = open_out(path);
  out << "level,node,state,u_index,v_index\n";
  for (std::size_t i = 0; i < value.saddle.size(); ++i)
    for (std::size_t k = 0; k < value.saddle[i].size(); ++k)
      out << i << "," << k << "," << value.lattice->state(i, k) << ","
          << value.saddle[i][k].first << "," << value.saddle[i][k].second << "\n";
}

void write_certificate_json(const NashCertificate& cert, const std::string& path) {
  nlohmann::json doc = {{"payoffs", {cert.payoffs[0], cert.payoffs[1]}},
                        {"payoff_stderr", {cert.payoff_stderr[0], cert.payoff_stderr[1]}},
                        {"epsilon", cert.epsilon},
                        {"min_probability", cert.min_probability},
                        {"accepted", cert.accepted},
                        {"probabilities_j1", cert.probabilities[0]},
                        {"probabilities_j2", cert.probabilities[1]},
                        {"note", cert.note}};
  open_out(path) << doc.dump(2) << "\n";
}

}  // namespace rsg

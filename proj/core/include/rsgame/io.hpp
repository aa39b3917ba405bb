#pragma once

#include <string>

#include "rsgame/dp.hpp"
#include "rsgame/lsmc.hpp"
#include "rsgame/nash.hpp"
#include "rsgame/pde.hpp"
#include "rsgame/rbsde_tree.hpp"
#include "rsgame/sde.hpp"

namespace rsg {

/// Path bundle: CSV is path-major (path, time index, t, state components);
/// the JSON header records grid, x0 and seed.
void write_bundle_csv(const PathBundle& bundle, const std::string& csv_path,
                      const std::string& json_header_path);

/// Solutions: columns path/node, time index, Y, Z, K increment, obstacle.
void write_lattice_solution_csv(const LatticeSolution& sol, const LatticeModel& lattice,
                                const std::string& path);
void write_path_solution_csv(const PathSolution& sol, const PathBundle& bundle,
                             const std::string& path);

/// Value grid: CSV matrix (rows time, columns space) plus a JSON header.
void write_value_grid(const ValueGrid& grid, const std::string& csv_path,
                      const std::string& json_header_path);

/// Saddle selection record: node, time index, chosen u index, chosen v index.
void write_saddle_csv(const DpValue& value, const std::string& path);

/// Nash certificate as JSON (payoffs, epsilon, per-checkpoint probabilities).
void write_certificate_json(const NashCertificate& cert, const std::string& path);

}  // namespace rsg

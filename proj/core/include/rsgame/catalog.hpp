#pragma once

#include <map>
#include <string>
#include <vector>

#include "rsgame/game_spec.hpp"

namespace rsg {

using CatalogParams = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  std::string description;
  CatalogParams defaults;
};

/// Built-in coefficient families, each auditable against the standing
/// boundedness/Lipschitz assumptions. Unknown parameter names throw.
std::vector<CatalogEntry> catalog_list();

GameSpec make_catalog_spec(const std::string& name, const CatalogParams& params = {});

/// Effectively "no obstacle": a barrier far below any value in play.
inline constexpr double kNoObstacle = -1e6;

}  // namespace rsg

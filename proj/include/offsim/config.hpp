#pragma once

#include <optional>
#include <string>

#include "offsim/engine.hpp"

namespace offsim {

struct GeometricParams {
  int handhelds = 8;
  int aps = 2;
  double radius = 0.4;
  std::uint64_t seed = 1;
  int max_attempts = 1000;
};

/// A full experiment description: the game parameters plus where the topology
/// comes from (a file next to the config, or a geometric generator).
struct Scenario {
  GameConfig game;
  std::optional<std::string> topology_file;  // resolved against the config dir
  std::optional<GeometricParams> topology_gen;

  Topology build_topology() const;
};

Scenario load_scenario(const std::string &path);
Scenario scenario_from_json_text(const std::string &text,
                                 const std::string &base_dir = ".");

}  // namespace offsim

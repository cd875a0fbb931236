#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csa/markov.hpp"
#include "csa/opt.hpp"
#include "csa/phy.hpp"
#include "csa/sim.hpp"

namespace csa {

// Carries "<path>:<line>: message" for anything wrong with a scenario file.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fully resolved scenario file: topology and access are always present,
// the rest fall back to library defaults when their sections are absent.
// Decoding thresholds are written in dB and noise in dBm in the file; both
// are converted to linear units here at load time.
struct Scenario {
  TopologySpec topology;
  AccessConfig access;
  SimConfig sim;
  GridSpec grid;
  std::optional<double> mu_min;     // per-node secondary throughput floor
  std::optional<double> delta_max;  // average-age ceiling
  std::vector<SweepAxis> sweep_axes;  // in file order
  std::string source_path;
};

Scenario parse_scenario(const std::string& text, const std::string& path_for_errors);
Scenario load_scenario(const std::string& path);

}  // namespace csa

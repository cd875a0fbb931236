#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "csa/opt.hpp"
#include "csa/scenario.hpp"

using namespace csa;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string scenario_path(const char* name) {
  return std::string(CSA_SCENARIO_DIR) + "/" + name;
}

// captures the parse error text, empty when parsing unexpectedly succeeds
std::string parse_error(const std::string& text) {
  try {
    parse_scenario(text, "test.scenario");
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

bool mentions(const std::string& msg, const char* needle) {
  return msg.find(needle) != std::string::npos;
}

const char* kMinimal = R"(
[topology]
n_secondary = 0

[topology.primary_link]
tx_power_mw = 10.0
distance_m = 150.0

[topology.primary_channel]
sinr_threshold_db = 5.0
noise_power_dbm = -121.0

[access]
lambda = 0.2
q_pr = 0.5
q_s = 0.0
)";

const char* kOnePair = R"(
[topology]
n_secondary = 1

[topology.primary_link]
tx_power_mw = 10.0
distance_m = 150.0

[topology.secondary_link]
tx_power_mw = 0.1
distance_m = 40.0

[topology.secondary_to_primary_rx]
tx_power_mw = 0.1
distance_m = 40.0

[topology.primary_to_secondary_rx]
tx_power_mw = 10.0
distance_m = 150.0

[topology.primary_channel]
sinr_threshold_db = 5.0
noise_power_dbm = -121.0

[topology.secondary_channel]
sinr_threshold_db = 5.0
noise_power_dbm = -121.0

[access]
lambda = 0.15
q_pr = 0.9
q_s = 0.3
)";

}  // namespace

TEST_CASE("every shipped scenario file parses") {
  for (const char* name :
       {"oracle_geo_half.scenario", "oracle_unit_service.scenario",
        "oracle_n1_mixed.scenario", "oracle_n3_weak.scenario",
        "oracle_n2_lowsinr.scenario", "sweep_age_surface.scenario", "sweep_throughput_curve.scenario",
        "sweep_population_peak.scenario", "solve_age_ceiling.scenario", "solve_throughput_floor.scenario"}) {
    CHECK_NOTHROW(load_scenario(scenario_path(name)));
  }
}

TEST_CASE("shipped oracle scenarios carry the expected fields") {
  const Scenario geo = load_scenario(scenario_path("oracle_geo_half.scenario"));
  CHECK(geo.topology.n_secondary == 0);
  CHECK(geo.access.arrival_rate == 0.2);
  CHECK(geo.access.primary_access_prob == 0.5);
  CHECK(geo.sim.horizon == 10000000);
  CHECK(geo.sim.warmup == 100000);
  CHECK(geo.sim.replications == 8);
  CHECK(geo.sim.seed == 101);
  CHECK_FALSE(geo.sim.record_trace);
  CHECK_FALSE(geo.mu_min.has_value());
  CHECK_FALSE(geo.delta_max.has_value());
  CHECK(geo.sweep_axes.empty());

  // decibel fields are converted to linear units exactly once, at load
  CHECK(rel_close(geo.topology.primary_channel.sinr_threshold, 3.1622776601683795, 1e-13));
  CHECK(rel_close(geo.topology.primary_channel.noise_power_mw, 1e-50, 1e-13));

  const Scenario low = load_scenario(scenario_path("oracle_n2_lowsinr.scenario"));
  CHECK(low.topology.n_secondary == 2);
  // the secondary cross link defaults to the secondary link geometry
  CHECK(low.topology.secondary_cross.tx_power_mw == low.topology.secondary_link.tx_power_mw);
  CHECK(low.topology.secondary_cross.distance_m == low.topology.secondary_link.distance_m);
  CHECK(rel_close(low.topology.secondary_channel.sinr_threshold, 0.5011872336272722, 1e-13));
}

TEST_CASE("shipped sweep and constraint scenarios carry the expected fields") {
  const Scenario surface = load_scenario(scenario_path("sweep_age_surface.scenario"));
  REQUIRE(surface.sweep_axes.size() == 3);
  CHECK(surface.sweep_axes[0].var == SweepVar::kLambda);
  CHECK(surface.sweep_axes[0].values == std::vector<double>{0.1, 0.3, 0.5});
  CHECK(surface.sweep_axes[1].var == SweepVar::kPrimaryAccess);
  CHECK(surface.sweep_axes[1].values.size() == 51);
  CHECK(surface.sweep_axes[2].var == SweepVar::kSecondaryAccess);
  CHECK(surface.sweep_axes[2].values.size() == 51);

  const Scenario ceiling = load_scenario(scenario_path("solve_age_ceiling.scenario"));
  CHECK(ceiling.topology.n_secondary == 10);
  REQUIRE(ceiling.delta_max.has_value());
  CHECK(*ceiling.delta_max == 7.0);

  const Scenario floor = load_scenario(scenario_path("solve_throughput_floor.scenario"));
  REQUIRE(floor.mu_min.has_value());
  CHECK(*floor.mu_min == 0.1);
}

TEST_CASE("a minimal file fills every optional section with defaults") {
  const Scenario sc = parse_scenario(kMinimal, "test.scenario");
  CHECK(sc.sim.horizon == 1000000);
  CHECK(sc.sim.warmup == 10000);
  CHECK(sc.sim.replications == 4);
  CHECK(sc.sim.seed == 1);
  CHECK_FALSE(sc.sim.record_trace);
  CHECK(sc.grid.coarse_step == 0.01);
  CHECK(sc.grid.refine_factor == 10);
  CHECK(sc.grid.refine_rounds == 2);
  CHECK(sc.topology.primary_link.path_loss_exponent == 4.0);
  CHECK(sc.topology.primary_link.fading_param == 1.0);
  CHECK(sc.source_path == "test.scenario");
}

TEST_CASE("path loss exponent inherits from the topology section") {
  std::string text = kMinimal;
  text.replace(text.find("n_secondary = 0"), 15,
               "n_secondary = 0\npath_loss_exponent = 3.5");
  const Scenario sc = parse_scenario(text, "test.scenario");
  CHECK(sc.topology.primary_link.path_loss_exponent == 3.5);

  text.replace(text.find("distance_m = 150.0"), 18,
               "distance_m = 150.0\npath_loss_exponent = 2.5");
  const Scenario sc2 = parse_scenario(text, "test.scenario");
  CHECK(sc2.topology.primary_link.path_loss_exponent == 2.5);
}

TEST_CASE("range errors name the offending key") {
  std::string text = kMinimal;
  text.replace(text.find("q_pr = 0.5"), 10, "q_pr = 1.5");
  const std::string msg = parse_error(text);
  CHECK(mentions(msg, "q_pr"));
  CHECK(mentions(msg, "outside [0, 1]"));
  CHECK(mentions(msg, "test.scenario:"));
}

TEST_CASE("missing cross links point at the geometry documentation") {
  // drop the whole secondary-to-primary section
  std::string text = kOnePair;
  const auto start = text.find("[topology.secondary_to_primary_rx]");
  const auto stop = text.find("[topology.primary_to_secondary_rx]");
  std::string removed = text;
  removed.erase(start, stop - start);
  const std::string msg = parse_error(removed);
  CHECK(mentions(msg, "topology.secondary_to_primary_rx"));
  CHECK(mentions(msg, "README.md"));
  CHECK(mentions(msg, "Cross-link geometry"));

  // keep the section but drop its distance key
  std::string nodist = text;
  const auto dist = nodist.find("distance_m = 40.0", text.find("secondary_to_primary_rx"));
  nodist.erase(dist, 17);
  const std::string msg2 = parse_error(nodist);
  CHECK(mentions(msg2, "distance_m"));
  CHECK(mentions(msg2, "Cross-link geometry"));
}

TEST_CASE("typos are rejected instead of ignored") {
  std::string unknown_key = kMinimal;
  unknown_key.replace(unknown_key.find("q_s = 0.0"), 9, "q_s = 0.0\nq_x = 0.3");
  CHECK(mentions(parse_error(unknown_key), "q_x"));

  std::string unknown_section = std::string(kMinimal) + "\n[acces]\nlambda = 0.1\n";
  CHECK(mentions(parse_error(unknown_section), "acces"));

  std::string dup_key = kMinimal;
  dup_key.replace(dup_key.find("lambda = 0.2"), 12, "lambda = 0.2\nlambda = 0.3");
  CHECK(mentions(parse_error(dup_key), "duplicate"));

  std::string dup_section = std::string(kMinimal) + "\n[access]\nlambda = 0.1\n";
  CHECK(mentions(parse_error(dup_section), "appears twice"));

  CHECK(mentions(parse_error("lambda = 0.2\n"), "section"));
  CHECK(mentions(parse_error("[access\nlambda = 0.2\n"), "header"));
}

TEST_CASE("malformed values are reported with key and line") {
  std::string bad_number = kMinimal;
  bad_number.replace(bad_number.find("lambda = 0.2"), 12, "lambda = fast");
  const std::string msg = parse_error(bad_number);
  CHECK(mentions(msg, "lambda"));
  CHECK(mentions(msg, "malformed"));

  std::string bad_bool = std::string(kMinimal) + "\n[sim]\nrecord_trace = yes\n";
  CHECK(mentions(parse_error(bad_bool), "record_trace"));

  std::string bad_reps = std::string(kMinimal) + "\n[sim]\nreplications = 0\n";
  CHECK(mentions(parse_error(bad_reps), "replications"));

  std::string bad_seed = std::string(kMinimal) + "\n[sim]\nseed = -1\n";
  CHECK(mentions(parse_error(bad_seed), "seed"));

  std::string bad_floor = std::string(kMinimal) + "\n[constraints]\nmu_min = -0.1\n";
  CHECK(mentions(parse_error(bad_floor), "mu_min"));

  std::string bad_ceiling = std::string(kMinimal) + "\n[constraints]\ndelta_max = 0\n";
  CHECK(mentions(parse_error(bad_ceiling), "delta_max"));
}

TEST_CASE("sweep axes parse ranges and lists") {
  const std::string text =
      std::string(kMinimal) +
      "\n[sweep]\nlambda = 0:1:0.25\nq_s = 0.1,0.3,0.5\nn_secondary = 1:4:1\n";
  const Scenario sc = parse_scenario(text, "test.scenario");
  REQUIRE(sc.sweep_axes.size() == 3);
  CHECK(sc.sweep_axes[0].var == SweepVar::kLambda);
  REQUIRE(sc.sweep_axes[0].values.size() == 5);
  CHECK(sc.sweep_axes[0].values.front() == 0.0);
  CHECK(sc.sweep_axes[0].values.back() == 1.0);
  CHECK(sc.sweep_axes[1].values == std::vector<double>{0.1, 0.3, 0.5});
  CHECK(sc.sweep_axes[2].var == SweepVar::kSecondaryCount);
  CHECK(sc.sweep_axes[2].values == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("sweep axes reject malformed or out-of-range specifications") {
  const std::string base = kMinimal;
  CHECK(mentions(parse_error(base + "\n[sweep]\nlambda = 0:1\n"), "lambda"));
  CHECK(mentions(parse_error(base + "\n[sweep]\nlambda = 0.5,1.5\n"), "lambda"));
  CHECK(mentions(parse_error(base + "\n[sweep]\nn_secondary = 2.5\n"), "n_secondary"));
  CHECK(mentions(parse_error(base + "\n[sweep]\nmu = 0.1,0.2\n"), "mu"));
  CHECK(mentions(parse_error(base + "\n[sweep]\nlambda = 1:0:0.1\n"), "lambda"));
}

TEST_CASE("secondary sections are only required when secondaries exist") {
  CHECK_NOTHROW(parse_scenario(kMinimal, "test.scenario"));
  std::string with_n = kMinimal;
  with_n.replace(with_n.find("n_secondary = 0"), 15, "n_secondary = 1");
  CHECK(mentions(parse_error(with_n), "secondary"));
}

TEST_CASE("loading a missing file is a scenario error") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/nowhere.scenario"), ScenarioError);
}

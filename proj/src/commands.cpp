#include "csa/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

#include "csa/io.hpp"
#include "csa/rng.hpp"

namespace csa {

namespace {
using nlohmann::ordered_json;

std::string resolve_out_path(const std::string& out_path) {
  if (out_path.empty() || out_path == "-" || out_path.front() == '/') return out_path;
  const char* dir = std::getenv("CSA_OUT_DIR");
  if (!dir || !*dir) return out_path;
  std::string joined = dir;
  if (joined.back() != '/') joined += '/';
  return joined + out_path;
}

void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

int run_validate(const Scenario& sc, std::ostream& out) {
  const AnalyticReport an = analytic_report(sc.topology, sc.access);  // throws if unstable
  const ReplicationReport rr = replicate(sc.topology, sc.access, sc.sim);
  const double lambda = sc.access.arrival_rate;

  ordered_json rows = ordered_json::array();
  bool all_pass = true;
  auto add = [&](const char* metric, ordered_json analytic, ordered_json simulated,
                 double tolerance, bool pass) {
    rows.push_back({{"metric", metric},
                    {"analytic", std::move(analytic)},
                    {"simulated", std::move(simulated)},
                    {"tolerance", tolerance},
                    {"pass", pass}});
    all_pass = all_pass && pass;
  };
  auto add_three_se = [&](const char* metric, double analytic, const MetricSummary& m) {
    const double tol = 3.0 * m.std_err;
    add(metric, analytic, m.mean, tol, std::abs(analytic - m.mean) <= tol);
  };

  add_three_se("service_rate", an.mu, rr.service_rate);
  if (sc.topology.n_secondary > 0) {
    add_three_se("secondary_throughput", an.throughput.per_node, rr.secondary_throughput);
  } else {
    add("secondary_throughput", nullptr, nullptr, 0.0, true);
  }

  const double tv_tol = 0.01;
  if (lambda > 0.0) {
    const QueueStats stats = stationary_distribution(lambda, an.mu);
    const double occ_tv = total_variation(
        rr.occupancy_counts, [&](std::size_t n) { return stationary_pmf(stats, int(n)); });
    add("occupancy_tv", 0.0, occ_tv, tv_tol, occ_tv < tv_tol);
    const double st_tv = total_variation(rr.system_time_counts, [&](std::size_t t) {
      return t == 0 ? 0.0 : system_time_pmf(lambda, an.mu, long(t));
    });
    add("system_time_tv", 0.0, st_tv, tv_tol, st_tv < tv_tol);
    add_three_se("average_age", an.age.average_age, rr.age);
    const double identity_tol = 0.005 * rr.age.mean;
    add("estimator_identity", rr.age.mean, rr.reassembled.mean, identity_tol,
        std::abs(rr.age.mean - rr.reassembled.mean) <= identity_tol);
  } else {
    add("occupancy_tv", nullptr, nullptr, tv_tol, true);
    add("system_time_tv", nullptr, nullptr, tv_tol, true);
    add("average_age", nullptr, nullptr, 0.0, true);
    add("estimator_identity", nullptr, nullptr, 0.0, true);
  }

  emit(out, ordered_json{{"command", "validate"},
                         {"rng", kRngAlgorithm},
                         {"scenario", to_json(sc)},
                         {"rows", rows},
                         {"pass", all_pass}});
  return all_pass ? kExitOk : kExitError;
}
}  // namespace

int run_command(const RunOptions& options, std::ostream& fallback_out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  try {
    Scenario sc = load_scenario(options.scenario_path);
    if (options.seed) sc.sim.seed = *options.seed;
    if (options.slots) sc.sim.horizon = *options.slots;
    if (options.reps) sc.sim.replications = *options.reps;
    if (options.trace) {
      sc.sim.record_trace = true;
      sc.sim.replications = 1;
    }

    std::ofstream file;
    std::ostream* out = &fallback_out;
    const std::string resolved = resolve_out_path(options.out_path);
    if (!resolved.empty() && resolved != "-") {
      file.open(resolved, std::ios::binary);
      if (!file) {
        err << "error: cannot open output file: " << resolved << "\n";
        return kExitError;
      }
      out = &file;
    }

    const bool csv_default = options.command == "sweep" || options.trace;
    const std::string format =
        !options.format.empty() ? options.format : (csv_default ? "csv" : "json");
    if (format != "json" && format != "csv") {
      err << "error: unknown format '" << format << "'\n";
      return kExitError;
    }

    int code = kExitOk;
    if (options.command == "analytic") {
      if (format != "json") {
        err << "error: analytic output is json only\n";
        return kExitError;
      }
      const AnalyticReport report = analytic_report(sc.topology, sc.access);
      emit(*out, ordered_json{{"command", "analytic"},
                              {"scenario", to_json(sc)},
                              {"report", to_json(report)}});
    } else if (options.command == "simulate") {
      const ReplicationReport rr = replicate(sc.topology, sc.access, sc.sim);
      if (options.trace) {
        if (format != "csv") {
          err << "error: --trace output is csv only\n";
          return kExitError;
        }
        write_trace_csv(*out, sc, sc.sim.seed, rr.per_rep.at(0).per_packet);
      } else if (format != "json") {
        err << "error: simulate output is json only (use --trace for csv)\n";
        return kExitError;
      } else {
        emit(*out, ordered_json{{"command", "simulate"},
                                {"scenario", to_json(sc)},
                                {"result", to_json(rr, sc.sim)}});
      }
    } else if (options.command == "optimize-age") {
      if (format != "json") {
        err << "error: optimize-age output is json only\n";
        return kExitError;
      }
      const double mu_min = sc.mu_min.value_or(0.0);
      const Solution sol = min_age_subject_to_throughput(sc.topology, sc.access.arrival_rate,
                                                         mu_min, sc.grid);
      emit(*out, ordered_json{{"command", "optimize-age"},
                              {"scenario", to_json(sc)},
                              {"mu_min", mu_min},
                              {"solution", to_json(sol)}});
      code = sol.feasible ? kExitOk : kExitInfeasible;
    } else if (options.command == "optimize-throughput") {
      if (format != "json") {
        err << "error: optimize-throughput output is json only\n";
        return kExitError;
      }
      const double delta_max =
          sc.delta_max.value_or(std::numeric_limits<double>::infinity());
      const Solution sol = max_throughput_subject_to_age(sc.topology, sc.access.arrival_rate,
                                                         delta_max, sc.grid);
      emit(*out, ordered_json{{"command", "optimize-throughput"},
                              {"scenario", to_json(sc)},
                              {"delta_max", std::isfinite(delta_max)
                                                ? ordered_json(delta_max)
                                                : ordered_json(nullptr)},
                              {"solution", to_json(sol)}});
      code = sol.feasible ? kExitOk : kExitInfeasible;
    } else if (options.command == "sweep") {
      const auto rows =
          sweep(sc.topology, sc.access, sc.sweep_axes, sc.mu_min, sc.delta_max);
      if (format == "csv") {
        write_sweep_csv(*out, sc, rows);
      } else {
        ordered_json jrows = ordered_json::array();
        for (const auto& r : rows)
          jrows.push_back({{"lambda", r.lambda},
                           {"q_pr", r.q_pr},
                           {"q_s", r.q_s},
                           {"N", r.n_secondary},
                           {"mu", r.mu},
                           {"mu_s", std::isfinite(r.mu_s) ? ordered_json(r.mu_s)
                                                          : ordered_json(nullptr)},
                           {"mu_total", std::isfinite(r.mu_total)
                                            ? ordered_json(r.mu_total)
                                            : ordered_json(nullptr)},
                           {"delta", std::isfinite(r.delta) ? ordered_json(r.delta)
                                                            : ordered_json(nullptr)},
                           {"feasible", r.feasible},
                           {"binding", r.binding}});
        emit(*out, ordered_json{{"command", "sweep"},
                                {"scenario", to_json(sc)},
                                {"rows", jrows}});
      }
    } else if (options.command == "validate") {
      if (format != "json") {
        err << "error: validate output is json only\n";
        return kExitError;
      }
      code = run_validate(sc, *out);
    } else {
      err << "error: unknown command '" << options.command << "'\n";
      return kExitError;
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    err << options.command << ": done in " << elapsed.count() << " ms\n";
    return code;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace csa

#include "csa/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "csa/rng.hpp"

namespace csa {

namespace {
using nlohmann::ordered_json;

// nlohmann rejects non-finite values only at dump time unless mapped first
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}
}  // namespace

std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ordered_json to_json(const LinkGeometry& link) {
  return {{"tx_power_mw", num(link.tx_power_mw)},
          {"distance_m", num(link.distance_m)},
          {"path_loss_exponent", num(link.path_loss_exponent)},
          {"fading_param", num(link.fading_param)}};
}

ordered_json to_json(const ChannelParams& channel) {
  return {{"sinr_threshold", num(channel.sinr_threshold)},
          {"noise_power_mw", num(channel.noise_power_mw)}};
}

ordered_json to_json(const TopologySpec& topo) {
  ordered_json j{{"n_secondary", topo.n_secondary},
                 {"primary_link", to_json(topo.primary_link)},
                 {"primary_channel", to_json(topo.primary_channel)}};
  if (topo.n_secondary > 0) {
    j["secondary_link"] = to_json(topo.secondary_link);
    j["secondary_to_primary_rx"] = to_json(topo.secondary_to_primary_rx);
    j["primary_to_secondary_rx"] = to_json(topo.primary_to_secondary_rx);
    j["secondary_cross"] = to_json(topo.secondary_cross);
    j["secondary_channel"] = to_json(topo.secondary_channel);
  }
  return j;
}

ordered_json to_json(const AccessConfig& access) {
  return {{"lambda", num(access.arrival_rate)},
          {"q_pr", num(access.primary_access_prob)},
          {"q_s", num(access.secondary_access_prob)}};
}

ordered_json to_json(const Scenario& scenario) {
  ordered_json j{{"source", scenario.source_path},
                 {"topology", to_json(scenario.topology)},
                 {"access", to_json(scenario.access)},
                 {"sim",
                  {{"horizon", scenario.sim.horizon},
                   {"warmup", scenario.sim.warmup},
                   {"replications", scenario.sim.replications},
                   {"seed", scenario.sim.seed},
                   {"record_trace", scenario.sim.record_trace}}},
                 {"grid",
                  {{"coarse_step", num(scenario.grid.coarse_step)},
                   {"refine_factor", scenario.grid.refine_factor},
                   {"refine_rounds", scenario.grid.refine_rounds}}}};
  ordered_json constraints;
  constraints["mu_min"] = scenario.mu_min ? num(*scenario.mu_min) : ordered_json(nullptr);
  constraints["delta_max"] =
      scenario.delta_max ? num(*scenario.delta_max) : ordered_json(nullptr);
  j["constraints"] = constraints;
  ordered_json axes = ordered_json::array();
  for (const auto& axis : scenario.sweep_axes) {
    const char* name = "";
    switch (axis.var) {
      case SweepVar::kLambda: name = "lambda"; break;
      case SweepVar::kPrimaryAccess: name = "q_pr"; break;
      case SweepVar::kSecondaryAccess: name = "q_s"; break;
      case SweepVar::kSecondaryCount: name = "n_secondary"; break;
    }
    axes.push_back({{"var", name}, {"values", axis.values}});
  }
  j["sweep"] = axes;
  return j;
}

ordered_json to_json(const AnalyticReport& report) {
  return {{"mu", num(report.mu)},
          {"queue",
           {{"service_rate", num(report.queue.service_rate)},
            {"utilization_ratio", num(report.queue.utilization_ratio)},
            {"prob_empty", num(report.queue.prob_empty)},
            {"prob_one", num(report.queue.prob_one)}}},
          {"age",
           {{"average_age", num(report.age.average_age)},
            {"mean_interarrival", num(report.age.mean_interarrival)},
            {"second_moment_interarrival", num(report.age.second_moment_interarrival)},
            {"mean_service", num(report.age.mean_service)},
            {"corr_wait", num(report.age.corr_wait)},
            {"corr_system", num(report.age.corr_system)},
            {"infinite", report.age.infinite}}},
          {"throughput",
           {{"per_node", num(report.throughput.per_node)},
            {"silent_component", num(report.throughput.silent_component)},
            {"active_component", num(report.throughput.active_component)},
            {"aggregate", num(report.throughput.aggregate)}}}};
}

ordered_json to_json(const Solution& solution) {
  return {{"q_pr_opt", num(solution.q_pr_opt)},
          {"q_s_opt", num(solution.q_s_opt)},
          {"objective", num(solution.objective)},
          {"feasible", solution.feasible},
          {"binding_constraints", solution.binding_constraints}};
}

ordered_json to_json(const MetricSummary& summary) {
  return {{"replications", summary.replications},
          {"mean", num(summary.mean)},
          {"std_dev", num(summary.std_dev)},
          {"std_err", num(summary.std_err)}};
}

ordered_json to_json(const SimReport& report, bool include_packets) {
  ordered_json j{{"measured_slots", report.measured_slots},
                 {"empirical_age", num(report.empirical_age)},
                 {"reassembled_age", num(report.reassembled_age)},
                 {"empirical_arrival_rate", num(report.empirical_arrival_rate)},
                 {"empirical_service_rate", num(report.empirical_service_rate)},
                 {"empirical_secondary_throughput", num(report.empirical_secondary_throughput)},
                 {"arrivals", report.arrivals},
                 {"deliveries", report.deliveries},
                 {"secondary_deliveries", report.secondary_deliveries},
                 {"busy_slots", report.busy_slots},
                 {"initial_queue", report.initial_queue},
                 {"final_queue", report.final_queue},
                 {"packet_count", report.packet_count},
                 {"sum_y", num(report.sum_y)},
                 {"sum_y2", num(report.sum_y2)},
                 {"sum_yt", num(report.sum_yt)},
                 {"sum_wy", num(report.sum_wy)},
                 {"no_updates", report.no_updates}};
  if (include_packets) {
    ordered_json packets = ordered_json::array();
    for (const auto& p : report.per_packet)
      packets.push_back({{"gen_slot", p.gen_slot},
                         {"delivered_slot", p.delivered_slot},
                         {"interarrival", p.interarrival},
                         {"wait", p.wait},
                         {"system_time", p.system_time}});
    j["per_packet"] = packets;
  }
  return j;
}

ordered_json to_json(const ReplicationReport& report, const SimConfig& config) {
  ordered_json reps = ordered_json::array();
  for (std::size_t r = 0; r < report.per_rep.size(); ++r) {
    ordered_json one = to_json(report.per_rep[r], false);
    ordered_json with_seed{{"seed", config.seed + r}};
    with_seed.update(one);
    reps.push_back(with_seed);
  }
  return {{"rng", kRngAlgorithm},
          {"metrics",
           {{"age", to_json(report.age)},
            {"reassembled_age", to_json(report.reassembled)},
            {"arrival_rate", to_json(report.arrival_rate)},
            {"service_rate", to_json(report.service_rate)},
            {"secondary_throughput", to_json(report.secondary_throughput)}}},
          {"occupancy_counts", report.occupancy_counts},
          {"system_time_counts", report.system_time_counts},
          {"replications", reps}};
}

void write_sweep_csv(std::ostream& out, const Scenario& scenario,
                     std::span<const SweepRow> rows) {
  out << "# csa sweep\n";
  out << "# rows: " << rows.size() << "\n";
  out << "# scenario: " << to_json(scenario).dump() << "\n";
  out << "lambda,q_pr,q_s,N,mu,mu_s,mu_total,delta,feasible,binding\n";
  for (const auto& r : rows) {
    out << format_sig(r.lambda) << ',' << format_sig(r.q_pr) << ',' << format_sig(r.q_s)
        << ',' << r.n_secondary << ',' << format_sig(r.mu) << ',' << format_sig(r.mu_s)
        << ',' << format_sig(r.mu_total) << ',' << format_sig(r.delta) << ','
        << (r.feasible ? 1 : 0) << ',' << r.binding << '\n';
  }
}

void write_trace_csv(std::ostream& out, const Scenario& scenario, std::uint64_t seed,
                     std::span<const PacketRecord> records) {
  out << "# csa trace\n";
  out << "# rng: " << kRngAlgorithm << "\n";
  out << "# seed: " << seed << "\n";
  out << "# scenario: " << to_json(scenario).dump() << "\n";
  out << "slot_generated,slot_delivered,Y,W,T\n";
  for (const auto& p : records)
    out << p.gen_slot << ',' << p.delivered_slot << ',' << p.interarrival << ',' << p.wait
        << ',' << p.system_time << '\n';
}

double total_variation(std::span<const std::uint64_t> counts,
                       const std::function<double(std::size_t)>& pmf) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("empty histogram");
  double sum_abs = 0.0;
  double covered = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = pmf(i);
    covered += p;
    sum_abs += std::abs(double(counts[i]) / double(total) - p);
  }
  return 0.5 * (sum_abs + std::max(0.0, 1.0 - covered));
}

}  // namespace csa

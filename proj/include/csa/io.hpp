#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "csa/markov.hpp"
#include "csa/opt.hpp"
#include "csa/scenario.hpp"
#include "csa/sim.hpp"

namespace csa {

// Fixed-notation formatter used for every CSV number: 12 significant digits.
std::string format_sig(double v);

// JSON encodings. All of them keep insertion order so output is stable
// byte-for-byte across runs; non-finite numbers serialize as null.
nlohmann::ordered_json to_json(const LinkGeometry& link);
nlohmann::ordered_json to_json(const ChannelParams& channel);
nlohmann::ordered_json to_json(const TopologySpec& topo);
nlohmann::ordered_json to_json(const AccessConfig& access);
nlohmann::ordered_json to_json(const Scenario& scenario);
nlohmann::ordered_json to_json(const AnalyticReport& report);
nlohmann::ordered_json to_json(const Solution& solution);
nlohmann::ordered_json to_json(const MetricSummary& summary);
nlohmann::ordered_json to_json(const SimReport& report, bool include_packets);
nlohmann::ordered_json to_json(const ReplicationReport& report, const SimConfig& config);

void write_sweep_csv(std::ostream& out, const Scenario& scenario,
                     std::span<const SweepRow> rows);
void write_trace_csv(std::ostream& out, const Scenario& scenario, std::uint64_t seed,
                     std::span<const PacketRecord> records);

// Total variation distance between a raw count histogram and a pmf over
// 0,1,2,...; mass the pmf places beyond the observed range counts fully.
double total_variation(std::span<const std::uint64_t> counts,
                       const std::function<double(std::size_t)>& pmf);

}  // namespace csa

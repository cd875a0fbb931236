#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csa/markov.hpp"
#include "csa/phy.hpp"

namespace csa {

// Slot-level event simulator for the shared-access network. Each slot draws
// the arrival, the access decisions, and one fading variate per active
// transmitter-receiver pair, then applies the SINR threshold test directly,
// so success statistics are produced without consulting the closed forms.
//
// Timing convention, fixed so the estimators agree with the analytic model:
//  - arrivals happen at the slot start and may be served in the same slot
//  - occupancy is sampled just after the arrival point
//  - a packet delivered in slot t first benefits the destination in slot
//    t+1, so the age sampled for slot t is the start-of-slot age plus one
//  - the start-of-slot age resets to the delivered packet's system time
//
// Draw order inside a slot (pinned for reproducibility): arrival, primary
// access (only when the queue is nonempty), secondary access for nodes
// 0..N-1, then fading variates in receiver order (primary receiver first,
// signal before interferers, interferers by node index).

struct SimConfig {
  std::uint64_t horizon = 1'000'000;  // measured slots
  std::uint64_t warmup = 10'000;      // discarded slots before measurement
  int replications = 4;
  std::uint64_t seed = 1;
  bool record_trace = false;  // keep per-packet records for delivered packets
};

void validate(const SimConfig& config);

// One delivered packet. Slots are absolute indices from the start of the
// run. interarrival is measured to the previously generated packet and is
// zero for the first packet of the run, which has no predecessor.
struct PacketRecord {
  std::uint64_t gen_slot = 0;
  std::uint64_t delivered_slot = 0;
  std::uint64_t interarrival = 0;
  std::uint64_t wait = 0;
  std::uint64_t system_time = 0;
};

struct SimReport {
  std::uint64_t measured_slots = 0;

  // age of the freshest delivered update, averaged over measured slots
  std::uint64_t age_sum = 0;
  double empirical_age = 0.0;

  // the same quantity reassembled from per-packet (Y, T) statistics
  double reassembled_age = 0.0;

  double empirical_arrival_rate = 0.0;        // arrivals per measured slot
  double empirical_service_rate = 0.0;        // deliveries per busy slot
  double empirical_secondary_throughput = 0.0;  // per node per slot

  std::uint64_t arrivals = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t secondary_deliveries = 0;
  std::uint64_t busy_slots = 0;  // slots with a nonempty post-arrival queue
  std::uint64_t initial_queue = 0;
  std::uint64_t final_queue = 0;

  // raw counts: occupancy_counts[n] is the number of measured slots with a
  // post-arrival queue of size n; system_time_counts[t] counts delivered
  // packets with system time t (index 0 is unused)
  std::vector<std::uint64_t> occupancy_counts;
  std::vector<std::uint64_t> system_time_counts;

  // streaming sums over delivered packets with a known predecessor
  std::uint64_t packet_count = 0;
  double sum_y = 0.0;
  double sum_y2 = 0.0;
  double sum_yt = 0.0;
  double sum_wy = 0.0;

  bool no_updates = false;  // no delivery happened inside the window
  std::vector<PacketRecord> per_packet;  // filled when record_trace is set
};

SimReport simulate(const TopologySpec& topo, const AccessConfig& access,
                   const SimConfig& config);

// Assembles the age estimate from packet statistics: the average area under
// the age staircase per slot, lambda_hat * (E[YT] + E[Y^2]/2 + E[Y]/2).
double reassembled_age_value(std::uint64_t packet_count, double sum_y, double sum_y2,
                             double sum_yt, double delivery_rate);

// Plain average of an instantaneous age trace, one sample per slot.
struct AgeTraceSummary {
  std::uint64_t slot_count = 0;
  double age_sum = 0.0;
  double mean = 0.0;
};

AgeTraceSummary empirical_average_age(std::span<const double> age_samples);

struct MetricSummary {
  int replications = 0;
  double mean = 0.0;
  double std_dev = 0.0;   // across replications
  double std_err = 0.0;   // std_dev / sqrt(replications)
};

MetricSummary summarize(std::span<const double> values);

struct ReplicationReport {
  std::vector<SimReport> per_rep;  // replication r uses seed config.seed + r
  MetricSummary age;
  MetricSummary reassembled;
  MetricSummary arrival_rate;
  MetricSummary service_rate;
  MetricSummary secondary_throughput;
  std::vector<std::uint64_t> occupancy_counts;    // pooled over replications
  std::vector<std::uint64_t> system_time_counts;  // pooled over replications
};

ReplicationReport replicate(const TopologySpec& topo, const AccessConfig& access,
                            const SimConfig& config);

}  // namespace csa

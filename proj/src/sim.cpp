#include "csa/sim.hpp"

#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <stdexcept>

#include "csa/rng.hpp"

namespace csa {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void bump(std::vector<std::uint64_t>& counts, std::size_t index) {
  if (counts.size() <= index) counts.resize(index + 1, 0);
  ++counts[index];
}
}  // namespace

void validate(const SimConfig& config) {
  if (config.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
}

SimReport simulate(const TopologySpec& topo, const AccessConfig& access,
                   const SimConfig& config) {
  validate(topo);
  validate(access);
  validate(config);

  const int n = topo.n_secondary;
  const double lambda = access.arrival_rate;
  const double q_pr = access.primary_access_prob;
  const double q_s = access.secondary_access_prob;

  // mean received powers, fading applied per draw
  const double sig_p = topo.primary_link.fading_param * received_power_factor(topo.primary_link);
  const double cross_sp = n > 0 ? topo.secondary_to_primary_rx.fading_param *
                                      received_power_factor(topo.secondary_to_primary_rx)
                                : 0.0;
  const double sig_s = n > 0 ? topo.secondary_link.fading_param *
                                   received_power_factor(topo.secondary_link)
                             : 0.0;
  const double cross_ss = n > 0 ? topo.secondary_cross.fading_param *
                                      received_power_factor(topo.secondary_cross)
                                : 0.0;
  const double cross_ps = n > 0 ? topo.primary_to_secondary_rx.fading_param *
                                      received_power_factor(topo.primary_to_secondary_rx)
                                : 0.0;
  const ChannelParams& ch_p = topo.primary_channel;
  const ChannelParams& ch_s = topo.secondary_channel;

  Rng rng(config.seed);
  SimReport rep;
  rep.measured_slots = config.horizon;

  std::deque<std::uint64_t> queue;  // generation slots, FCFS
  std::vector<char> sec_tx(n, 0);
  std::uint64_t age = 1;  // start-of-slot age of the freshest delivered update
  bool have_prev_packet = false;
  std::uint64_t prev_gen = 0;       // generation slot of the last delivered packet
  std::uint64_t prev_delivery = 0;  // its delivery slot
  const std::uint64_t total = config.warmup + config.horizon;

  for (std::uint64_t t = 0; t < total; ++t) {
    const bool measured = t >= config.warmup;
    if (measured && t == config.warmup) rep.initial_queue = queue.size();

    if (lambda > 0.0 && rng.bernoulli(lambda)) {
      queue.push_back(t);
      if (measured) ++rep.arrivals;
    }
    if (measured) bump(rep.occupancy_counts, queue.size());

    const bool busy = !queue.empty();
    if (measured && busy) ++rep.busy_slots;
    const bool primary_tx = busy && rng.bernoulli(q_pr);
    int active = 0;
    for (int i = 0; i < n; ++i) {
      sec_tx[i] = rng.bernoulli(q_s) ? 1 : 0;
      active += sec_tx[i];
    }

    bool primary_ok = false;
    if (primary_tx) {
      const double signal = sig_p * rng.exp_unit();
      double interference = 0.0;
      for (int i = 0; i < n; ++i)
        if (sec_tx[i]) interference += cross_sp * rng.exp_unit();
      primary_ok = signal >= ch_p.sinr_threshold * (ch_p.noise_power_mw + interference);
    }
    if (active > 0) {
      for (int i = 0; i < n; ++i) {
        if (!sec_tx[i]) continue;
        const double signal = sig_s * rng.exp_unit();
        double interference = 0.0;
        for (int j = 0; j < n; ++j)
          if (j != i && sec_tx[j]) interference += cross_ss * rng.exp_unit();
        if (primary_tx) interference += cross_ps * rng.exp_unit();
        if (signal >= ch_s.sinr_threshold * (ch_s.noise_power_mw + interference) && measured)
          ++rep.secondary_deliveries;
      }
    }

    if (measured) rep.age_sum += age + 1;

    if (primary_ok) {
      const std::uint64_t gen = queue.front();
      queue.pop_front();
      const std::uint64_t system_time = t - gen + 1;
      const std::uint64_t wait =
          have_prev_packet && prev_delivery + 1 > gen ? prev_delivery + 1 - gen : 0;
      if (measured) {
        ++rep.deliveries;
        bump(rep.system_time_counts, system_time);
        if (have_prev_packet) {
          const double y = double(gen - prev_gen);
          ++rep.packet_count;
          rep.sum_y += y;
          rep.sum_y2 += y * y;
          rep.sum_yt += y * double(system_time);
          rep.sum_wy += double(wait) * y;
        }
        if (config.record_trace)
          rep.per_packet.push_back({gen, t, have_prev_packet ? gen - prev_gen : 0, wait,
                                    system_time});
      }
      age = system_time;
      have_prev_packet = true;
      prev_gen = gen;
      prev_delivery = t;
    } else {
      ++age;
    }
  }

  rep.final_queue = queue.size();
  rep.empirical_age = double(rep.age_sum) / double(rep.measured_slots);
  rep.empirical_arrival_rate = double(rep.arrivals) / double(rep.measured_slots);
  rep.empirical_service_rate =
      rep.busy_slots > 0 ? double(rep.deliveries) / double(rep.busy_slots) : kNaN;
  rep.empirical_secondary_throughput =
      n > 0 ? double(rep.secondary_deliveries) / (double(n) * double(rep.measured_slots))
            : 0.0;
  rep.no_updates = rep.deliveries == 0;
  rep.reassembled_age =
      reassembled_age_value(rep.packet_count, rep.sum_y, rep.sum_y2, rep.sum_yt,
                            double(rep.deliveries) / double(rep.measured_slots));
  return rep;
}

double reassembled_age_value(std::uint64_t packet_count, double sum_y, double sum_y2,
                             double sum_yt, double delivery_rate) {
  if (packet_count == 0) return kNaN;
  const double inv = 1.0 / double(packet_count);
  return delivery_rate * (sum_yt * inv + 0.5 * sum_y2 * inv + 0.5 * sum_y * inv);
}

AgeTraceSummary empirical_average_age(std::span<const double> age_samples) {
  if (age_samples.empty()) throw std::invalid_argument("age trace is empty");
  AgeTraceSummary out;
  out.slot_count = age_samples.size();
  for (double a : age_samples) out.age_sum += a;
  out.mean = out.age_sum / double(out.slot_count);
  return out;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary out;
  out.replications = int(values.size());
  // the spread of fewer than two values is unknowable, not zero
  out.std_dev = kNaN;
  out.std_err = kNaN;
  if (values.empty()) {
    out.mean = kNaN;
    return out;
  }
  for (double v : values) out.mean += v;
  out.mean /= double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_dev = std::sqrt(ss / double(values.size() - 1));
    out.std_err = out.std_dev / std::sqrt(double(values.size()));
  }
  return out;
}

ReplicationReport replicate(const TopologySpec& topo, const AccessConfig& access,
                            const SimConfig& config) {
  validate(config);
  ReplicationReport out;
  std::vector<std::future<SimReport>> jobs;
  jobs.reserve(config.replications);
  for (int r = 0; r < config.replications; ++r) {
    SimConfig rep_config = config;
    rep_config.seed = config.seed + std::uint64_t(r);
    jobs.push_back(std::async(std::launch::async, [topo, access, rep_config] {
      return simulate(topo, access, rep_config);
    }));
  }
  for (auto& job : jobs) out.per_rep.push_back(job.get());

  auto collect = [&](auto member) {
    std::vector<double> vals;
    vals.reserve(out.per_rep.size());
    for (const auto& rep : out.per_rep) vals.push_back(rep.*member);
    return summarize(vals);
  };
  out.age = collect(&SimReport::empirical_age);
  out.reassembled = collect(&SimReport::reassembled_age);
  out.arrival_rate = collect(&SimReport::empirical_arrival_rate);
  out.service_rate = collect(&SimReport::empirical_service_rate);
  out.secondary_throughput = collect(&SimReport::empirical_secondary_throughput);
  for (const auto& rep : out.per_rep) {
    if (out.occupancy_counts.size() < rep.occupancy_counts.size())
      out.occupancy_counts.resize(rep.occupancy_counts.size(), 0);
    for (std::size_t i = 0; i < rep.occupancy_counts.size(); ++i)
      out.occupancy_counts[i] += rep.occupancy_counts[i];
    if (out.system_time_counts.size() < rep.system_time_counts.size())
      out.system_time_counts.resize(rep.system_time_counts.size(), 0);
    for (std::size_t i = 0; i < rep.system_time_counts.size(); ++i)
      out.system_time_counts[i] += rep.system_time_counts[i];
  }
  return out;
}

}  // namespace csa

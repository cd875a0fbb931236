#pragma once

#include <stdexcept>
#include <vector>

#include "csa/phy.hpp"

namespace csa {

// Thrown when a queue-level quantity is requested outside the stable region.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AccessConfig {
  double arrival_rate = 0.0;           // lambda, packets per slot
  double primary_access_prob = 0.0;    // q_pr
  double secondary_access_prob = 0.0;  // q_s
};

void validate(const AccessConfig& access);

struct QueueStats {
  double service_rate = 0.0;       // mu
  double utilization_ratio = 0.0;  // rho
  double prob_empty = 0.0;         // pi_0, sampled just after the arrival epoch
  double prob_one = 0.0;           // pi_1
};

struct AgeResult {
  double average_age = 0.0;
  double mean_interarrival = 0.0;           // E[Y]
  double second_moment_interarrival = 0.0;  // E[Y^2]
  double mean_service = 0.0;                // E[S]
  double corr_wait = 0.0;                   // E[W Y]
  double corr_system = 0.0;                 // E[Y T]
  bool infinite = false;                    // arrival_rate == 0, no updates ever
};

struct ThroughputReport {
  double per_node = 0.0;           // mu_s, packets per slot per secondary
  double silent_component = 0.0;   // mu_{s,0}: tagged node's rate with primary silent
  double active_component = 0.0;   // mu_{s,1}: tagged node's rate with primary active
  double aggregate = 0.0;          // n_secondary * mu_s
};

struct OptimalRate {
  double lambda_star = 0.0;
  bool at_boundary = false;  // age is monotone over (0, mu); clamped to mu
};

bool is_stable(double lambda, double mu);

// sum_{k=0..n} C(n,k) p^k (1-p)^(n-k) f[k]; f has n+1 entries.
double binomial_mix(int n, double p, std::span<const double> f);

double primary_service_rate(const TopologySpec& topo, const AccessConfig& access);
QueueStats stationary_distribution(double lambda, double mu);
double stationary_pmf(const QueueStats& stats, int n);
double system_time_pmf(double lambda, double mu, long t);
double corr_wait_interarrival(double lambda, double mu);
AgeResult average_aoi(double lambda, double mu);
double average_age_value(double lambda, double mu);  // closed form only, for hot loops
ThroughputReport secondary_throughput(const TopologySpec& topo, const AccessConfig& access);
OptimalRate optimal_arrival_rate(double mu);

// Caches the per-k success probabilities of a topology so grid sweeps can
// evaluate access configurations in O(n) without re-deriving link physics.
class AnalyticModel {
 public:
  explicit AnalyticModel(const TopologySpec& topo);

  const TopologySpec& topology() const { return topo_; }
  double service_rate(double q_pr, double q_s) const;
  ThroughputReport throughput(const AccessConfig& access) const;  // needs stability

 private:
  TopologySpec topo_;
  std::vector<double> p_primary_;     // index k = interferer count, 0..n
  std::vector<double> p_sec_silent_;  // index k-1, k = transmitters, 1..n
  std::vector<double> p_sec_active_;
};

// Composite closed-form report used by the CLI.
struct AnalyticReport {
  double mu = 0.0;
  QueueStats queue;
  AgeResult age;
  ThroughputReport throughput;
};

// Throws StabilityError when lambda >= mu. lambda == 0 is reported with an
// infinite-age AgeResult and a degenerate always-empty queue, not an error.
AnalyticReport analytic_report(const TopologySpec& topo, const AccessConfig& access);

}  // namespace csa

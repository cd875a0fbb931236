#include "csa/markov.hpp"

#include <cmath>
#include <limits>

namespace csa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rate(double v, const char* name) {
  if (!(v >= 0.0) || !(v <= 1.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}
}  // namespace

void validate(const AccessConfig& access) {
  require_rate(access.arrival_rate, "arrival_rate");
  require_rate(access.primary_access_prob, "primary_access_prob");
  require_rate(access.secondary_access_prob, "secondary_access_prob");
}

bool is_stable(double lambda, double mu) {
  require_rate(lambda, "lambda");
  require_rate(mu, "mu");
  return lambda < mu;
}

double binomial_mix(int n, double p, std::span<const double> f) {
  if (n < 0 || f.size() != static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("binomial_mix: f must have n+1 entries");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("binomial_mix: p must lie in [0, 1]");
  if (n == 0 || p == 0.0) return f[0];
  if (p == 1.0) return f[n];
  double weight = std::pow(1.0 - p, n);
  if (weight > 0.0) {
    // running-product recurrence over the binomial pmf
    double acc = weight * f[0];
    for (int k = 0; k < n; ++k) {
      weight *= p * double(n - k) / ((1.0 - p) * double(k + 1));
      acc += weight * f[k + 1];
    }
    return acc;
  }
  // (1-p)^n underflowed; rebuild each weight in log space instead
  double acc = 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    const double lw = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      k * lp + (n - k) * lq;
    acc += std::exp(lw) * f[k];
  }
  return acc;
}

AnalyticModel::AnalyticModel(const TopologySpec& topo) : topo_(topo) {
  validate(topo_);
  const int n = topo_.n_secondary;
  p_primary_.resize(n + 1);
  for (int k = 0; k <= n; ++k) p_primary_[k] = success_prob_primary_given_k(topo_, k);
  p_sec_silent_.resize(n);
  p_sec_active_.resize(n);
  for (int k = 1; k <= n; ++k) {
    p_sec_silent_[k - 1] = success_prob_secondary_given_k(topo_, k, false);
    p_sec_active_[k - 1] = success_prob_secondary_given_k(topo_, k, true);
  }
}

double AnalyticModel::service_rate(double q_pr, double q_s) const {
  require_rate(q_pr, "primary_access_prob");
  require_rate(q_s, "secondary_access_prob");
  return q_pr * binomial_mix(topo_.n_secondary, q_s, p_primary_);
}

ThroughputReport AnalyticModel::throughput(const AccessConfig& access) const {
  validate(access);
  const int n = topo_.n_secondary;
  if (n == 0) return {};
  const double lambda = access.arrival_rate;
  const double q_pr = access.primary_access_prob;
  const double q_s = access.secondary_access_prob;
  const double mu = service_rate(q_pr, q_s);
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");

  // tagged secondary transmits (the q_s factor) while k of the other n-1 do
  ThroughputReport rep;
  rep.silent_component = q_s * binomial_mix(n - 1, q_s, p_sec_silent_);
  rep.active_component = q_s * binomial_mix(n - 1, q_s, p_sec_active_);
  const double prob_empty = 1.0 - lambda / mu;
  const double prob_busy = lambda / mu;
  rep.per_node = rep.silent_component * prob_empty +
                 (1.0 - q_pr) * rep.silent_component * prob_busy +
                 q_pr * rep.active_component * prob_busy;
  rep.aggregate = double(n) * rep.per_node;
  return rep;
}

double primary_service_rate(const TopologySpec& topo, const AccessConfig& access) {
  validate(access);
  return AnalyticModel(topo).service_rate(access.primary_access_prob,
                                          access.secondary_access_prob);
}

QueueStats stationary_distribution(double lambda, double mu) {
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");
  if (lambda == 0.0) throw StabilityError("zero arrival rate: stationary occupancy undefined");
  QueueStats stats;
  stats.service_rate = mu;
  stats.utilization_ratio = lambda * (1.0 - mu) / (mu * (1.0 - lambda));
  stats.prob_one = lambda * (1.0 - stats.utilization_ratio) / mu;
  stats.prob_empty = mu * (1.0 - lambda) / lambda * stats.prob_one;
  return stats;
}

double stationary_pmf(const QueueStats& stats, int n) {
  if (n < 0) throw std::invalid_argument("occupancy must be >= 0");
  if (n == 0) return stats.prob_empty;
  return stats.prob_one * std::pow(stats.utilization_ratio, n - 1.0);
}

double system_time_pmf(double lambda, double mu, long t) {
  if (t < 1) throw std::invalid_argument("system time takes integer values >= 1");
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");
  const double rho = lambda * (1.0 - mu) / (mu * (1.0 - lambda));
  const double rate = mu * (1.0 - rho);  // geometric parameter
  return rate * std::pow(1.0 - rate, t - 1.0);
}

double corr_wait_interarrival(double lambda, double mu) {
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");
  if (lambda == 0.0) return 0.0;  // a lone packet never waits
  return lambda * (1.0 - mu) / ((mu - lambda) * mu * mu);
}

double average_age_value(double lambda, double mu) {
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");
  if (lambda == 0.0) return kInf;
  return 1.0 / lambda + (1.0 - lambda) / (mu - lambda) - lambda / (mu * mu) + lambda / mu;
}

AgeResult average_aoi(double lambda, double mu) {
  if (!is_stable(lambda, mu)) throw StabilityError("unstable: lambda >= mu");
  AgeResult res;
  res.mean_service = 1.0 / mu;
  if (lambda == 0.0) {
    res.average_age = kInf;
    res.mean_interarrival = kInf;
    res.second_moment_interarrival = kInf;
    res.corr_wait = 0.0;
    res.corr_system = kInf;
    res.infinite = true;
    return res;
  }
  res.mean_interarrival = 1.0 / lambda;
  res.second_moment_interarrival = (2.0 - lambda) / (lambda * lambda);
  res.corr_wait = corr_wait_interarrival(lambda, mu);
  res.corr_system = res.corr_wait + res.mean_interarrival * res.mean_service;
  res.average_age = average_age_value(lambda, mu);
  return res;
}

ThroughputReport secondary_throughput(const TopologySpec& topo, const AccessConfig& access) {
  return AnalyticModel(topo).throughput(access);
}

OptimalRate optimal_arrival_rate(double mu) {
  if (!(mu > 0.0) || !(mu <= 1.0) || !std::isfinite(mu))
    throw std::invalid_argument("service rate must lie in (0, 1]");
  // d(age)/d(lambda); strictly increasing in lambda, so bisection is exact
  auto slope = [mu](double l) {
    return -1.0 / (l * l) + (1.0 - mu) / ((mu - l) * (mu - l)) + (mu - 1.0) / (mu * mu);
  };
  double hi = mu * (1.0 - 1e-12);
  if (!(slope(hi) > 0.0)) return {mu, true};  // age decreases all the way to the boundary
  double lo = mu * 1e-12;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

AnalyticReport analytic_report(const TopologySpec& topo, const AccessConfig& access) {
  validate(access);
  AnalyticModel model(topo);
  AnalyticReport rep;
  rep.mu = model.service_rate(access.primary_access_prob, access.secondary_access_prob);
  if (!is_stable(access.arrival_rate, rep.mu)) throw StabilityError("unstable: lambda >= mu");
  rep.age = average_aoi(access.arrival_rate, rep.mu);
  if (access.arrival_rate == 0.0) {
    rep.queue = {rep.mu, 0.0, 1.0, 0.0};  // queue is always empty
  } else {
    rep.queue = stationary_distribution(access.arrival_rate, rep.mu);
  }
  rep.throughput = topo.n_secondary > 0 ? model.throughput(access) : ThroughputReport{};
  return rep;
}

}  // namespace csa

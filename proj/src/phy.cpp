#include "csa/phy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csa {

void validate(const LinkGeometry& link, const char* name) {
  auto fail = [&](const char* what) {
    throw std::invalid_argument(std::string(name) + ": " + what);
  };
  if (!(link.tx_power_mw > 0.0) || !std::isfinite(link.tx_power_mw)) fail("tx_power_mw must be finite and > 0");
  if (!(link.distance_m > 0.0) || !std::isfinite(link.distance_m)) fail("distance_m must be finite and > 0");
  if (!(link.path_loss_exponent >= 2.0) || !std::isfinite(link.path_loss_exponent)) fail("path_loss_exponent must be >= 2");
  if (!(link.fading_param > 0.0) || !std::isfinite(link.fading_param)) fail("fading_param must be finite and > 0");
}

void validate(const ChannelParams& channel, const char* name) {
  auto fail = [&](const char* what) {
    throw std::invalid_argument(std::string(name) + ": " + what);
  };
  if (!(channel.sinr_threshold > 0.0) || !std::isfinite(channel.sinr_threshold)) fail("sinr_threshold must be finite and > 0");
  if (!(channel.noise_power_mw >= 0.0) || !std::isfinite(channel.noise_power_mw)) fail("noise_power_mw must be finite and >= 0");
}

void validate(const TopologySpec& topo) {
  if (topo.n_secondary < 0) throw std::invalid_argument("n_secondary must be >= 0");
  if (topo.n_secondary > 10000) throw std::invalid_argument("n_secondary exceeds supported cap of 10000");
  validate(topo.primary_link, "primary_link");
  validate(topo.primary_channel, "primary_channel");
  if (topo.n_secondary > 0) {
    validate(topo.secondary_link, "secondary_link");
    validate(topo.secondary_to_primary_rx, "secondary_to_primary_rx");
    validate(topo.primary_to_secondary_rx, "primary_to_secondary_rx");
    validate(topo.secondary_cross, "secondary_cross");
    validate(topo.secondary_channel, "secondary_channel");
  }
}

double db_to_linear(double value_db) {
  if (!std::isfinite(value_db)) throw std::invalid_argument("dB value must be finite");
  return std::pow(10.0, value_db / 10.0);
}

double received_power_factor(const LinkGeometry& link) {
  return link.tx_power_mw * std::pow(link.distance_m, -link.path_loss_exponent);
}

double success_prob_general(const LinkGeometry& target,
                            std::span<const LinkGeometry> interferers,
                            const ChannelParams& channel) {
  const double signal = target.fading_param * received_power_factor(target);
  double p = std::exp(-channel.sinr_threshold * channel.noise_power_mw / signal);
  for (const auto& link : interferers) {
    const double cross = link.fading_param * received_power_factor(link);
    p /= 1.0 + channel.sinr_threshold * cross / signal;
  }
  return p;
}

double success_prob_symmetric(const LinkGeometry& target, int k_transmitters,
                              const ChannelParams& channel) {
  if (k_transmitters < 1) throw std::out_of_range("k_transmitters must be >= 1");
  const double signal = target.fading_param * received_power_factor(target);
  const double noise_term = std::exp(-channel.sinr_threshold * channel.noise_power_mw / signal);
  return noise_term * std::pow(1.0 + channel.sinr_threshold, -(k_transmitters - 1.0));
}

double success_prob_primary_given_k(const TopologySpec& topo, int k) {
  if (k < 0 || k > topo.n_secondary) throw std::out_of_range("interferer count outside [0, n_secondary]");
  const double signal = topo.primary_link.fading_param * received_power_factor(topo.primary_link);
  const double cross = topo.secondary_to_primary_rx.fading_param *
                       received_power_factor(topo.secondary_to_primary_rx);
  const auto& ch = topo.primary_channel;
  const double noise_term = std::exp(-ch.sinr_threshold * ch.noise_power_mw / signal);
  return noise_term * std::pow(1.0 + ch.sinr_threshold * cross / signal, -double(k));
}

double success_prob_secondary_given_k(const TopologySpec& topo, int k,
                                      bool primary_active) {
  if (k < 1 || k > topo.n_secondary) throw std::out_of_range("transmitter count outside [1, n_secondary]");
  const double signal = topo.secondary_link.fading_param * received_power_factor(topo.secondary_link);
  const auto& ch = topo.secondary_channel;
  double p = std::exp(-ch.sinr_threshold * ch.noise_power_mw / signal);
  const double cross = topo.secondary_cross.fading_param * received_power_factor(topo.secondary_cross);
  p *= std::pow(1.0 + ch.sinr_threshold * cross / signal, -double(k - 1));
  if (primary_active) {
    const double from_primary = topo.primary_to_secondary_rx.fading_param *
                                received_power_factor(topo.primary_to_secondary_rx);
    p /= 1.0 + ch.sinr_threshold * from_primary / signal;
  }
  return p;
}

}  // namespace csa

#pragma once

#include <span>

namespace csa {

// One directed transmitter -> receiver link. Power in mW, distance in meters.
struct LinkGeometry {
  double tx_power_mw = 0.0;
  double distance_m = 0.0;
  double path_loss_exponent = 4.0;
  double fading_param = 1.0;  // Rayleigh power parameter v (mean of the exponential gain)
};

// Decoding parameters of a receiver class, linear units.
struct ChannelParams {
  double sinr_threshold = 1.0;  // gamma
  double noise_power_mw = 0.0;  // eta
};

// Symmetric shared-access topology: one primary pair plus n interchangeable
// secondary pairs. The three cross links describe how foreign transmitters
// are received; they are independent required inputs, not derived values.
struct TopologySpec {
  int n_secondary = 0;
  LinkGeometry primary_link;             // primary tx -> primary rx
  LinkGeometry secondary_link;           // secondary tx -> its own rx
  LinkGeometry secondary_to_primary_rx;  // secondary tx -> primary rx
  LinkGeometry primary_to_secondary_rx;  // primary tx -> any secondary rx
  LinkGeometry secondary_cross;          // secondary tx -> a foreign secondary rx
  ChannelParams primary_channel;
  ChannelParams secondary_channel;
};

void validate(const LinkGeometry& link, const char* name);
void validate(const ChannelParams& channel, const char* name);
void validate(const TopologySpec& topo);

double db_to_linear(double value_db);

// Average received power P_tx * r^(-alpha), mW.
double received_power_factor(const LinkGeometry& link);

// Probability that the target link's SINR clears the threshold under
// Rayleigh block fading, for an arbitrary set of simultaneous interferers.
double success_prob_general(const LinkGeometry& target,
                            std::span<const LinkGeometry> interferers,
                            const ChannelParams& channel);

// Same, when all k_transmitters links (target included) share the target's
// geometry; reduces to a closed product.
double success_prob_symmetric(const LinkGeometry& target, int k_transmitters,
                              const ChannelParams& channel);

// Primary link success with k active secondary interferers, 0 <= k <= n.
double success_prob_primary_given_k(const TopologySpec& topo, int k);

// Tagged secondary link success when k secondaries transmit in total
// (tagged one included, 1 <= k <= n), optionally with the primary active.
double success_prob_secondary_given_k(const TopologySpec& topo, int k,
                                      bool primary_active);

}  // namespace csa

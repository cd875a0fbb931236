#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "csa/phy.hpp"
#include "mc_oracle.hpp"
#include "topologies.hpp"

using namespace csa;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("decibel conversion hits known anchors") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(std::abs(db_to_linear(5.0) - 3.16228) < 1e-5);
  CHECK(rel_close(db_to_linear(5.0), 3.1622776601683795, 1e-14));
  CHECK(std::abs(db_to_linear(-121.0) - 7.9433e-13) < 1e-16);
  CHECK(rel_close(db_to_linear(-121.0), 7.943282347242822e-13, 1e-13));
  CHECK(rel_close(db_to_linear(-500.0), 1e-50, 1e-13));
  CHECK(rel_close(db_to_linear(10.0), 10.0, 1e-14));
  CHECK_THROWS_AS(db_to_linear(std::nan("")), std::invalid_argument);
}

TEST_CASE("received power factor is transmit power over distance to the alpha") {
  CHECK(rel_close(received_power_factor({10.0, 150.0, 4.0, 1.0}), 1.9753086419753086e-8, 1e-13));
  CHECK(std::abs(received_power_factor({10.0, 150.0, 4.0, 1.0}) - 1.97531e-8) < 1e-12);
  CHECK(rel_close(received_power_factor({0.1, 40.0, 4.0, 1.0}), 3.90625e-8, 1e-13));
  CHECK(rel_close(received_power_factor({0.1, 150.0, 4.0, 1.0}), 1.9753086419753086e-10, 1e-13));
  CHECK(received_power_factor({1.0, 1.0, 4.0, 1.0}) == 1.0);
}

TEST_CASE("success is certain without noise or interference") {
  const LinkGeometry link{10.0, 150.0, 4.0, 1.0};
  CHECK(success_prob_general(link, {}, {2.0, 0.0}) == 1.0);
  CHECK(success_prob_symmetric(link, 1, {2.0, 0.0}) == 1.0);
}

TEST_CASE("noise-only success probability matches the exponential factor") {
  const LinkGeometry link{10.0, 150.0, 4.0, 1.0};
  const ChannelParams ch{db_to_linear(5.0), db_to_linear(-121.0)};
  const double p = success_prob_general(link, {}, ch);
  // exp(-gamma * eta / h) for the reference primary link
  CHECK(std::abs(p - 0.9998728438344354) < 1e-12);
  CHECK(std::abs(p - 0.999873) < 1e-6);
  CHECK(success_prob_symmetric(link, 1, ch) == p);

  const auto topo = strong_topology(2, 5.0);
  CHECK(success_prob_primary_given_k(topo, 0) == p);
}

TEST_CASE("identical interferers contribute exact factors of one half") {
  const LinkGeometry link{1.0, 1.0, 2.0, 1.0};
  const ChannelParams ch{1.0, 0.0};
  const std::vector<LinkGeometry> one(1, link);
  const std::vector<LinkGeometry> two(2, link);
  CHECK(std::abs(success_prob_general(link, one, ch) - 0.5) < 1e-15);
  CHECK(std::abs(success_prob_general(link, two, ch) - 0.25) < 1e-15);
  CHECK(std::abs(success_prob_symmetric(link, 3, ch) - 0.25) < 1e-15);
}

TEST_CASE("symmetric closed product equals the general form") {
  const LinkGeometry link{0.1, 40.0, 4.0, 1.0};
  const ChannelParams ch{db_to_linear(5.0), db_to_linear(-121.0)};
  for (int k = 1; k <= 5; ++k) {
    const std::vector<LinkGeometry> others(std::size_t(k - 1), link);
    CHECK(rel_close(success_prob_general(link, others, ch),
                    success_prob_symmetric(link, k, ch), 1e-12));
  }
}

TEST_CASE("two symmetric transmitters on the reference secondary link") {
  const LinkGeometry link{0.1, 40.0, 4.0, 1.0};
  const ChannelParams ch{db_to_linear(5.0), db_to_linear(-121.0)};
  const double p = success_prob_symmetric(link, 2, ch);
  CHECK(std::abs(p - 0.24023762454482164) < 1e-12);
  CHECK(std::abs(p - 0.240228) <= 1e-4);
}

TEST_CASE("success probabilities decrease in interferer count, threshold, and noise") {
  const auto topo = strong_topology(4, 5.0);
  double prev = 1.1;
  for (int k = 0; k <= 4; ++k) {
    const double p = success_prob_primary_given_k(topo, k);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    CHECK(p < prev);
    prev = p;
  }

  const LinkGeometry link{0.1, 40.0, 4.0, 1.0};
  double prev_gamma = 1.1;
  for (double gamma : {0.1, 1.0, 10.0}) {
    const double p = success_prob_symmetric(link, 3, {gamma, 1e-10});
    CHECK(p < prev_gamma);
    prev_gamma = p;
  }

  double prev_eta = 1.1;
  for (double eta : {1e-12, 1e-9, 1e-8}) {
    const double p = success_prob_symmetric(link, 2, {1.0, eta});
    CHECK(p < prev_eta);
    prev_eta = p;
  }
}

TEST_CASE("tagged secondary alone succeeds with zero noise") {
  const auto topo = unit_topology(3);
  CHECK(success_prob_secondary_given_k(topo, 1, false) == 1.0);
  // primary active with equal received power at the secondary receiver
  CHECK(std::abs(success_prob_secondary_given_k(topo, 1, true) - 0.5) < 1e-15);
}

TEST_CASE("an active primary never helps a secondary") {
  const auto topo = strong_topology(4, -3.0);
  for (int k = 1; k <= 4; ++k) {
    CHECK(success_prob_secondary_given_k(topo, k, true) <=
          success_prob_secondary_given_k(topo, k, false));
  }
}

TEST_CASE("closed forms match an independent Monte Carlo fading experiment") {
  constexpr std::uint64_t kDraws = 1'000'000;

  // reference primary link, no interferers
  {
    const LinkGeometry link{10.0, 150.0, 4.0, 1.0};
    const ChannelParams ch{db_to_linear(5.0), db_to_linear(-121.0)};
    const double closed = success_prob_general(link, {}, ch);
    const auto mc = mc_success_prob(link, {}, ch, kDraws, 7001);
    CHECK(std::abs(closed - mc.p) <= 3.0 * mc.se);
  }

  // primary receiver with two weak secondary interferers
  {
    const auto topo = weak_topology(3, -3.0);
    const double closed = success_prob_primary_given_k(topo, 2);
    const std::vector<LinkGeometry> inter(2, topo.secondary_to_primary_rx);
    const auto mc = mc_success_prob(topo.primary_link, inter, topo.primary_channel,
                                    kDraws, 7002);
    CHECK(std::abs(closed - mc.p) <= 3.0 * mc.se);
  }

  // tagged secondary among three transmitters plus the active primary
  {
    const auto topo = strong_topology(3, 5.0);
    const double closed = success_prob_secondary_given_k(topo, 3, true);
    std::vector<LinkGeometry> inter(2, topo.secondary_cross);
    inter.push_back(topo.primary_to_secondary_rx);
    const auto mc = mc_success_prob(topo.secondary_link, inter, topo.secondary_channel,
                                    kDraws, 7003);
    CHECK(std::abs(closed - mc.p) <= 3.0 * mc.se);
  }

  // asymmetric geometry with non-unit fading means and mixed exponents
  {
    const LinkGeometry target{1.0, 10.0, 3.0, 2.0};
    const std::vector<LinkGeometry> inter{{0.5, 12.0, 2.5, 0.7}, {2.0, 30.0, 4.0, 1.3}};
    const ChannelParams ch{1.7, 1e-9};
    const double closed = success_prob_general(target, inter, ch);
    const auto mc = mc_success_prob(target, inter, ch, kDraws, 7004);
    CHECK(std::abs(closed - mc.p) <= 3.0 * mc.se);
  }
}

TEST_CASE("geometry and channel validation rejects out-of-range fields") {
  CHECK_THROWS_AS(validate(LinkGeometry{0.0, 10.0, 4.0, 1.0}, "link"), std::invalid_argument);
  CHECK_THROWS_AS(validate(LinkGeometry{1.0, -1.0, 4.0, 1.0}, "link"), std::invalid_argument);
  CHECK_THROWS_AS(validate(LinkGeometry{1.0, 10.0, 1.9, 1.0}, "link"), std::invalid_argument);
  CHECK_THROWS_AS(validate(LinkGeometry{1.0, 10.0, 4.0, 0.0}, "link"), std::invalid_argument);
  CHECK_THROWS_AS(validate(ChannelParams{0.0, 1e-12}, "ch"), std::invalid_argument);
  CHECK_THROWS_AS(validate(ChannelParams{1.0, -1e-12}, "ch"), std::invalid_argument);

  auto topo = strong_topology(1, 5.0);
  topo.n_secondary = -1;
  CHECK_THROWS_AS(validate(topo), std::invalid_argument);
  topo.n_secondary = 10001;
  CHECK_THROWS_AS(validate(topo), std::invalid_argument);
}

TEST_CASE("per-k helpers reject out-of-range transmitter counts") {
  const auto topo = strong_topology(2, 5.0);
  CHECK_THROWS_AS(success_prob_primary_given_k(topo, -1), std::out_of_range);
  CHECK_THROWS_AS(success_prob_primary_given_k(topo, 3), std::out_of_range);
  CHECK_THROWS_AS(success_prob_secondary_given_k(topo, 0, false), std::out_of_range);
  CHECK_THROWS_AS(success_prob_secondary_given_k(topo, 3, true), std::out_of_range);
  CHECK_THROWS_AS(success_prob_symmetric({1.0, 1.0, 2.0, 1.0}, 0, {1.0, 0.0}),
                  std::out_of_range);
}

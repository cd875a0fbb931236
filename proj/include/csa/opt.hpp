#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csa/markov.hpp"
#include "csa/phy.hpp"

namespace csa {

// Grid search over access probabilities: one coarse pass over [0,1] (or the
// pinned subset), then refine_rounds passes that shrink the step by
// refine_factor inside a one-step box around the incumbent. Defaults reach a
// resolution of 1e-4.
struct GridSpec {
  double coarse_step = 0.01;
  int refine_factor = 10;
  int refine_rounds = 2;
};

void validate(const GridSpec& grid);

struct Solution {
  double q_pr_opt = 0.0;
  double q_s_opt = 0.0;
  double objective = 0.0;  // minimized age, or maximized per-node throughput
  bool feasible = false;
  // names of constraints active at the optimum (relative slack <= 1e-3);
  // when no grid point is feasible this instead carries the reason:
  // "stability", "throughput", "age", or "zero-arrival-rate"
  std::vector<std::string> binding_constraints;
};

// Minimize the primary's average age over (q_pr, q_s) subject to stability
// and a per-node secondary throughput floor mu_s >= mu_min.
Solution min_age_subject_to_throughput(const TopologySpec& topo, double lambda,
                                       double mu_min, const GridSpec& grid);

// Maximize the per-node secondary throughput over q_s subject to stability
// and an average-age ceiling. q_pr is pinned to 1: the secondary throughput
// does not depend on q_pr while the age ceiling only relaxes as q_pr grows,
// so q_pr = 1 weakly dominates every alternative.
Solution max_throughput_subject_to_age(const TopologySpec& topo, double lambda,
                                       double delta_max, const GridSpec& grid);

// Full-factorial closed-form evaluation, written as CSV by the CLI.
enum class SweepVar { kLambda, kPrimaryAccess, kSecondaryAccess, kSecondaryCount };

struct SweepAxis {
  SweepVar var;
  std::vector<double> values;
};

struct SweepRow {
  double lambda = 0.0;
  double q_pr = 0.0;
  double q_s = 0.0;
  int n_secondary = 0;
  double mu = 0.0;
  double mu_s = 0.0;     // per node; NaN when the queue is unstable
  double mu_total = 0.0;  // n_secondary * mu_s
  double delta = 0.0;     // average age; +inf when unstable
  bool feasible = false;
  std::string binding;  // active or violated constraints, ';'-joined
};

// Rows are emitted in odometer order: the first axis varies slowest. Values
// not covered by an axis come from the base access config and topology.
std::vector<SweepRow> sweep(const TopologySpec& topo, const AccessConfig& base,
                            std::span<const SweepAxis> axes,
                            std::optional<double> mu_min,
                            std::optional<double> delta_max);

}  // namespace csa

#include "csa/opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace csa {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;       // relative, on the objective
constexpr double kBindingTol = 1e-3;    // relative slack below which a constraint counts as active

struct Candidate {
  double q_pr = kNaN;
  double q_s = kNaN;
  double score = kInf;  // lower is better
  bool valid = false;
};

// Strict improvement test; exact ties fall back to smaller q_s, then q_pr.
bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  const double tol = kTieTol * std::max({1.0, std::abs(a.score), std::abs(b.score)});
  if (std::abs(a.score - b.score) <= tol) {
    if (a.q_s != b.q_s) return a.q_s < b.q_s;
    return a.q_pr < b.q_pr;
  }
  return a.score < b.score;
}

std::vector<double> full_axis(double step) {
  std::vector<double> v;
  const int n = int(std::ceil(1.0 / step - 1e-9));
  v.reserve(n + 1);
  for (int i = 0; i < n; ++i) v.push_back(i * step);
  v.push_back(1.0);
  return v;
}

std::vector<double> box_axis(double center, double fine, int factor) {
  std::vector<double> v;
  v.reserve(2 * factor + 1);
  for (int i = -factor; i <= factor; ++i)
    v.push_back(std::clamp(center + i * fine, 0.0, 1.0));
  return v;
}

void require_unit(double v, const char* name) {
  if (!(v >= 0.0) || !(v <= 1.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

Solution infeasible(const char* reason) {
  Solution sol;
  sol.q_pr_opt = sol.q_s_opt = sol.objective = kNaN;
  sol.feasible = false;
  sol.binding_constraints = {reason};
  return sol;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ';';
    out += p;
  }
  return out;
}
}  // namespace

void validate(const GridSpec& grid) {
  if (!(grid.coarse_step > 0.0) || !(grid.coarse_step <= 0.5))
    throw std::invalid_argument("coarse_step must lie in (0, 0.5]");
  if (grid.refine_factor < 2) throw std::invalid_argument("refine_factor must be >= 2");
  if (grid.refine_rounds < 0 || grid.refine_rounds > 8)
    throw std::invalid_argument("refine_rounds must lie in [0, 8]");
}

Solution min_age_subject_to_throughput(const TopologySpec& topo, double lambda,
                                       double mu_min, const GridSpec& grid) {
  validate(grid);
  require_unit(lambda, "lambda");
  if (!(mu_min >= 0.0) || !std::isfinite(mu_min))
    throw std::invalid_argument("mu_min must be finite and >= 0");
  if (lambda == 0.0) return infeasible("zero-arrival-rate");

  AnalyticModel model(topo);
  const int n = topo.n_secondary;
  bool any_stable = false;
  Candidate best;

  auto per_node = [&](double q_pr, double q_s) {
    return n > 0 ? model.throughput({lambda, q_pr, q_s}).per_node : 0.0;
  };
  auto eval = [&](double q_pr, double q_s) {
    const double mu = model.service_rate(q_pr, q_s);
    if (!(lambda < mu)) return;
    any_stable = true;
    if (per_node(q_pr, q_s) < mu_min) return;
    Candidate c{q_pr, q_s, average_age_value(lambda, mu), true};
    if (better(c, best)) best = c;
  };

  const auto coarse = full_axis(grid.coarse_step);
  for (double a : coarse)
    for (double b : coarse) eval(a, b);
  double step = grid.coarse_step;
  for (int r = 0; r < grid.refine_rounds && best.valid; ++r) {
    const double fine = step / grid.refine_factor;
    for (double a : box_axis(best.q_pr, fine, grid.refine_factor))
      for (double b : box_axis(best.q_s, fine, grid.refine_factor)) eval(a, b);
    step = fine;
  }

  if (!best.valid) return infeasible(any_stable ? "throughput" : "stability");
  Solution sol;
  sol.q_pr_opt = best.q_pr;
  sol.q_s_opt = best.q_s;
  sol.objective = best.score;
  sol.feasible = true;
  const double mu = model.service_rate(best.q_pr, best.q_s);
  if (mu - lambda <= kBindingTol * mu) sol.binding_constraints.push_back("stability");
  // a zero floor is vacuous and never reported as active
  if (mu_min > 0.0 &&
      per_node(best.q_pr, best.q_s) - mu_min <= kBindingTol * std::max(mu_min, 1e-9))
    sol.binding_constraints.push_back("throughput");
  return sol;
}

Solution max_throughput_subject_to_age(const TopologySpec& topo, double lambda,
                                       double delta_max, const GridSpec& grid) {
  validate(grid);
  require_unit(lambda, "lambda");
  if (!(delta_max > 0.0))  // +inf allowed: age unconstrained
    throw std::invalid_argument("delta_max must be > 0");
  if (lambda == 0.0) return infeasible("zero-arrival-rate");

  AnalyticModel model(topo);
  const int n = topo.n_secondary;
  bool any_stable = false;
  Candidate best;

  auto per_node = [&](double q_s) {
    return n > 0 ? model.throughput({lambda, 1.0, q_s}).per_node : 0.0;
  };
  auto eval = [&](double q_s) {
    const double mu = model.service_rate(1.0, q_s);
    if (!(lambda < mu)) return;
    any_stable = true;
    if (average_age_value(lambda, mu) > delta_max) return;
    Candidate c{1.0, q_s, -per_node(q_s), true};
    if (better(c, best)) best = c;
  };

  for (double b : full_axis(grid.coarse_step)) eval(b);
  double step = grid.coarse_step;
  for (int r = 0; r < grid.refine_rounds && best.valid; ++r) {
    const double fine = step / grid.refine_factor;
    for (double b : box_axis(best.q_s, fine, grid.refine_factor)) eval(b);
    step = fine;
  }

  if (!best.valid) return infeasible(any_stable ? "age" : "stability");
  Solution sol;
  sol.q_pr_opt = 1.0;
  sol.q_s_opt = best.q_s;
  sol.objective = -best.score;
  sol.feasible = true;
  const double mu = model.service_rate(1.0, best.q_s);
  if (mu - lambda <= kBindingTol * mu) sol.binding_constraints.push_back("stability");
  if (std::isfinite(delta_max) &&
      delta_max - average_age_value(lambda, mu) <= kBindingTol * delta_max)
    sol.binding_constraints.push_back("age");
  return sol;
}

std::vector<SweepRow> sweep(const TopologySpec& topo, const AccessConfig& base,
                            std::span<const SweepAxis> axes,
                            std::optional<double> mu_min,
                            std::optional<double> delta_max) {
  validate(base);
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw std::invalid_argument("sweep axis has no values");
    for (double v : axis.values) {
      if (axis.var == SweepVar::kSecondaryCount) {
        if (!(v >= 0.0) || std::abs(v - std::round(v)) > 1e-9 || v > 10000.0)
          throw std::invalid_argument("n_secondary sweep values must be integers in [0, 10000]");
      } else {
        require_unit(v, "sweep value");
      }
    }
  }

  std::map<int, AnalyticModel> models;
  auto model_for = [&](int n) -> const AnalyticModel& {
    auto it = models.find(n);
    if (it == models.end()) {
      TopologySpec t = topo;
      t.n_secondary = n;
      it = models.try_emplace(n, t).first;
    }
    return it->second;
  };

  std::vector<SweepRow> rows;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    double lambda = base.arrival_rate;
    double q_pr = base.primary_access_prob;
    double q_s = base.secondary_access_prob;
    int n = topo.n_secondary;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const double v = axes[i].values[idx[i]];
      switch (axes[i].var) {
        case SweepVar::kLambda: lambda = v; break;
        case SweepVar::kPrimaryAccess: q_pr = v; break;
        case SweepVar::kSecondaryAccess: q_s = v; break;
        case SweepVar::kSecondaryCount: n = int(std::llround(v)); break;
      }
    }

    const AnalyticModel& model = model_for(n);
    SweepRow row;
    row.lambda = lambda;
    row.q_pr = q_pr;
    row.q_s = q_s;
    row.n_secondary = n;
    row.mu = model.service_rate(q_pr, q_s);
    std::vector<std::string> marks;
    if (lambda < row.mu) {
      row.delta = lambda > 0.0 ? average_age_value(lambda, row.mu) : kInf;
      row.mu_s = n > 0 ? model.throughput({lambda, q_pr, q_s}).per_node : 0.0;
      row.mu_total = double(n) * row.mu_s;
      row.feasible = true;
      if (mu_min) {
        if (row.mu_s < *mu_min) {
          row.feasible = false;
          marks.push_back("throughput");
        } else if (*mu_min > 0.0 &&
                   row.mu_s - *mu_min <= kBindingTol * std::max(*mu_min, 1e-9)) {
          marks.push_back("throughput");
        }
      }
      if (delta_max) {
        if (row.delta > *delta_max) {
          row.feasible = false;
          marks.push_back("age");
        } else if (std::isfinite(*delta_max) &&
                   *delta_max - row.delta <= kBindingTol * *delta_max) {
          marks.push_back("age");
        }
      }
      if (row.mu - lambda <= kBindingTol * row.mu) marks.push_back("stability");
    } else {
      row.delta = kInf;
      row.mu_s = kNaN;
      row.mu_total = kNaN;
      row.feasible = false;
      marks.push_back("stability");
    }
    row.binding = join(marks);
    rows.push_back(std::move(row));

    bool rolled = true;
    for (int i = int(axes.size()) - 1; i >= 0; --i) {
      if (++idx[i] < axes[i].values.size()) {
        rolled = false;
        break;
      }
      idx[i] = 0;
    }
    if (rolled) break;
  }
  return rows;
}

}  // namespace csa

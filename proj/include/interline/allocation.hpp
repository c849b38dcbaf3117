#pragma once

// Fleet sizing (even-headway cycle rule and the deficit function) and the greedy
// effective-percentile split of a route fleet into dedicated and shared buses.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "interline/common.hpp"
#include "interline/runtime_model.hpp"

namespace interline {

enum class PlanMode { even_headway, explicit_timetable };

struct ServicePlan {
  std::string route_id;
  PlanMode mode = PlanMode::even_headway;
  Seconds headway = 0.0;
  std::vector<Seconds> departures;  ///< seconds from period start, explicit mode only
  Seconds period_start = 0.0;
  Seconds period_end = 0.0;

  static ServicePlan even(std::string id, Seconds headway, Seconds start, Seconds end) {
    ServicePlan p;
    p.route_id = std::move(id);
    p.mode = PlanMode::even_headway;
    p.headway = headway;
    p.period_start = start;
    p.period_end = end;
    return p;
  }

  static ServicePlan timetable(std::string id, std::vector<Seconds> departures, Seconds start, Seconds end) {
    ServicePlan p;
    p.route_id = std::move(id);
    p.mode = PlanMode::explicit_timetable;
    p.departures = std::move(departures);
    p.period_start = start;
    p.period_end = end;
    return p;
  }

  bool operator==(const ServicePlan&) const = default;
};

inline void validate(const ServicePlan& plan) {
  if (!(plan.period_end > plan.period_start)) {
    throw DomainError("plan '" + plan.route_id + "': period end must be after start");
  }
  if (plan.mode == PlanMode::even_headway) {
    if (!(plan.headway > 0.0)) throw DomainError("plan '" + plan.route_id + "': headway must be > 0");
    return;
  }
  for (std::size_t i = 0; i < plan.departures.size(); ++i) {
    const double d = plan.departures[i];
    if (i > 0 && !(d > plan.departures[i - 1])) {
      throw DomainError("plan '" + plan.route_id + "': departures must be strictly increasing");
    }
    if (d < 0.0 || plan.period_start + d >= plan.period_end) {
      throw DomainError("plan '" + plan.route_id + "': departure outside the period");
    }
  }
}

/// Absolute scheduled departure times of the plan.
inline std::vector<Seconds> scheduled_departures(const ServicePlan& plan) {
  std::vector<Seconds> out;
  if (plan.mode == PlanMode::explicit_timetable) {
    for (double d : plan.departures) out.push_back(plan.period_start + d);
    return out;
  }
  for (long i = 0;; ++i) {
    const double t = plan.period_start + static_cast<double>(i) * plan.headway;
    if (t >= plan.period_end) break;
    out.push_back(t);
  }
  return out;
}

/// Scheduled headway; for explicit timetables the mean gap between departures.
inline Seconds scheduled_headway(const ServicePlan& plan) {
  if (plan.mode == PlanMode::even_headway) return plan.headway;
  if (plan.departures.size() < 2) return plan.period_end - plan.period_start;
  return (plan.departures.back() - plan.departures.front()) / static_cast<double>(plan.departures.size() - 1);
}

/// N = ceil(C / h).
inline int fleet_size_even_headway(Seconds cycle, Seconds headway) {
  if (!(cycle > 0.0) || !(headway > 0.0)) throw DomainError("fleet_size_even_headway: cycle and headway must be > 0");
  return static_cast<int>(std::ceil(cycle / headway));
}

/// Maximum of the deficit step function for `departures` (any order) when every trip returns
/// to the hub after `trip_duration`. A bus arriving at the same instant as a departure can take it.
inline int max_deficit(std::vector<Seconds> departures, Seconds trip_duration) {
  if (departures.empty()) throw DomainError("deficit function: empty timetable");
  if (!(trip_duration > 0.0)) throw DomainError("deficit function: trip duration must be > 0");
  std::sort(departures.begin(), departures.end());
  const std::size_t n = departures.size();
  std::size_t next_arrival = 0;
  int deficit = 0;
  int best = 0;
  for (std::size_t i = 0; i < n;) {
    const double t = departures[i];
    while (next_arrival < n && departures[next_arrival] + trip_duration <= t) {
      ++next_arrival;
      --deficit;
    }
    while (i < n && departures[i] == t) {
      ++deficit;
      ++i;
    }
    best = std::max(best, deficit);
  }
  return best;
}

/// Deficit-function fleet size for an explicit timetable.
inline int fleet_size_deficit(const ServicePlan& plan, Seconds trip_duration) {
  if (plan.mode != PlanMode::explicit_timetable) {
    throw DomainError("fleet_size_deficit: plan '" + plan.route_id + "' is not an explicit timetable");
  }
  if (plan.departures.empty()) throw DomainError("fleet_size_deficit: plan '" + plan.route_id + "' has no departures");
  return max_deficit(scheduled_departures(plan), trip_duration);
}

/// Probability that a run time fits in the cycle N * h.
inline double effective_percentile(const RunTimeModel& model, int fleet, Seconds headway) {
  if (fleet < 1) throw DomainError("effective_percentile: fleet must be >= 1");
  if (!(headway > 0.0)) throw DomainError("effective_percentile: headway must be > 0");
  return model.cdf(static_cast<double>(fleet) * headway);
}

/// Longest constant trip duration an explicit timetable tolerates with `fleet` buses.
/// Returns +inf when the fleet covers every departure and 0 when it covers none.
inline Seconds effective_cycle(const ServicePlan& plan, int fleet) {
  const auto deps = scheduled_departures(plan);
  if (fleet >= static_cast<int>(deps.size())) return std::numeric_limits<double>::infinity();
  if (fleet <= 0) return 0.0;
  // The deficit only steps up once the duration exceeds some gap d_j - d_i, so the answer is a gap.
  std::vector<Seconds> gaps;
  for (std::size_t i = 0; i < deps.size(); ++i)
    for (std::size_t j = i + 1; j < deps.size(); ++j) gaps.push_back(deps[j] - deps[i]);
  std::sort(gaps.begin(), gaps.end());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  auto ok = [&](Seconds d) { return max_deficit(deps, d) <= fleet; };
  std::size_t lo = 0, hi = gaps.size();  // first gap that fails
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (ok(gaps[mid])) lo = mid + 1;
    else hi = mid;
  }
  return lo == 0 ? 0.0 : gaps[lo - 1];
}

struct AllocationRoute {
  ServicePlan plan;
  RunTimeModel model;
  std::optional<int> base_fleet;  ///< overrides the design-percentile sizing when set
};

struct AllocationOptions {
  double design_percentile = 0.95;
  int min_dedicated = 1;
};

struct DonationStep {
  int step = 0;
  int route = 0;  ///< index into the input route list
  std::string route_id;
  double effective_percentile = 0.0;
};

struct AllocationResult {
  std::vector<std::string> route_ids;
  std::vector<int> base_fleet;
  std::vector<int> dedicated;
  int shared_fleet_size = 0;
  std::vector<DonationStep> trace;

  int total_fleet() const {
    int n = shared_fleet_size;
    for (int d : dedicated) n += d;
    return n;
  }
};

/// Base fleet of a route assuming all its buses are dedicated.
inline int base_fleet_size(const AllocationRoute& route, double design_percentile) {
  if (route.base_fleet) {
    if (*route.base_fleet < 0) throw DomainError("route '" + route.plan.route_id + "': fleet must be >= 0");
    return *route.base_fleet;
  }
  if (!(design_percentile > 0.0 && design_percentile < 1.0)) {
    throw DomainError("design percentile must lie in (0, 1)");
  }
  const Seconds cycle = route.model.quantile(design_percentile);
  if (route.plan.mode == PlanMode::even_headway) return fleet_size_even_headway(cycle, route.plan.headway);
  return fleet_size_deficit(route.plan, cycle);
}

/// Percentile of the route's run-time distribution covered by a fleet of `fleet` buses.
inline double route_percentile(const AllocationRoute& route, int fleet) {
  if (fleet <= 0) return 0.0;
  if (route.plan.mode == PlanMode::even_headway) return effective_percentile(route.model, fleet, route.plan.headway);
  return route.model.cdf(effective_cycle(route.plan, fleet));
}

/// Greedy shared-fleet selection: each step the route whose run-time percentile stays highest
/// after losing one bus donates it. Ties go to the lowest route index.
inline AllocationResult allocate(const std::vector<AllocationRoute>& routes, int shared_target,
                                 const AllocationOptions& options = {}) {
  if (shared_target < 0) throw DomainError("allocate: shared fleet size must be >= 0");
  AllocationResult result;
  for (const auto& r : routes) {
    result.route_ids.push_back(r.plan.route_id);
    result.base_fleet.push_back(base_fleet_size(r, options.design_percentile));
  }
  result.dedicated = result.base_fleet;

  for (int step = 1; step <= shared_target; ++step) {
    int donor = -1;
    int blocked = -1;
    double best = -1.0;
    double best_blocked = -1.0;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      const int remaining = result.dedicated[r] - 1;
      if (remaining < 0) continue;
      const double p = route_percentile(routes[r], remaining);
      if (remaining < options.min_dedicated) {
        if (p > best_blocked) best_blocked = p, blocked = static_cast<int>(r);
        continue;
      }
      if (p > best) best = p, donor = static_cast<int>(r);
    }
    if (donor < 0) {
      std::string who = blocked >= 0 ? routes[blocked].plan.route_id : std::string("<none>");
      throw DomainError("allocate: shared fleet size " + std::to_string(shared_target) +
                        " is too large; route '" + who + "' would drop below " +
                        std::to_string(options.min_dedicated) + " dedicated bus(es) at step " +
                        std::to_string(step));
    }
    --result.dedicated[donor];
    ++result.shared_fleet_size;
    result.trace.push_back({step, donor, routes[donor].plan.route_id, best});
  }
  return result;
}

}  // namespace interline

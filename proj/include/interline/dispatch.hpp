#pragma once

// Real-time bus-to-trip assignment at a hub. Dedicated buses serve only their own
// route; shared buses can serve any route after moving between terminals.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "interline/assignment_solver.hpp"
#include "interline/common.hpp"

namespace interline::dispatch {

inline constexpr Seconds kDefaultPenalty = 86400.0;
inline constexpr int kDefaultHorizonDepth = 3;

enum class BusKind { dedicated, shared };

struct BusState {
  int id = 0;
  BusKind kind = BusKind::shared;
  int route = -1;            ///< owning route for dedicated buses, -1 for shared
  Seconds available_at = 0;  ///< at the hub since, or predicted hub arrival when inbound
  int terminal = 0;          ///< route terminal the bus is (or will be) parked at

  bool operator==(const BusState&) const = default;
};

struct TripRequest {
  int id = 0;
  int route = 0;
  Seconds scheduled_departure = 0;
  Seconds penalty = kDefaultPenalty;

  bool operator==(const TripRequest&) const = default;
};

/// Index pair (bus position, trip position) into an instance's lists.
struct Pair {
  std::size_t bus = 0;
  std::size_t trip = 0;
  auto operator<=>(const Pair&) const = default;
};

struct DispatchInstance {
  Seconds decision_time = 0;
  std::vector<BusState> buses;
  std::vector<TripRequest> trips;
  std::vector<std::vector<Seconds>> setup_time;  ///< terminal x route within-hub travel
  std::vector<Pair> feasible;                    ///< sorted, unique

  std::size_t route_count() const { return setup_time.size(); }

  bool is_feasible(std::size_t bus, std::size_t trip) const {
    return std::binary_search(feasible.begin(), feasible.end(), Pair{bus, trip});
  }
};

struct AssignmentSolution {
  std::vector<std::pair<int, int>> assignments;  ///< (bus_id, trip_id), ordered by trip position
  std::vector<int> unassigned_trips;
  Seconds objective = 0;
};

/// A dedicated bus may serve its own route's trips; a shared bus may serve any trip.
inline bool rule_allows(const BusState& bus, const TripRequest& trip) {
  return bus.kind == BusKind::shared || bus.route == trip.route;
}

/// Feasible set following the dedicated/shared rule.
inline std::vector<Pair> rule_feasible_set(std::span<const BusState> buses, std::span<const TripRequest> trips) {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < buses.size(); ++i)
    for (std::size_t j = 0; j < trips.size(); ++j)
      if (rule_allows(buses[i], trips[j])) out.push_back({i, j});
  return out;
}

inline std::vector<std::vector<Seconds>> uniform_setup_matrix(std::size_t routes, Seconds travel) {
  std::vector<std::vector<Seconds>> m(routes, std::vector<Seconds>(routes, travel));
  for (std::size_t r = 0; r < routes; ++r) m[r][r] = 0.0;
  return m;
}

/// Structural checks. The feasible set may be a subset of the rule's set (scheduled
/// operation pins dedicated buses to specific trips) but never a superset.
inline void validate(const DispatchInstance& inst) {
  const std::size_t routes = inst.setup_time.size();
  for (std::size_t a = 0; a < routes; ++a) {
    if (inst.setup_time[a].size() != routes) throw DomainError("dispatch instance: setup_time must be square");
    for (std::size_t b = 0; b < routes; ++b) {
      const double s = inst.setup_time[a][b];
      if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("dispatch instance: setup times must be finite and >= 0");
      if (a == b && s != 0.0) throw DomainError("dispatch instance: setup_time diagonal must be zero");
    }
  }
  auto in_range = [&](int r) { return r >= 0 && static_cast<std::size_t>(r) < routes; };
  std::vector<int> ids;
  for (const auto& b : inst.buses) {
    if (!in_range(b.terminal)) throw DomainError("dispatch instance: bus " + std::to_string(b.id) + " has an unknown terminal");
    if (b.kind == BusKind::dedicated && !in_range(b.route)) {
      throw DomainError("dispatch instance: dedicated bus " + std::to_string(b.id) + " has an unknown route");
    }
    ids.push_back(b.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw DomainError("dispatch instance: duplicate bus id");
  ids.clear();
  for (const auto& t : inst.trips) {
    if (!in_range(t.route)) throw DomainError("dispatch instance: trip " + std::to_string(t.id) + " has an unknown route");
    if (!(t.penalty >= 0.0)) throw DomainError("dispatch instance: penalties must be >= 0");
    ids.push_back(t.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw DomainError("dispatch instance: duplicate trip id");
  if (!std::is_sorted(inst.feasible.begin(), inst.feasible.end()) ||
      std::adjacent_find(inst.feasible.begin(), inst.feasible.end()) != inst.feasible.end()) {
    throw DomainError("dispatch instance: feasible set must be sorted and unique");
  }
  for (const auto& p : inst.feasible) {
    if (p.bus >= inst.buses.size() || p.trip >= inst.trips.size()) {
      throw DomainError("dispatch instance: feasible pair out of range");
    }
    if (!rule_allows(inst.buses[p.bus], inst.trips[p.trip])) {
      throw DomainError("dispatch instance: dedicated bus " + std::to_string(inst.buses[p.bus].id) +
                        " cannot serve trip " + std::to_string(inst.trips[p.trip].id) + " of another route");
    }
  }
}

/// Delay incurred by sending bus `bus` on trip `trip`: lateness of its earliest possible
/// dispatch (after any within-hub move) against the schedule. Early buses wait at no cost.
inline Seconds assignment_cost(const DispatchInstance& inst, std::size_t bus, std::size_t trip) {
  if (bus >= inst.buses.size() || trip >= inst.trips.size()) throw DomainError("assignment_cost: index out of range");
  const BusState& b = inst.buses[bus];
  const TripRequest& t = inst.trips[trip];
  if (!rule_allows(b, t)) {
    throw DomainError("assignment_cost: bus " + std::to_string(b.id) + " is dedicated to another route than trip " +
                      std::to_string(t.id));
  }
  const Seconds ready = std::max(b.available_at, inst.decision_time) + inst.setup_time.at(b.terminal).at(t.route);
  return std::max(0.0, ready - t.scheduled_departure);
}

/// True when every trip's penalty exceeds every feasible assignment cost.
inline bool penalties_dominate(const DispatchInstance& inst) {
  for (const auto& p : inst.feasible)
    if (!(inst.trips[p.trip].penalty > assignment_cost(inst, p.bus, p.trip))) return false;
  return true;
}

namespace detail {

/// Delay in microseconds, then a tie-break key, compared lexicographically.
struct LexCost {
  std::int64_t delay = 0;
  std::int64_t tie = 0;

  friend LexCost operator+(LexCost a, LexCost b) { return {a.delay + b.delay, a.tie + b.tie}; }
  friend LexCost operator-(LexCost a, LexCost b) { return {a.delay - b.delay, a.tie - b.tie}; }
  auto operator<=>(const LexCost&) const = default;
};

inline std::int64_t to_micros(Seconds s) { return static_cast<std::int64_t>(std::llround(s * 1e6)); }

}  // namespace detail

/// Optimal trip -> bus index (or -1) for the instance.
///
/// Minimizes total delay plus penalties of unassigned trips under the at-most-one
/// constraints, exactly, by min-cost perfect matching: every trip also gets a private
/// "unassigned" row priced at its penalty and every bus a zero-cost "idle" column.
/// Among equal-delay optima it prefers more assigned trips, then dedicated over shared
/// buses, then buses earlier in id order.
inline std::vector<int> solve_trip_buses(const DispatchInstance& inst) {
  using detail::LexCost;
  const std::size_t nb = inst.buses.size();
  const std::size_t nt = inst.trips.size();
  std::vector<int> result(nt, -1);
  if (nt == 0) return result;

  std::vector<std::size_t> order(nb);
  for (std::size_t i = 0; i < nb; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inst.buses[a].id < inst.buses[b].id; });
  std::vector<std::int64_t> rank(nb);
  for (std::size_t r = 0; r < nb; ++r) rank[order[r]] = static_cast<std::int64_t>(r);

  const auto nb64 = static_cast<std::int64_t>(nb);
  const std::int64_t shared_weight = nb64 * nb64 + 1;
  const std::int64_t assign_weight = static_cast<std::int64_t>(nt + 1) * shared_weight + 1;

  std::int64_t penalty_total = 0;
  for (const auto& t : inst.trips) penalty_total += detail::to_micros(t.penalty);
  const LexCost big{penalty_total + 1'000'000, 0};
  const LexCost infinity{std::numeric_limits<std::int64_t>::max() / 4, 0};

  const std::size_t n = nb + nt;
  std::vector<std::vector<LexCost>> cost(n, std::vector<LexCost>(n, big));
  for (const auto& p : inst.feasible) {
    const auto& bus = inst.buses[p.bus];
    const std::int64_t tie = -assign_weight + (bus.kind == BusKind::shared ? shared_weight : 0) + rank[p.bus];
    cost[p.bus][p.trip] = {detail::to_micros(assignment_cost(inst, p.bus, p.trip)), tie};
  }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t k = 0; k < nb; ++k) cost[i][nt + k] = LexCost{};
  for (std::size_t j = 0; j < nt; ++j) {
    cost[nb + j][j] = {detail::to_micros(inst.trips[j].penalty), 0};
    for (std::size_t k = 0; k < nb; ++k) cost[nb + j][nt + k] = LexCost{};
  }

  const auto row_to_col = interline::detail::solve_square_assignment(cost, infinity);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t col = row_to_col[i];
    if (col < nt && inst.is_feasible(i, col)) result[col] = static_cast<int>(i);
  }
  return result;
}

inline AssignmentSolution make_solution(const DispatchInstance& inst, const std::vector<int>& trip_bus) {
  AssignmentSolution sol;
  for (std::size_t j = 0; j < inst.trips.size(); ++j) {
    if (trip_bus[j] >= 0) {
      const auto i = static_cast<std::size_t>(trip_bus[j]);
      sol.assignments.emplace_back(inst.buses[i].id, inst.trips[j].id);
      sol.objective += assignment_cost(inst, i, j);
    } else {
      sol.unassigned_trips.push_back(inst.trips[j].id);
      sol.objective += inst.trips[j].penalty;
    }
  }
  return sol;
}

inline AssignmentSolution solve(const DispatchInstance& inst) {
  validate(inst);
  return make_solution(inst, solve_trip_buses(inst));
}

/// Everything the dispatcher can see at a decision time.
struct HubSnapshot {
  Seconds decision_time = 0;
  std::vector<BusState> buses;                     ///< available_at <= decision_time means at the hub
  std::vector<std::vector<TripRequest>> upcoming;  ///< per route, ascending scheduled departure
  std::vector<std::vector<Seconds>> setup_time;
};

/// Instance with every hub-resident bus, every shared bus, the k earliest inbound
/// dedicated buses of each route and the k next trips of each route.
inline DispatchInstance build_instance(const HubSnapshot& snap, int k = kDefaultHorizonDepth) {
  if (k < 1) throw DomainError("build_instance: horizon depth must be >= 1");
  DispatchInstance inst;
  inst.decision_time = snap.decision_time;
  inst.setup_time = snap.setup_time;
  const std::size_t routes = snap.setup_time.size();

  std::vector<std::vector<const BusState*>> inbound(routes);
  for (const auto& b : snap.buses) {
    const bool at_hub = b.available_at <= snap.decision_time;
    if (at_hub || b.kind == BusKind::shared) {
      inst.buses.push_back(b);
    } else if (b.route >= 0 && static_cast<std::size_t>(b.route) < routes) {
      inbound[b.route].push_back(&b);
    }
  }
  for (auto& list : inbound) {
    std::sort(list.begin(), list.end(), [](const BusState* a, const BusState* b) {
      return a->available_at != b->available_at ? a->available_at < b->available_at : a->id < b->id;
    });
    const std::size_t take = std::min<std::size_t>(list.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < take; ++i) inst.buses.push_back(*list[i]);
  }
  std::sort(inst.buses.begin(), inst.buses.end(), [](const BusState& a, const BusState& b) { return a.id < b.id; });

  for (const auto& trips : snap.upcoming) {
    const std::size_t take = std::min<std::size_t>(trips.size(), static_cast<std::size_t>(k));
    inst.trips.insert(inst.trips.end(), trips.begin(), trips.begin() + static_cast<std::ptrdiff_t>(take));
  }
  inst.feasible = rule_feasible_set(inst.buses, inst.trips);
  return inst;
}

enum class DedicatedMode { scheduled, schedule_free };

struct DedicatedCandidate {
  int bus_id = 0;
  Seconds available_at = 0;
};

struct DedicatedDecision {
  std::optional<int> bus_id;  ///< empty when the route has no usable dedicated bus
  Seconds departure = std::numeric_limits<double>::infinity();
};

/// Rule-based dispatch of a route's dedicated buses for a trip scheduled at `scheduled`.
/// Scheduled operation: the trip's pre-assigned bus leaves at max(schedule, its arrival).
/// Schedule-free: the earliest available dedicated bus leaves, late if none is there yet.
inline DedicatedDecision dispatch_dedicated(Seconds scheduled, std::span<const DedicatedCandidate> buses,
                                            DedicatedMode mode, std::optional<int> designated = std::nullopt) {
  const DedicatedCandidate* pick = nullptr;
  if (mode == DedicatedMode::scheduled) {
    if (!designated) return {};
    for (const auto& b : buses)
      if (b.bus_id == *designated) pick = &b;
  } else {
    for (const auto& b : buses) {
      if (!pick || b.available_at < pick->available_at ||
          (b.available_at == pick->available_at && b.bus_id < pick->bus_id)) {
        pick = &b;
      }
    }
  }
  if (!pick) return {};
  return {pick->bus_id, std::max(scheduled, pick->available_at)};
}

}  // namespace interline::dispatch

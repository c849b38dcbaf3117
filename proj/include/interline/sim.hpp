#pragma once

// Time-stepped simulation of a hub where routes run shuttle round trips. Buses are
// dedicated to one route or shared; trip times are moving time plus headway-driven dwell;
// each departure carries a random dispatching error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interline/allocation.hpp"
#include "interline/common.hpp"
#include "interline/dispatch.hpp"
#include "interline/rng.hpp"
#include "interline/runtime_model.hpp"

namespace interline::sim {

using dispatch::BusKind;
using dispatch::DedicatedMode;

struct Strategy {
  enum class Kind { optimal, fcfs, threshold };
  Kind kind = Kind::optimal;
  Seconds min_delay = 0;  ///< threshold strategy only

  bool operator==(const Strategy&) const = default;
};

struct Route {
  std::string id;
  ServicePlan plan;
  RunTimeModel moving;
  double ridership = 0;        ///< passengers per second
  Seconds dwell_per_pax = 0;
  Seconds dwell_intercept = 0;
  int dedicated_fleet = 0;

  bool operator==(const Route&) const = default;
};

struct Scenario {
  std::vector<Route> routes;
  int shared_fleet_size = 0;
  std::vector<int> shared_origin;  ///< starting terminal (route index) of each shared bus
  std::vector<std::vector<Seconds>> within_hub_travel;
  bool allow_passing = true;
  DedicatedMode dedicated_mode = DedicatedMode::schedule_free;
  RunTimeModel dispatch_error = RunTimeModel::constant(0.0);
  Seconds horizon = 9000;
  Seconds warmup = 0;
  Seconds time_step = 1;
  std::uint64_t seed = 1;
  Strategy strategy;
  int horizon_depth = dispatch::kDefaultHorizonDepth;
  Seconds penalty = dispatch::kDefaultPenalty;

  int total_fleet() const {
    int n = shared_fleet_size;
    for (const auto& r : routes) n += r.dedicated_fleet;
    return n;
  }

  bool operator==(const Scenario&) const = default;
};

inline void validate(const Scenario& s) {
  if (s.routes.empty()) throw ConfigError("routes", "at least one route is required");
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    const auto& r = s.routes[i];
    const std::string at = "routes[" + std::to_string(i) + "]";
    for (std::size_t j = 0; j < i; ++j)
      if (s.routes[j].id == r.id) throw ConfigError(at + ".id", "duplicate route id '" + r.id + "'");
    try {
      validate(r.plan);
    } catch (const DomainError& e) {
      throw ConfigError(at + ".plan", e.what());
    }
    if (!(r.ridership >= 0)) throw ConfigError(at + ".ridership", "must be >= 0");
    if (!(r.dwell_per_pax >= 0)) throw ConfigError(at + ".dwell_per_pax", "must be >= 0");
    if (!(r.dwell_intercept >= 0)) throw ConfigError(at + ".dwell_intercept", "must be >= 0");
    if (r.dedicated_fleet < 0) throw ConfigError(at + ".dedicated_fleet", "must be >= 0");
    if (!(r.moving.quantile(0.0) > 0)) throw ConfigError(at + ".runtime", "run times must be bounded away from 0");
  }
  if (s.shared_fleet_size < 0) throw ConfigError("shared_fleet_size", "must be >= 0");
  if (static_cast<int>(s.shared_origin.size()) != s.shared_fleet_size) {
    throw ConfigError("shared_origin", "needs one starting terminal per shared bus");
  }
  for (int o : s.shared_origin)
    if (o < 0 || o >= static_cast<int>(s.routes.size())) throw ConfigError("shared_origin", "unknown terminal");
  const std::size_t n = s.routes.size();
  if (s.within_hub_travel.size() != n) throw ConfigError("within_hub_travel", "must be a routes x routes matrix");
  for (std::size_t a = 0; a < n; ++a) {
    if (s.within_hub_travel[a].size() != n) throw ConfigError("within_hub_travel", "must be a routes x routes matrix");
    for (std::size_t b = 0; b < n; ++b) {
      const double v = s.within_hub_travel[a][b];
      if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("within_hub_travel", "entries must be finite and >= 0");
      if (a == b && v != 0) throw ConfigError("within_hub_travel", "diagonal must be zero");
    }
  }
  if (!(s.time_step > 0)) throw ConfigError("time_step", "must be > 0");
  if (!(s.horizon > 0)) throw ConfigError("horizon", "must be > 0");
  if (!(s.warmup >= 0) || !(s.warmup < s.horizon)) throw ConfigError("warmup", "must satisfy 0 <= warmup < horizon");
  if (s.horizon_depth < 1) throw ConfigError("horizon_depth", "must be >= 1");
  if (!(s.penalty > 0)) throw ConfigError("penalty", "must be > 0");
  if (s.strategy.kind == Strategy::Kind::threshold && !(s.strategy.min_delay >= 0)) {
    throw ConfigError("strategy.threshold", "minimum delay must be >= 0");
  }
}

struct DepartureRecord {
  int route = 0;
  std::string route_id;
  int trip_index = 0;  ///< 1-based within the route
  Seconds scheduled = 0;
  Seconds actual = 0;
  Seconds delay = 0;
  int bus_id = 0;
  BusKind bus_kind = BusKind::dedicated;
  Seconds headway = 0;  ///< realized; the scheduled headway for a route's first trip
  Seconds runtime = 0;  ///< hub departure to hub arrival
  Seconds idle = 0;     ///< wait at the hub before this departure

  bool operator==(const DepartureRecord&) const = default;
};

/// Trip-level dwell: boarding time per passenger x passengers accumulated over the headway, plus intercept.
inline Seconds dwell_time(const Route& route, Seconds realized_headway) {
  return route.dwell_per_pax * realized_headway * route.ridership + route.dwell_intercept;
}

/// Moving time drawn from the route model plus dwell for the realized headway.
inline Seconds generate_trip_time(const Route& route, Seconds realized_headway, Engine& rng) {
  return route.moving.sample(uniform_open01(rng)) + dwell_time(route, realized_headway);
}

/// Without passing, a bus cannot reach the hub before the bus dispatched ahead of it on the same route.
inline Seconds apply_passing_rule(bool allow_passing, std::optional<Seconds> predecessor_arrival, Seconds candidate) {
  if (allow_passing || !predecessor_arrival) return candidate;
  return std::max(candidate, *predecessor_arrival + 1.0);
}

struct RouteMetrics {
  std::string route_id;
  Seconds mean_delay = 0;
  double headway_cov = 0;
  double wait_ratio = 0;
  Seconds mean_wait = 0;
  Seconds mean_idle = 0;
  int trips_completed = 0;

  bool operator==(const RouteMetrics&) const = default;
};

struct MetricsReport {
  std::vector<RouteMetrics> routes;
  RouteMetrics system;

  bool operator==(const MetricsReport&) const = default;
};

/// Reliability metrics over departures scheduled at or after the warmup.
///
/// Passenger wait assumes uniform arrivals, so a realized headway h contributes h^2/2
/// passenger-seconds per unit demand: wait = sum(h^2) / (2 sum(h)). System values
/// weight route waits by ridership (by headway count when no route has demand).
inline MetricsReport compute_metrics(std::span<const DepartureRecord> records, const Scenario& scenario) {
  MetricsReport report;
  const std::size_t n = scenario.routes.size();
  std::vector<std::vector<const DepartureRecord*>> by_route(n);
  for (const auto& rec : records) {
    if (rec.route < 0 || static_cast<std::size_t>(rec.route) >= n) throw MetricError("record with unknown route");
    if (rec.scheduled >= scenario.warmup) by_route[rec.route].push_back(&rec);
  }

  double delay_sum = 0, idle_sum = 0;
  long count = 0;
  double cov_weighted = 0, wait_weighted = 0, ratio_weighted = 0, cov_weight = 0, wait_weight = 0;
  double ridership_total = 0;
  for (const auto& r : scenario.routes) ridership_total += r.ridership;

  for (std::size_t r = 0; r < n; ++r) {
    const auto& route = scenario.routes[r];
    const auto& recs = by_route[r];
    if (recs.size() < 2) {
      throw MetricError("route '" + route.id + "': need at least 2 post-warmup departures, got " +
                        std::to_string(recs.size()));
    }
    RouteMetrics m;
    m.route_id = route.id;
    double dsum = 0, isum = 0;
    std::vector<double> headways;
    for (const auto* rec : recs) {
      dsum += rec->delay;
      isum += rec->idle;
      if (rec->trip_index >= 2) headways.push_back(rec->headway);
    }
    if (headways.empty()) throw MetricError("route '" + route.id + "': no realized headways after warmup");
    double hsum = 0, hsq = 0;
    for (double h : headways) hsum += h, hsq += h * h;
    const double hmean = hsum / headways.size();
    double var = 0;
    for (double h : headways) var += (h - hmean) * (h - hmean);
    var /= headways.size();

    m.trips_completed = static_cast<int>(recs.size());
    m.mean_delay = dsum / recs.size();
    m.mean_idle = isum / recs.size();
    m.headway_cov = std::sqrt(var) / hmean;
    m.mean_wait = hsq / (2.0 * hsum);
    m.wait_ratio = m.mean_wait / (scheduled_headway(route.plan) / 2.0);
    report.routes.push_back(m);

    delay_sum += dsum;
    idle_sum += isum;
    count += static_cast<long>(recs.size());
    cov_weighted += m.headway_cov * headways.size();
    cov_weight += headways.size();
    const double w = ridership_total > 0 ? route.ridership : static_cast<double>(headways.size());
    wait_weighted += m.mean_wait * w;
    ratio_weighted += m.wait_ratio * w;
    wait_weight += w;
  }

  report.system.route_id = "system";
  report.system.trips_completed = static_cast<int>(count);
  report.system.mean_delay = delay_sum / count;
  report.system.mean_idle = idle_sum / count;
  report.system.headway_cov = cov_weighted / cov_weight;
  report.system.mean_wait = wait_weighted / wait_weight;
  report.system.wait_ratio = ratio_weighted / wait_weight;
  return report;
}

struct FleetCounts {
  int at_hub = 0;
  int en_route = 0;
  int total = 0;
};

/// One replication. Strictly sequential; every random draw comes from per-route streams
/// keyed by route id, two draws per departure, so trip i of a route always sees the same
/// variates regardless of what other routes do.
class Simulator {
 public:
  explicit Simulator(Scenario scenario) : sc_(std::move(scenario)) {
    validate(sc_);
    const std::size_t n = sc_.routes.size();
    routes_.resize(n);
    int trip_offset = 0;
    for (std::size_t r = 0; r < n; ++r) {
      auto& st = routes_[r];
      ServicePlan plan = sc_.routes[r].plan;
      if (plan.mode == PlanMode::even_headway) plan.period_end = std::min(plan.period_end, sc_.horizon);
      for (double d : scheduled_departures(plan))
        if (d < sc_.horizon) st.trips.push_back(d);
      st.rng = make_stream(sc_.seed, sc_.routes[r].id);
      st.trip_id_offset = trip_offset;
      trip_offset += static_cast<int>(st.trips.size());
      for (int k = 0; k < sc_.routes[r].dedicated_fleet; ++k) {
        st.dedicated.push_back(static_cast<int>(buses_.size()));
        buses_.push_back({static_cast<int>(buses_.size()), BusKind::dedicated, static_cast<int>(r), static_cast<int>(r)});
      }
    }
    for (int origin : sc_.shared_origin) {
      buses_.push_back({static_cast<int>(buses_.size()), BusKind::shared, -1, origin});
    }
    end_time_ = sc_.horizon + kDrainLimit;
  }

  const Scenario& scenario() const noexcept { return sc_; }
  const std::vector<DepartureRecord>& records() const noexcept { return records_; }
  Seconds now() const noexcept { return now_; }
  bool finished() const noexcept { return finished_; }

  FleetCounts fleet_counts() const {
    FleetCounts c;
    for (const auto& b : buses_) {
      if (b.busy && now_ >= b.departs_at) ++c.en_route;
      else ++c.at_hub;
    }
    c.total = static_cast<int>(buses_.size());
    return c;
  }

  /// Advances one time step. Returns false once the horizon has passed and every trip
  /// scheduled before it has departed.
  bool step() {
    if (finished_) return false;
    now_ = static_cast<double>(step_index_++) * sc_.time_step;
    release_arrivals();
    dispatch_due_trips();
    const bool pending = std::any_of(routes_.begin(), routes_.end(), [](const RouteState& st) { return st.next < st.trips.size(); });
    if ((now_ + sc_.time_step >= sc_.horizon && !pending) || now_ >= end_time_) finished_ = true;
    return !finished_;
  }

  void run() {
    while (step()) {
    }
  }

 private:
  static constexpr Seconds kDrainLimit = 86400;

  struct Bus {
    int id = 0;
    BusKind kind = BusKind::dedicated;
    int route = -1;
    int terminal = 0;
    Seconds available_since = 0;
    bool busy = false;
    Seconds departs_at = 0;
    Seconds arrival = 0;
  };

  struct RouteState {
    std::vector<Seconds> trips;
    std::size_t next = 0;
    std::optional<Seconds> last_actual;
    std::optional<Seconds> last_arrival;
    Engine rng;
    std::vector<int> dedicated;
    int trip_id_offset = 0;
  };

  void release_arrivals() {
    for (auto& b : buses_) {
      if (b.busy && b.arrival <= now_) {
        b.busy = false;
        b.available_since = b.arrival;
      }
    }
  }

  Seconds availability(const Bus& b) const { return b.busy ? b.arrival : b.available_since; }

  std::optional<int> designated_bus(std::size_t r, std::size_t trip) const {
    const auto& ded = routes_[r].dedicated;
    if (ded.empty()) return std::nullopt;
    return ded[trip % ded.size()];
  }

  dispatch::DedicatedDecision dedicated_decision(std::size_t r) const {
    const auto& st = routes_[r];
    std::vector<dispatch::DedicatedCandidate> cands;
    for (int id : st.dedicated) cands.push_back({id, availability(buses_[id])});
    return dispatch::dispatch_dedicated(st.trips[st.next], cands, sc_.dedicated_mode, designated_bus(r, st.next));
  }

  void dispatch_due_trips() {
    std::vector<std::size_t> uncovered;
    std::vector<dispatch::DedicatedDecision> decisions;
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const auto& st = routes_[r];
      if (st.next >= st.trips.size() || st.trips[st.next] > now_) continue;
      if (st.last_actual && !(now_ > *st.last_actual)) continue;
      const auto d = dedicated_decision(r);
      if (d.bus_id && !buses_[*d.bus_id].busy) {
        commit(buses_[*d.bus_id], r);
      } else {
        uncovered.push_back(r);
        decisions.push_back(d);
      }
    }
    if (uncovered.empty()) return;
    if (std::none_of(buses_.begin(), buses_.end(), [](const Bus& b) { return b.kind == BusKind::shared && !b.busy; })) return;

    switch (sc_.strategy.kind) {
      case Strategy::Kind::optimal: dispatch_optimal(uncovered); break;
      case Strategy::Kind::fcfs: {
        std::vector<std::size_t> order = uncovered;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return routes_[a].trips[routes_[a].next] < routes_[b].trips[routes_[b].next];
        });
        for (std::size_t r : order)
          if (Bus* b = nearest_idle_shared(r)) commit(*b, r);
        break;
      }
      case Strategy::Kind::threshold: {
        std::vector<std::pair<Seconds, std::size_t>> late;
        for (std::size_t i = 0; i < uncovered.size(); ++i) {
          const std::size_t r = uncovered[i];
          const Seconds sched = routes_[r].trips[routes_[r].next];
          const Seconds expected = decisions[i].bus_id ? std::max(now_, decisions[i].departure) - sched
                                                       : std::numeric_limits<double>::infinity();
          if (expected > sc_.strategy.min_delay) late.emplace_back(expected, r);
        }
        std::stable_sort(late.begin(), late.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [expected, r] : late)
          if (Bus* b = nearest_idle_shared(r)) commit(*b, r);
        break;
      }
    }
  }

  Bus* nearest_idle_shared(std::size_t r) {
    Bus* best = nullptr;
    for (auto& b : buses_) {
      if (b.kind != BusKind::shared || b.busy) continue;
      if (!best) {
        best = &b;
        continue;
      }
      const double sb = sc_.within_hub_travel[b.terminal][r], sbest = sc_.within_hub_travel[best->terminal][r];
      if (sb < sbest || (sb == sbest && b.available_since < best->available_since)) best = &b;
    }
    return best;
  }

  void dispatch_optimal(const std::vector<std::size_t>& uncovered) {
    dispatch::HubSnapshot snap;
    snap.decision_time = now_;
    snap.setup_time = sc_.within_hub_travel;
    for (const auto& b : buses_) snap.buses.push_back({b.id, b.kind, b.route, availability(b), b.terminal});
    snap.upcoming.resize(routes_.size());
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const auto& st = routes_[r];
      for (std::size_t i = st.next; i < st.trips.size() && i < st.next + static_cast<std::size_t>(sc_.horizon_depth); ++i) {
        snap.upcoming[r].push_back({st.trip_id_offset + static_cast<int>(i), static_cast<int>(r), st.trips[i], sc_.penalty});
      }
    }
    auto inst = dispatch::build_instance(snap, sc_.horizon_depth);
    if (sc_.dedicated_mode == DedicatedMode::scheduled) {
      std::erase_if(inst.feasible, [&](const dispatch::Pair& p) {
        const auto& bus = inst.buses[p.bus];
        if (bus.kind != BusKind::dedicated) return false;
        const auto& trip = inst.trips[p.trip];
        const auto r = static_cast<std::size_t>(trip.route);
        const auto idx = static_cast<std::size_t>(trip.id - routes_[r].trip_id_offset);
        return designated_bus(r, idx) != bus.id;
      });
    }
    const auto trip_bus = dispatch::solve_trip_buses(inst);
    for (std::size_t r : uncovered) {
      const int trip_id = routes_[r].trip_id_offset + static_cast<int>(routes_[r].next);
      for (std::size_t j = 0; j < inst.trips.size(); ++j) {
        if (inst.trips[j].id != trip_id || trip_bus[j] < 0) continue;
        Bus& b = buses_[inst.buses[trip_bus[j]].id];
        if (b.kind == BusKind::shared && !b.busy) commit(b, r);
      }
    }
  }

  void commit(Bus& bus, std::size_t r) {
    auto& st = routes_[r];
    const Route& route = sc_.routes[r];
    const Seconds sched = st.trips[st.next];
    const Seconds setup = sc_.within_hub_travel[bus.terminal][r];
    const Seconds error = sc_.dispatch_error.sample(uniform_open01(st.rng));
    const Seconds actual = std::max(sched, now_) + setup + error;
    const Seconds headway = st.last_actual ? actual - *st.last_actual : scheduled_headway(route.plan);
    const Seconds trip_time = generate_trip_time(route, headway, st.rng);
    const Seconds arrival = apply_passing_rule(sc_.allow_passing, st.last_arrival, actual + trip_time);

    DepartureRecord rec;
    rec.route = static_cast<int>(r);
    rec.route_id = route.id;
    rec.trip_index = static_cast<int>(st.next) + 1;
    rec.scheduled = sched;
    rec.actual = actual;
    rec.delay = actual - sched;
    rec.bus_id = bus.id;
    rec.bus_kind = bus.kind;
    rec.headway = headway;
    rec.runtime = arrival - actual;
    rec.idle = std::max(0.0, now_ - bus.available_since) + error;
    records_.push_back(std::move(rec));

    bus.busy = true;
    bus.departs_at = actual;
    bus.arrival = arrival;
    bus.terminal = static_cast<int>(r);
    st.last_actual = actual;
    st.last_arrival = arrival;
    ++st.next;
  }

  Scenario sc_;
  std::vector<Bus> buses_;
  std::vector<RouteState> routes_;
  std::vector<DepartureRecord> records_;
  long step_index_ = 0;
  Seconds now_ = 0;
  Seconds end_time_ = 0;
  bool finished_ = false;
};

struct SimulationResult {
  MetricsReport metrics;
  std::vector<DepartureRecord> records;
};

inline SimulationResult run_scenario(const Scenario& scenario) {
  Simulator sim(scenario);
  sim.run();
  SimulationResult out;
  out.records = sim.records();
  out.metrics = compute_metrics(out.records, scenario);
  return out;
}

}  // namespace interline::sim

#pragma once

// Steady-state multi-server queue approximations for the bus-pooling analogy:
// buses are servers, scheduled trips are customers, queue wait is departure delay.

#include <cmath>
#include <string>
#include <vector>

#include "interline/common.hpp"

namespace interline::queueing {

struct QueueSpec {
  int servers = 1;
  double arrival_rate = 0.0;  ///< customers per hour
  double service_rate = 1.0;  ///< customers per hour per server
  double cv_arrival = 1.0;
  double cv_service = 1.0;
};

struct WaitResult {
  Seconds wait_mmc = 0.0;
  Seconds wait_ggc = 0.0;
  double utilization = 0.0;
  double expected_busy_servers = 0.0;
  double prob_all_busy = 0.0;
};

/// Probability that an arrival has to wait in an M/M/c queue with offered load `offered_load` (= lambda / mu).
/// Uses the Erlang-B recursion so large server counts do not overflow.
inline double erlang_c(int servers, double offered_load) {
  if (servers < 1) throw DomainError("erlang_c: servers must be >= 1, got " + std::to_string(servers));
  if (!(offered_load >= 0.0)) throw DomainError("erlang_c: offered load must be >= 0");
  if (offered_load >= servers) {
    throw DomainError("erlang_c: unstable system, offered load " + std::to_string(offered_load) +
                      " >= servers " + std::to_string(servers));
  }
  double b = 1.0;
  for (int n = 1; n <= servers; ++n) b = offered_load * b / (n + offered_load * b);
  const double c = static_cast<double>(servers);
  return c * b / (c - offered_load * (1.0 - b));
}

inline void validate(const QueueSpec& spec) {
  if (spec.servers < 1) throw DomainError("queue: servers must be >= 1");
  if (!(spec.arrival_rate >= 0.0)) throw DomainError("queue: arrival_rate must be >= 0");
  if (!(spec.service_rate > 0.0)) throw DomainError("queue: service_rate must be > 0");
  if (!(spec.cv_arrival >= 0.0) || !(spec.cv_service >= 0.0)) {
    throw DomainError("queue: coefficients of variation must be >= 0");
  }
  if (spec.arrival_rate >= spec.servers * spec.service_rate) {
    throw DomainError("queue: unstable, arrival_rate " + std::to_string(spec.arrival_rate) +
                      "/h >= servers * service_rate " + std::to_string(spec.servers * spec.service_rate) + "/h");
  }
}

/// Mean wait in queue of M/M/c, in seconds.
inline Seconds wait_mmc(const QueueSpec& spec) {
  validate(spec);
  const double capacity = spec.servers * spec.service_rate;
  const double pw = erlang_c(spec.servers, spec.arrival_rate / spec.service_rate);
  return pw / (capacity - spec.arrival_rate) * kSecondsPerHour;
}

/// G/G/c mean wait: the M/M/c wait scaled by (Ca^2 + Cs^2) / 2.
inline WaitResult wait_ggc(const QueueSpec& spec) {
  validate(spec);
  WaitResult r;
  const double load = spec.arrival_rate / spec.service_rate;
  r.prob_all_busy = erlang_c(spec.servers, load);
  r.wait_mmc = wait_mmc(spec);
  r.wait_ggc = r.wait_mmc * (spec.cv_arrival * spec.cv_arrival + spec.cv_service * spec.cv_service) / 2.0;
  r.utilization = load / spec.servers;
  r.expected_busy_servers = load;
  return r;
}

struct PoolingComparison {
  Seconds dedicated_wait = 0.0;
  Seconds pooled_wait = 0.0;
};

/// m identical routes with c buses each, run independently (D/G/c) versus as one pool (D/G/mc).
inline PoolingComparison pooling_comparison(int route_count, int per_route_servers, double per_route_rate,
                                            double service_rate, double cv_service) {
  if (route_count < 1) throw DomainError("pooling_comparison: route_count must be >= 1");
  const QueueSpec dedicated{per_route_servers, per_route_rate, service_rate, 0.0, cv_service};
  const QueueSpec pooled{route_count * per_route_servers, route_count * per_route_rate, service_rate, 0.0,
                         cv_service};
  return {wait_ggc(dedicated).wait_ggc, wait_ggc(pooled).wait_ggc};
}

struct SweepRow {
  int routes = 1;
  double utilization = 0.0;
  Seconds wait = 0.0;
};

/// Pooled wait for m = 1..max_routes routes sharing c buses each, over a utilization grid.
/// m = 1 is the dedicated case.
inline std::vector<SweepRow> pooling_sweep(int max_routes, int per_route_servers, double service_rate,
                                           double cv_service, const std::vector<double>& utilizations) {
  std::vector<SweepRow> rows;
  for (int m = 1; m <= max_routes; ++m) {
    for (double u : utilizations) {
      const int servers = m * per_route_servers;
      const QueueSpec spec{servers, u * servers * service_rate, service_rate, 0.0, cv_service};
      rows.push_back({m, u, wait_ggc(spec).wait_ggc});
    }
  }
  return rows;
}

}  // namespace interline::queueing

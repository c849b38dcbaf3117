#pragma once

// JSON encoding of library types plus a strict object reader that rejects unknown
// fields and reports errors with the path of the offending field.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "interline/allocation.hpp"
#include "interline/common.hpp"
#include "interline/dispatch.hpp"
#include "interline/queueing.hpp"
#include "interline/runtime_model.hpp"
#include "interline/sim.hpp"

namespace interline::io {

using json = nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

inline std::int64_t as_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
  }
  throw ConfigError(path, "expected an integer");
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

/// Reads an object field by field; finish() rejects any field nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  std::string path(const std::string& key) const { return join_path(path_, key); }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) { return as_number(at(key), path(key)); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  std::optional<double> maybe_number(const std::string& key) {
    return has(key) ? std::optional<double>(number(key)) : std::nullopt;
  }
  std::int64_t integer(const std::string& key) { return as_integer(at(key), path(key)); }
  std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }
  bool boolean(const std::string& key, bool fallback) { return has(key) ? as_bool(at(key), path(key)) : fallback; }
  std::string string(const std::string& key) { return as_string(at(key), path(key)); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// ---- run-time models -------------------------------------------------------

inline json to_json(const RunTimeModel& m) {
  json j;
  j["kind"] = std::string(to_string(m.kind()));
  switch (m.kind()) {
    case DistributionKind::constant: j["value"] = m.mean(); break;
    case DistributionKind::normal:
      j["mean"] = m.mean();
      j["sd"] = m.sd();
      break;
    case DistributionKind::lognormal:
      j["mean"] = m.mean();
      j["cov"] = m.cov();
      break;
    case DistributionKind::empirical: j["samples"] = std::vector<double>(m.samples().begin(), m.samples().end()); break;
  }
  j["floor"] = m.floor();
  if (std::isfinite(m.ceiling())) j["ceiling"] = m.ceiling();
  return j;
}

inline RunTimeModel model_from_json(const json& j, const std::string& path) {
  ObjectReader rd(j, path);
  const std::string kind = rd.string("kind");
  RunTimeModel m;
  try {
    if (kind == "constant") {
      m = RunTimeModel::constant(rd.number("value"));
    } else if (kind == "normal" || kind == "lognormal") {
      const double mean = rd.number("mean");
      const bool has_sd = rd.has("sd"), has_cov = rd.has("cov");
      if (has_sd == has_cov) throw ConfigError(path, "give exactly one of 'sd' or 'cov'");
      if (kind == "normal") {
        m = RunTimeModel::normal(mean, has_sd ? rd.number("sd") : rd.number("cov") * mean);
      } else {
        m = RunTimeModel::lognormal(mean, has_cov ? rd.number("cov") : rd.number("sd") / mean);
      }
    } else if (kind == "empirical") {
      const json& s = rd.at("samples");
      if (!s.is_array()) throw ConfigError(rd.path("samples"), "expected an array");
      std::vector<double> samples;
      for (std::size_t i = 0; i < s.size(); ++i) samples.push_back(as_number(s[i], index_path(rd.path("samples"), i)));
      m = RunTimeModel::empirical(std::move(samples));
    } else {
      throw ConfigError(rd.path("kind"), "unknown distribution kind '" + kind + "'");
    }
    const double floor = rd.number("floor", m.floor());
    const double ceiling = rd.number("ceiling", std::numeric_limits<double>::infinity());
    m = m.with_bounds(floor, ceiling);
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  rd.finish();
  return m;
}

// ---- queueing --------------------------------------------------------------

inline json to_json(const queueing::WaitResult& r) {
  return json{{"wait_mmc_s", r.wait_mmc},
              {"wait_ggc_s", r.wait_ggc},
              {"utilization", r.utilization},
              {"expected_busy_servers", r.expected_busy_servers},
              {"prob_all_busy", r.prob_all_busy}};
}

// ---- allocation ------------------------------------------------------------

inline json to_json(const AllocationResult& a) {
  json dedicated = json::object(), base = json::object();
  for (std::size_t r = 0; r < a.route_ids.size(); ++r) {
    dedicated[a.route_ids[r]] = a.dedicated[r];
    base[a.route_ids[r]] = a.base_fleet[r];
  }
  json trace = json::array();
  for (const auto& s : a.trace) {
    trace.push_back({{"step", s.step}, {"route", s.route_id}, {"effective_percentile", s.effective_percentile}});
  }
  return json{{"base_fleet", base},
              {"dedicated", dedicated},
              {"shared_fleet_size", a.shared_fleet_size},
              {"total_fleet", a.total_fleet()},
              {"trace", trace}};
}

// ---- dispatch ----------------------------------------------------------------

inline dispatch::DispatchInstance instance_from_json(const json& j) {
  using namespace dispatch;
  ObjectReader rd(j, "");
  DispatchInstance inst;
  inst.decision_time = rd.number("decision_time", 0.0);

  const json& setup = rd.at("setup_time");
  if (!setup.is_array()) throw ConfigError("setup_time", "expected a routes x routes matrix");
  for (std::size_t a = 0; a < setup.size(); ++a) {
    if (!setup[a].is_array()) throw ConfigError(index_path("setup_time", a), "expected an array");
    std::vector<Seconds> row;
    for (std::size_t b = 0; b < setup[a].size(); ++b) {
      row.push_back(as_number(setup[a][b], index_path(index_path("setup_time", a), b)));
    }
    inst.setup_time.push_back(std::move(row));
  }

  const json& buses = rd.at("buses");
  if (!buses.is_array()) throw ConfigError("buses", "expected an array");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    ObjectReader b(buses[i], index_path("buses", i));
    BusState s;
    s.id = static_cast<int>(b.integer("id"));
    const std::string kind = b.string("kind");
    if (kind == "shared") {
      s.kind = BusKind::shared;
      s.route = -1;
      s.terminal = static_cast<int>(b.integer("terminal"));
    } else if (kind == "dedicated") {
      s.kind = BusKind::dedicated;
      s.route = static_cast<int>(b.integer("route"));
      s.terminal = static_cast<int>(b.integer("terminal", s.route));
    } else {
      throw ConfigError(b.path("kind"), "expected 'shared' or 'dedicated'");
    }
    s.available_at = b.number("available_at");
    b.finish();
    inst.buses.push_back(s);
  }

  const json& trips = rd.at("trips");
  if (!trips.is_array()) throw ConfigError("trips", "expected an array");
  for (std::size_t i = 0; i < trips.size(); ++i) {
    ObjectReader t(trips[i], index_path("trips", i));
    TripRequest r;
    r.id = static_cast<int>(t.integer("id"));
    r.route = static_cast<int>(t.integer("route"));
    r.scheduled_departure = t.number("scheduled_departure");
    r.penalty = t.number("penalty", kDefaultPenalty);
    t.finish();
    inst.trips.push_back(r);
  }

  if (rd.has("feasible")) {
    const json& f = rd.at("feasible");
    if (!f.is_array()) throw ConfigError("feasible", "expected an array of [bus_id, trip_id]");
    auto find = [](const auto& list, int id) -> std::optional<std::size_t> {
      for (std::size_t k = 0; k < list.size(); ++k)
        if (list[k].id == id) return k;
      return std::nullopt;
    };
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::string p = index_path("feasible", k);
      if (!f[k].is_array() || f[k].size() != 2) throw ConfigError(p, "expected [bus_id, trip_id]");
      const auto bi = find(inst.buses, static_cast<int>(as_integer(f[k][0], p)));
      const auto ti = find(inst.trips, static_cast<int>(as_integer(f[k][1], p)));
      if (!bi || !ti) throw ConfigError(p, "unknown bus or trip id");
      inst.feasible.push_back({*bi, *ti});
    }
    std::sort(inst.feasible.begin(), inst.feasible.end());
    inst.feasible.erase(std::unique(inst.feasible.begin(), inst.feasible.end()), inst.feasible.end());
  } else {
    inst.feasible = rule_feasible_set(inst.buses, inst.trips);
  }
  rd.finish();
  try {
    validate(inst);
  } catch (const DomainError& e) {
    throw ConfigError("", e.what());
  }
  return inst;
}

inline json to_json(const dispatch::DispatchInstance& inst) {
  json buses = json::array(), trips = json::array(), feasible = json::array();
  for (const auto& b : inst.buses) {
    json jb{{"id", b.id}, {"available_at", b.available_at}, {"terminal", b.terminal}};
    jb["kind"] = b.kind == dispatch::BusKind::shared ? "shared" : "dedicated";
    if (b.kind == dispatch::BusKind::dedicated) jb["route"] = b.route;
    buses.push_back(jb);
  }
  for (const auto& t : inst.trips) {
    trips.push_back({{"id", t.id}, {"route", t.route}, {"scheduled_departure", t.scheduled_departure}, {"penalty", t.penalty}});
  }
  for (const auto& p : inst.feasible) feasible.push_back({inst.buses[p.bus].id, inst.trips[p.trip].id});
  return json{{"decision_time", inst.decision_time},
              {"setup_time", inst.setup_time},
              {"buses", buses},
              {"trips", trips},
              {"feasible", feasible}};
}

inline json to_json(const dispatch::AssignmentSolution& s) {
  json assignments = json::array();
  for (const auto& [bus, trip] : s.assignments) assignments.push_back({{"bus", bus}, {"trip", trip}});
  return json{{"assignments", assignments}, {"unassigned_trips", s.unassigned_trips}, {"objective", s.objective}};
}

// ---- simulation output -----------------------------------------------------

inline json to_json(const sim::RouteMetrics& m) {
  return json{{"route_id", m.route_id},         {"mean_delay_s", m.mean_delay}, {"headway_cov", m.headway_cov},
              {"wait_ratio", m.wait_ratio},     {"mean_wait_s", m.mean_wait},   {"mean_idle_s", m.mean_idle},
              {"trips_completed", m.trips_completed}};
}

inline json to_json(const sim::MetricsReport& r) {
  json routes = json::array();
  for (const auto& m : r.routes) routes.push_back(to_json(m));
  return json{{"system", to_json(r.system)}, {"routes", routes}};
}

inline const char* departures_csv_header() {
  return "route_id,trip_index,scheduled_s,actual_s,delay_s,bus_id,bus_kind,headway_s,runtime_s,idle_s\n";
}

template <class Out>
void write_departures_csv(Out& out, std::span<const sim::DepartureRecord> records) {
  out << departures_csv_header();
  for (const auto& r : records) {
    out << r.route_id << ',' << r.trip_index << ',' << format_fixed(r.scheduled) << ',' << format_fixed(r.actual) << ','
        << format_fixed(r.delay) << ',' << r.bus_id << ',' << (r.bus_kind == dispatch::BusKind::shared ? "shared" : "dedicated")
        << ',' << format_fixed(r.headway) << ',' << format_fixed(r.runtime) << ',' << format_fixed(r.idle) << '\n';
  }
}

}  // namespace interline::io

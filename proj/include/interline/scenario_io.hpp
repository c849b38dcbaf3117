#pragma once

// Scenario documents: strict parsing, default resolution (fleet sizing and the
// dedicated/shared split), canonical re-emission and a stable digest.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "interline/allocation.hpp"
#include "interline/json_io.hpp"
#include "interline/rng.hpp"
#include "interline/sim.hpp"

namespace interline::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr Seconds kDefaultMeasuredPeriod = 9000;  // 2.5 h peak after warmup

struct RouteConfig {
  std::string id;
  PlanMode mode = PlanMode::even_headway;
  Seconds headway = 0;
  std::vector<Seconds> departures;
  std::optional<std::pair<Seconds, Seconds>> period;
  RunTimeModel runtime;
  std::optional<int> fleet;
  double ridership_per_hour = 0;
  Seconds dwell_per_pax = 0;
  Seconds dwell_intercept = 0;

  bool operator==(const RouteConfig&) const = default;
};

inline RunTimeModel default_dispatch_error() { return RunTimeModel::lognormal(30.0, 1.0).with_bounds(0.0, 600.0); }

struct ScenarioConfig {
  std::vector<RouteConfig> routes;
  int shared_fleet_size = 0;
  bool shared_all = false;
  int fleet_reduction = 0;
  Seconds within_hub_uniform = 0;
  std::optional<std::vector<std::vector<Seconds>>> within_hub_matrix;
  bool allow_passing = true;
  std::optional<dispatch::DedicatedMode> dedicated_mode;
  RunTimeModel dispatch_error = default_dispatch_error();
  std::optional<Seconds> horizon;
  std::optional<Seconds> warmup;
  Seconds time_step = 1;
  std::uint64_t seed = 1;
  sim::Strategy strategy;
  int horizon_depth = dispatch::kDefaultHorizonDepth;
  Seconds penalty = dispatch::kDefaultPenalty;
  double design_percentile = 0.95;

  bool operator==(const ScenarioConfig&) const = default;
};

inline std::string_view to_string(dispatch::DedicatedMode m) {
  return m == dispatch::DedicatedMode::scheduled ? "scheduled" : "schedule_free";
}

inline dispatch::DedicatedMode mode_from_json(const json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "scheduled") return dispatch::DedicatedMode::scheduled;
  if (s == "schedule_free") return dispatch::DedicatedMode::schedule_free;
  throw ConfigError(path, "expected 'scheduled' or 'schedule_free'");
}

inline sim::Strategy strategy_from_json(const json& j, const std::string& path) {
  using K = sim::Strategy::Kind;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "optimal") return {K::optimal, 0};
    if (s == "fcfs") return {K::fcfs, 0};
    throw ConfigError(path, "expected 'optimal', 'fcfs' or {\"kind\": \"threshold\", \"min_delay\": s}");
  }
  ObjectReader rd(j, path);
  const std::string kind = rd.string("kind");
  sim::Strategy s;
  if (kind == "optimal") s = {K::optimal, 0};
  else if (kind == "fcfs") s = {K::fcfs, 0};
  else if (kind == "threshold") s = {K::threshold, rd.number("min_delay")};
  else throw ConfigError(rd.path("kind"), "unknown strategy '" + kind + "'");
  if (s.kind == K::threshold && !(s.min_delay >= 0)) throw ConfigError(rd.path("min_delay"), "must be >= 0");
  rd.finish();
  return s;
}

inline json to_json(const sim::Strategy& s) {
  switch (s.kind) {
    case sim::Strategy::Kind::optimal: return "optimal";
    case sim::Strategy::Kind::fcfs: return "fcfs";
    case sim::Strategy::Kind::threshold: return json{{"kind", "threshold"}, {"min_delay", s.min_delay}};
  }
  return "optimal";
}

inline std::vector<std::vector<Seconds>> matrix_from_json(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) throw ConfigError(path, "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
  std::vector<std::vector<Seconds>> m;
  for (std::size_t a = 0; a < n; ++a) {
    if (!j[a].is_array() || j[a].size() != n) throw ConfigError(index_path(path, a), "expected " + std::to_string(n) + " entries");
    std::vector<Seconds> row;
    for (std::size_t b = 0; b < n; ++b) row.push_back(as_number(j[a][b], index_path(index_path(path, a), b)));
    m.push_back(std::move(row));
  }
  return m;
}

inline RouteConfig route_from_json(const json& j, const std::string& path) {
  ObjectReader rd(j, path);
  RouteConfig r;
  r.id = rd.string("id");
  if (r.id.empty()) throw ConfigError(rd.path("id"), "must not be empty");
  const bool even = rd.has("headway"), timetable = rd.has("departures");
  if (even == timetable) throw ConfigError(path, "give exactly one of 'headway' or 'departures'");
  if (even) {
    r.mode = PlanMode::even_headway;
    r.headway = rd.number("headway");
    if (!(r.headway > 0)) throw ConfigError(rd.path("headway"), "must be > 0");
  } else {
    r.mode = PlanMode::explicit_timetable;
    const json& d = rd.at("departures");
    if (!d.is_array() || d.empty()) throw ConfigError(rd.path("departures"), "expected a non-empty array");
    for (std::size_t i = 0; i < d.size(); ++i) r.departures.push_back(as_number(d[i], index_path(rd.path("departures"), i)));
  }
  if (rd.has("period")) {
    const json& p = rd.at("period");
    if (!p.is_array() || p.size() != 2) throw ConfigError(rd.path("period"), "expected [start, end]");
    r.period = std::make_pair(as_number(p[0], rd.path("period")), as_number(p[1], rd.path("period")));
  }
  r.runtime = model_from_json(rd.at("runtime"), rd.path("runtime"));
  if (!(r.runtime.quantile(0.0) > 0)) throw ConfigError(rd.path("runtime"), "run times must be bounded away from 0");
  if (rd.has("fleet")) {
    const auto f = rd.integer("fleet");
    if (f < 0) throw ConfigError(rd.path("fleet"), "must be >= 0");
    r.fleet = static_cast<int>(f);
  }
  r.ridership_per_hour = rd.number("ridership_per_hour", 0.0);
  r.dwell_per_pax = rd.number("dwell_per_pax", 0.0);
  r.dwell_intercept = rd.number("dwell_intercept", 0.0);
  if (!(r.ridership_per_hour >= 0)) throw ConfigError(rd.path("ridership_per_hour"), "must be >= 0");
  if (!(r.dwell_per_pax >= 0)) throw ConfigError(rd.path("dwell_per_pax"), "must be >= 0");
  if (!(r.dwell_intercept >= 0)) throw ConfigError(rd.path("dwell_intercept"), "must be >= 0");
  rd.finish();
  return r;
}

inline void read_shared_size(ScenarioConfig& cfg, const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() != "all") throw ConfigError(path, "expected a count or \"all\"");
    cfg.shared_all = true;
    cfg.shared_fleet_size = 0;
    return;
  }
  const auto v = as_integer(j, path);
  if (v < 0) throw ConfigError(path, "must be >= 0");
  cfg.shared_all = false;
  cfg.shared_fleet_size = static_cast<int>(v);
}

inline ScenarioConfig config_from_json(const json& j, const std::string& path = "scenario") {
  ObjectReader rd(j, path);
  ScenarioConfig cfg;
  const json& routes = rd.at("routes");
  if (!routes.is_array()) throw ConfigError(rd.path("routes"), "expected an array");
  if (routes.empty()) throw ConfigError(rd.path("routes"), "at least one route is required");
  for (std::size_t i = 0; i < routes.size(); ++i) {
    auto r = route_from_json(routes[i], index_path(rd.path("routes"), i));
    for (const auto& other : cfg.routes)
      if (other.id == r.id) throw ConfigError(index_path(rd.path("routes"), i) + ".id", "duplicate route id '" + r.id + "'");
    cfg.routes.push_back(std::move(r));
  }
  if (rd.has("shared_fleet_size")) read_shared_size(cfg, rd.at("shared_fleet_size"), rd.path("shared_fleet_size"));
  cfg.fleet_reduction = static_cast<int>(rd.integer("fleet_reduction", 0));
  if (cfg.fleet_reduction < 0) throw ConfigError(rd.path("fleet_reduction"), "must be >= 0");
  if (rd.has("within_hub_travel")) {
    const json& w = rd.at("within_hub_travel");
    if (w.is_number()) {
      cfg.within_hub_uniform = as_number(w, rd.path("within_hub_travel"));
      if (!(cfg.within_hub_uniform >= 0)) throw ConfigError(rd.path("within_hub_travel"), "must be >= 0");
    } else {
      cfg.within_hub_matrix = matrix_from_json(w, cfg.routes.size(), rd.path("within_hub_travel"));
    }
  }
  cfg.allow_passing = rd.boolean("allow_passing", true);
  if (rd.has("dedicated_mode")) cfg.dedicated_mode = mode_from_json(rd.at("dedicated_mode"), rd.path("dedicated_mode"));
  if (rd.has("dispatch_error")) cfg.dispatch_error = model_from_json(rd.at("dispatch_error"), rd.path("dispatch_error"));
  cfg.horizon = rd.maybe_number("horizon");
  cfg.warmup = rd.maybe_number("warmup");
  cfg.time_step = rd.number("time_step", 1.0);
  if (rd.has("seed")) {
    const json& s = rd.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError(rd.path("seed"), "expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (rd.has("strategy")) cfg.strategy = strategy_from_json(rd.at("strategy"), rd.path("strategy"));
  cfg.horizon_depth = static_cast<int>(rd.integer("horizon_depth", dispatch::kDefaultHorizonDepth));
  cfg.penalty = rd.number("penalty", dispatch::kDefaultPenalty);
  cfg.design_percentile = rd.number("design_percentile", 0.95);
  if (!(cfg.design_percentile > 0 && cfg.design_percentile < 1)) {
    throw ConfigError(rd.path("design_percentile"), "must lie in (0, 1)");
  }
  rd.finish();
  return cfg;
}

inline json to_json(const RouteConfig& r) {
  json j{{"id", r.id}, {"runtime", to_json(r.runtime)}};
  if (r.mode == PlanMode::even_headway) j["headway"] = r.headway;
  else j["departures"] = r.departures;
  if (r.period) j["period"] = {r.period->first, r.period->second};
  if (r.fleet) j["fleet"] = *r.fleet;
  j["ridership_per_hour"] = r.ridership_per_hour;
  j["dwell_per_pax"] = r.dwell_per_pax;
  j["dwell_intercept"] = r.dwell_intercept;
  return j;
}

inline json to_json(const ScenarioConfig& c) {
  json routes = json::array();
  for (const auto& r : c.routes) routes.push_back(to_json(r));
  json j{{"routes", routes}};
  if (c.shared_all) j["shared_fleet_size"] = "all";
  else j["shared_fleet_size"] = c.shared_fleet_size;
  j["fleet_reduction"] = c.fleet_reduction;
  if (c.within_hub_matrix) j["within_hub_travel"] = *c.within_hub_matrix;
  else j["within_hub_travel"] = c.within_hub_uniform;
  j["allow_passing"] = c.allow_passing;
  if (c.dedicated_mode) j["dedicated_mode"] = std::string(to_string(*c.dedicated_mode));
  j["dispatch_error"] = to_json(c.dispatch_error);
  if (c.horizon) j["horizon"] = *c.horizon;
  if (c.warmup) j["warmup"] = *c.warmup;
  j["time_step"] = c.time_step;
  j["seed"] = c.seed;
  j["strategy"] = to_json(c.strategy);
  j["horizon_depth"] = c.horizon_depth;
  j["penalty"] = c.penalty;
  j["design_percentile"] = c.design_percentile;
  return j;
}

struct ResolvedScenario {
  ScenarioConfig config;  ///< every default filled in, fleet reduction folded into the fleets
  sim::Scenario scenario;
  AllocationResult allocation;
};

inline ServicePlan plan_of(const RouteConfig& r, Seconds start, Seconds end) {
  if (r.mode == PlanMode::even_headway) return ServicePlan::even(r.id, r.headway, start, end);
  return ServicePlan::timetable(r.id, r.departures, start, end);
}

inline std::vector<AllocationRoute> allocation_routes(const ScenarioConfig& cfg) {
  std::vector<AllocationRoute> out;
  for (const auto& r : cfg.routes) {
    const Seconds end = r.period ? r.period->second : std::numeric_limits<double>::max();
    const Seconds start = r.period ? r.period->first : 0.0;
    out.push_back({plan_of(r, start, end), r.runtime, r.fleet});
  }
  return out;
}

/// Fills defaults and converts a configuration into a runnable scenario.
inline ResolvedScenario resolve(ScenarioConfig cfg) {
  if (cfg.routes.empty()) throw ConfigError("scenario.routes", "at least one route is required");
  auto rethrow = [](const std::string& path, auto&& fn) {
    try {
      return fn();
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
  };

  std::vector<int> base = rethrow("scenario.routes", [&] {
    std::vector<int> b;
    for (const auto& r : allocation_routes(cfg)) b.push_back(base_fleet_size(r, cfg.design_percentile));
    return b;
  });
  for (std::size_t i = 0; i < cfg.routes.size(); ++i) cfg.routes[i].fleet = base[i];

  if (cfg.fleet_reduction > 0) {
    const auto reduced = rethrow("scenario.fleet_reduction", [&] { return allocate(allocation_routes(cfg), cfg.fleet_reduction); });
    for (std::size_t i = 0; i < cfg.routes.size(); ++i) cfg.routes[i].fleet = reduced.dedicated[i];
    cfg.fleet_reduction = 0;
  }

  int total = 0, donatable = 0;
  for (const auto& r : cfg.routes) total += *r.fleet, donatable += std::max(0, *r.fleet - 1);
  const int shared = cfg.shared_all ? total : cfg.shared_fleet_size;
  if (shared > total) {
    throw ConfigError("scenario.shared_fleet_size", "shared fleet " + std::to_string(shared) +
                                                        " exceeds the total fleet of " + std::to_string(total) + " buses");
  }
  cfg.shared_all = false;
  cfg.shared_fleet_size = shared;

  // Keep one dedicated bus per route while possible; beyond that routes may be emptied.
  AllocationResult alloc = rethrow("scenario.shared_fleet_size", [&] { return allocate(allocation_routes(cfg), std::min(shared, donatable)); });
  if (shared > donatable) {
    auto rest_routes = allocation_routes(cfg);
    for (std::size_t i = 0; i < rest_routes.size(); ++i) rest_routes[i].base_fleet = alloc.dedicated[i];
    const auto rest = rethrow("scenario.shared_fleet_size", [&] {
      return allocate(rest_routes, shared - donatable, AllocationOptions{cfg.design_percentile, 0});
    });
    for (auto step : rest.trace) {
      step.step += alloc.shared_fleet_size;
      alloc.trace.push_back(step);
    }
    alloc.dedicated = rest.dedicated;
    alloc.shared_fleet_size += rest.shared_fleet_size;
  }

  if (!cfg.warmup) {
    Seconds w = 0;
    for (const auto& r : cfg.routes) {
      const Seconds h = r.mode == PlanMode::even_headway ? r.headway : scheduled_headway(plan_of(r, 0, 1e18));
      w = std::max(w, *r.fleet * h);
    }
    cfg.warmup = w;
  }
  if (!cfg.horizon) cfg.horizon = *cfg.warmup + kDefaultMeasuredPeriod;
  for (auto& r : cfg.routes)
    if (!r.period) r.period = std::make_pair(0.0, *cfg.horizon);
  if (!cfg.within_hub_matrix) cfg.within_hub_matrix = dispatch::uniform_setup_matrix(cfg.routes.size(), cfg.within_hub_uniform);
  cfg.within_hub_uniform = 0;
  if (!cfg.dedicated_mode) {
    cfg.dedicated_mode = shared == 0 ? dispatch::DedicatedMode::scheduled : dispatch::DedicatedMode::schedule_free;
  }

  sim::Scenario s;
  for (std::size_t i = 0; i < cfg.routes.size(); ++i) {
    const auto& r = cfg.routes[i];
    sim::Route route;
    route.id = r.id;
    route.plan = plan_of(r, r.period->first, r.period->second);
    route.moving = r.runtime;
    route.ridership = r.ridership_per_hour / kSecondsPerHour;
    route.dwell_per_pax = r.dwell_per_pax;
    route.dwell_intercept = r.dwell_intercept;
    route.dedicated_fleet = alloc.dedicated[i];
    s.routes.push_back(std::move(route));
  }
  s.shared_fleet_size = alloc.shared_fleet_size;
  for (const auto& step : alloc.trace) s.shared_origin.push_back(step.route);
  s.within_hub_travel = *cfg.within_hub_matrix;
  s.allow_passing = cfg.allow_passing;
  s.dedicated_mode = *cfg.dedicated_mode;
  s.dispatch_error = cfg.dispatch_error;
  s.horizon = *cfg.horizon;
  s.warmup = *cfg.warmup;
  s.time_step = cfg.time_step;
  s.seed = cfg.seed;
  s.strategy = cfg.strategy;
  s.horizon_depth = cfg.horizon_depth;
  s.penalty = cfg.penalty;
  try {
    sim::validate(s);
  } catch (const ConfigError& e) {
    throw ConfigError("scenario." + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
  return {std::move(cfg), std::move(s), std::move(alloc)};
}

inline json emit_scenario(const ResolvedScenario& r) {
  return json{{"schema_version", kSchemaVersion}, {"scenario", to_json(r.config)}};
}

/// Hex FNV-1a digest of the canonical resolved document (object keys are sorted).
inline std::string scenario_hash(const ResolvedScenario& r) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(emit_scenario(r).dump())));
  return buf;
}

// ---- scenario files and factor grids ------------------------------------------

inline const std::vector<std::string>& factor_names() {
  static const std::vector<std::string> names{"allow_passing",     "dedicated_mode",        "fleet_reduction",
                                              "frequency_multiplier", "route_multiplier",   "runtime_cov_multiplier",
                                              "shared_fleet_size", "strategy",              "within_hub_travel"};
  return names;
}

struct FactorSetting {
  std::string name;
  json value;
  bool operator==(const FactorSetting&) const = default;
};

using GridPoint = std::vector<FactorSetting>;

struct ScenarioFile {
  int schema_version = kSchemaVersion;
  ScenarioConfig base;
  std::vector<GridPoint> grid;  ///< empty: a single run of the base scenario
};

/// Applies one factor setting to a configuration.
inline ScenarioConfig apply_factor(ScenarioConfig cfg, const FactorSetting& f, const std::string& path = "sweep") {
  const std::string at = join_path(path, f.name);
  if (f.name == "shared_fleet_size") {
    read_shared_size(cfg, f.value, at);
  } else if (f.name == "fleet_reduction") {
    const auto v = as_integer(f.value, at);
    if (v < 0) throw ConfigError(at, "must be >= 0");
    cfg.fleet_reduction = static_cast<int>(v);
  } else if (f.name == "allow_passing") {
    cfg.allow_passing = as_bool(f.value, at);
  } else if (f.name == "dedicated_mode") {
    cfg.dedicated_mode = mode_from_json(f.value, at);
  } else if (f.name == "strategy") {
    cfg.strategy = strategy_from_json(f.value, at);
  } else if (f.name == "within_hub_travel") {
    const double v = as_number(f.value, at);
    if (!(v >= 0)) throw ConfigError(at, "must be >= 0");
    cfg.within_hub_uniform = v;
    cfg.within_hub_matrix.reset();
  } else if (f.name == "frequency_multiplier") {
    const double m = as_number(f.value, at);
    if (!(m > 0)) throw ConfigError(at, "must be > 0");
    for (auto& r : cfg.routes) {
      if (r.mode != PlanMode::even_headway) throw ConfigError(at, "route '" + r.id + "' is not an even-headway route");
      const Seconds h = r.headway / m;
      // Fleets follow the new headway at the same design cycle.
      if (r.fleet) r.fleet = *r.fleet == 0 ? 0 : fleet_size_even_headway(*r.fleet * r.headway, h);
      r.headway = h;
    }
  } else if (f.name == "route_multiplier") {
    const auto k = as_integer(f.value, at);
    if (k < 1) throw ConfigError(at, "must be >= 1");
    const auto originals = cfg.routes;
    if (cfg.within_hub_matrix) throw ConfigError(at, "cannot replicate routes with an explicit within-hub matrix");
    for (std::int64_t copy = 2; copy <= k; ++copy) {
      for (auto r : originals) {
        r.id += "#" + std::to_string(copy);
        cfg.routes.push_back(std::move(r));
      }
    }
  } else if (f.name == "runtime_cov_multiplier") {
    const double m = as_number(f.value, at);
    if (!(m >= 0)) throw ConfigError(at, "must be >= 0");
    // fleets stay at their original size
    const auto ar = allocation_routes(cfg);
    for (std::size_t i = 0; i < cfg.routes.size(); ++i)
      if (!cfg.routes[i].fleet) cfg.routes[i].fleet = base_fleet_size(ar[i], cfg.design_percentile);
    for (auto& r : cfg.routes) r.runtime = r.runtime.with_scaled_spread(m);
  } else {
    throw ConfigError(at, "unknown factor");
  }
  return cfg;
}

inline ScenarioConfig apply_point(ScenarioConfig cfg, const GridPoint& point) {
  for (const auto& f : point) cfg = apply_factor(std::move(cfg), f);
  return cfg;
}

inline std::vector<json> factor_values(const json& spec, const std::string& path) {
  std::vector<json> values;
  if (spec.is_array()) {
    if (spec.empty()) throw ConfigError(path, "value list is empty");
    for (const auto& v : spec) values.push_back(v);
    return values;
  }
  if (spec.is_object()) {
    ObjectReader rd(spec, path);
    const auto from = rd.integer("from"), to = rd.integer("to"), step = rd.integer("step", 1);
    rd.finish();
    if (step < 1 || to < from) throw ConfigError(path, "range needs from <= to and step >= 1");
    for (auto v = from; v <= to; v += step) values.push_back(v);
    return values;
  }
  throw ConfigError(path, "expected a list of values or {\"from\": a, \"to\": b}");
}

/// Cartesian product of one grid block; factors vary in name order, the last fastest.
inline std::vector<GridPoint> expand_block(const json& block, const std::string& path) {
  if (!block.is_object()) throw ConfigError(path, "expected an object of factor -> values");
  std::vector<GridPoint> points{GridPoint{}};
  for (const auto& [name, spec] : block.items()) {
    const auto& names = factor_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw ConfigError(join_path(path, name), "unknown factor");
    const auto values = factor_values(spec, join_path(path, name));
    std::vector<GridPoint> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        auto q = p;
        q.push_back({name, v});
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

inline ScenarioFile read_scenario_file(const json& doc) {
  ObjectReader rd(doc, "");
  ScenarioFile file;
  const auto version = rd.integer("schema_version");
  if (version != kSchemaVersion) throw ConfigError("schema_version", "unsupported schema version " + std::to_string(version));
  file.schema_version = static_cast<int>(version);
  if (rd.has("description")) (void)rd.string("description");
  file.base = config_from_json(rd.at("scenario"), "scenario");
  if (rd.has("sweep")) {
    const json& sweep = rd.at("sweep");
    if (sweep.is_array()) {
      for (std::size_t i = 0; i < sweep.size(); ++i) {
        auto pts = expand_block(sweep[i], index_path("sweep", i));
        file.grid.insert(file.grid.end(), pts.begin(), pts.end());
      }
    } else {
      file.grid = expand_block(sweep, "sweep");
    }
    // Reject bad factor values up front rather than failing every replication.
    for (const auto& p : file.grid)
      for (const auto& f : p) (void)apply_factor(file.base, f);
  }
  rd.finish();
  return file;
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

inline ScenarioFile load_scenario_file(const std::string& path) { return read_scenario_file(load_json_file(path)); }

/// Document -> validated, fully resolved scenario.
inline ResolvedScenario parse_resolved(const json& doc) { return resolve(read_scenario_file(doc).base); }

inline sim::Scenario parse_scenario(const json& doc) { return parse_resolved(doc).scenario; }

}  // namespace interline::io

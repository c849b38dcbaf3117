#pragma once

// Factor-grid experiments: every grid point x replication is an independent run; rows
// come back in grid order whatever the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "interline/json_io.hpp"
#include "interline/scenario_io.hpp"
#include "interline/sim.hpp"

namespace interline::io {

struct SweepRow {
  std::size_t point = 0;
  GridPoint factors;
  int replication = 0;
  std::uint64_t seed = 0;
  std::string scenario_hash;
  bool ok = false;
  std::string error;
  int shared_fleet_size = 0;
  int total_fleet = 0;
  sim::MetricsReport metrics;
};

struct SweepResult {
  std::vector<std::string> factor_columns;  ///< union of factor names, sorted
  std::size_t point_count = 0;
  std::vector<SweepRow> rows;  ///< point-major, replication-minor
};

/// Resolved scenario of one (grid point, replication): seed = base seed + replication.
inline ResolvedScenario resolve_run(const ScenarioFile& file, const GridPoint& point, int replication) {
  ScenarioConfig cfg = apply_point(file.base, point);
  cfg.seed = file.base.seed + static_cast<std::uint64_t>(replication);
  return resolve(std::move(cfg));
}

inline SweepRow run_one(const ScenarioFile& file, std::size_t point_index, const GridPoint& point, int replication) {
  SweepRow row;
  row.point = point_index;
  row.factors = point;
  row.replication = replication;
  row.seed = file.base.seed + static_cast<std::uint64_t>(replication);
  try {
    const auto resolved = resolve_run(file, point, replication);
    row.scenario_hash = scenario_hash(resolved);
    row.shared_fleet_size = resolved.scenario.shared_fleet_size;
    row.total_fleet = resolved.scenario.total_fleet();
    row.metrics = sim::run_scenario(resolved.scenario).metrics;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

inline SweepResult run_sweep(const ScenarioFile& file, int replications, int jobs = 1) {
  if (replications < 1) throw DomainError("run_sweep: replications must be >= 1");
  std::vector<GridPoint> grid = file.grid.empty() ? std::vector<GridPoint>{GridPoint{}} : file.grid;

  SweepResult result;
  result.point_count = grid.size();
  std::set<std::string> names;
  for (const auto& p : grid)
    for (const auto& f : p) names.insert(f.name);
  result.factor_columns.assign(names.begin(), names.end());

  const std::size_t total = grid.size() * static_cast<std::size_t>(replications);
  result.rows.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t point = task / replications;
      const int rep = static_cast<int>(task % replications);
      result.rows[task] = run_one(file, point, grid[point], rep);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return result;
}

struct MeanCi {
  double mean = 0;
  double half_width = 0;  ///< 95% Student-t half-width; 0 with fewer than two values
  std::size_t n = 0;
};

inline MeanCi mean_ci95(const std::vector<double>& xs) {
  MeanCi out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / xs.size();
  if (xs.size() < 2) return out;
  double ss = 0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / (xs.size() - 1));
  const boost::math::students_t dist(static_cast<double>(xs.size() - 1));
  out.half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

namespace detail {

inline std::string csv_cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number()) return format_fixed(v.get<double>());
  std::string s = v.dump();
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

inline std::string csv_escape(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline const json* factor_value(const GridPoint& p, const std::string& name) {
  const json* found = nullptr;
  for (const auto& f : p)
    if (f.name == name) found = &f.value;
  return found;
}

using MetricGetter = double (*)(const sim::RouteMetrics&);

inline const std::vector<std::pair<std::string, MetricGetter>>& metric_columns() {
  static const std::vector<std::pair<std::string, MetricGetter>> cols{
      {"mean_delay_s", [](const sim::RouteMetrics& m) { return m.mean_delay; }},
      {"headway_cov", [](const sim::RouteMetrics& m) { return m.headway_cov; }},
      {"wait_ratio", [](const sim::RouteMetrics& m) { return m.wait_ratio; }},
      {"mean_wait_s", [](const sim::RouteMetrics& m) { return m.mean_wait; }},
      {"mean_idle_s", [](const sim::RouteMetrics& m) { return m.mean_idle; }},
  };
  return cols;
}

}  // namespace detail

/// One CSV line per run.
inline std::string runs_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "point,scenario_hash";
  for (const auto& n : result.factor_columns) out << ',' << n;
  out << ",replication,seed,status,shared_fleet,total_fleet";
  for (const auto& [name, get] : detail::metric_columns()) out << ',' << name;
  out << ",trips_completed,error\n";
  for (const auto& row : result.rows) {
    out << row.point << ',' << row.scenario_hash;
    for (const auto& n : result.factor_columns) {
      const json* v = detail::factor_value(row.factors, n);
      out << ',' << (v ? detail::csv_cell(*v) : std::string());
    }
    out << ',' << row.replication << ',' << row.seed << ',' << (row.ok ? "ok" : "error");
    if (row.ok) {
      out << ',' << row.shared_fleet_size << ',' << row.total_fleet;
      for (const auto& [name, get] : detail::metric_columns()) out << ',' << format_fixed(get(row.metrics.system));
      out << ',' << row.metrics.system.trips_completed << ",";
    } else {
      out << ",,";
      for (std::size_t i = 0; i < detail::metric_columns().size(); ++i) out << ',';
      out << ",," << detail::csv_escape(row.error);
    }
    out << '\n';
  }
  return out.str();
}

/// Per-route metrics of every successful run.
inline std::string routes_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "point,replication,seed,route_id";
  for (const auto& [name, get] : detail::metric_columns()) out << ',' << name;
  out << ",trips_completed\n";
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    for (const auto& m : row.metrics.routes) {
      out << row.point << ',' << row.replication << ',' << row.seed << ',' << detail::csv_escape(m.route_id);
      for (const auto& [name, get] : detail::metric_columns()) out << ',' << format_fixed(get(m));
      out << ',' << m.trips_completed << '\n';
    }
  }
  return out.str();
}

/// Per grid point means and 95% half-widths of the system metrics.
inline json summary_json(const SweepResult& result) {
  json points = json::array();
  for (std::size_t p = 0; p < result.point_count; ++p) {
    json factors = json::object();
    std::size_t runs = 0, ok = 0;
    int shared = 0;
    std::map<std::string, std::vector<double>> values;
    for (const auto& row : result.rows) {
      if (row.point != p) continue;
      ++runs;
      for (const auto& f : row.factors) factors[f.name] = f.value;
      if (!row.ok) continue;
      ++ok;
      shared = row.shared_fleet_size;
      for (const auto& [name, get] : detail::metric_columns()) values[name].push_back(get(row.metrics.system));
    }
    json metrics = json::object();
    for (const auto& [name, xs] : values) {
      const auto ci = mean_ci95(xs);
      metrics[name] = {{"mean", ci.mean}, {"ci95_half_width", ci.half_width}};
    }
    json entry{{"point", p}, {"factors", factors}, {"runs", runs}, {"ok", ok}, {"metrics", metrics}};
    if (ok > 0) entry["shared_fleet_size"] = shared;
    points.push_back(entry);
  }
  return json{{"points", points}, {"replications_total", result.rows.size()}};
}

/// Two-column table: shared fleet size -> mean of a system metric over successful runs.
inline std::string shared_fleet_curve(const SweepResult& result, const std::string& column, detail::MetricGetter get) {
  std::map<int, std::vector<double>> by_size;
  for (const auto& row : result.rows)
    if (row.ok) by_size[row.shared_fleet_size].push_back(get(row.metrics.system));
  std::ostringstream out;
  out << "shared_fleet_size," << column << '\n';
  for (const auto& [size, xs] : by_size) out << size << ',' << format_fixed(mean_ci95(xs).mean) << '\n';
  return out.str();
}

/// Writes runs.csv, routes.csv, summary.json, delay_vs_shared.csv and cov_vs_shared.csv.
inline std::vector<std::filesystem::path> emit_report(const SweepResult& result, const std::filesystem::path& dir) {
  if (result.rows.empty()) throw DomainError("emit_report: empty sweep result");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files{
      {"runs.csv", runs_csv(result)},
      {"routes.csv", routes_csv(result)},
      {"summary.json", summary_json(result).dump(2) + "\n"},
      {"delay_vs_shared.csv", shared_fleet_curve(result, "mean_delay_s", detail::metric_columns()[0].second)},
      {"cov_vs_shared.csv", shared_fleet_curve(result, "headway_cov", detail::metric_columns()[1].second)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace interline::io

// Command-line front end: queue, allocate, dispatch, simulate and sweep subcommands.
//
// Exit status: 0 success, 1 invalid input, 2 failure while running.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interline/json_io.hpp"
#include "interline/queueing.hpp"
#include "interline/scenario_io.hpp"
#include "interline/sim.hpp"
#include "interline/sweep.hpp"

namespace fs = std::filesystem;
using namespace interline;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

fs::path output_dir(const std::string& flag) {
  if (const char* env = std::getenv("INTERLINE_OUT_DIR"); env && *env) return env;
  return flag;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

struct QueueArgs {
  int servers = 12;
  double arrival_rate = 10;
  double service_rate = 1;
  double ca = 1;
  double cs = 1;
};

struct QueueSweepArgs {
  int max_routes = 5;
  int servers = 12;
  double service_rate = 1;
  double cs = 0.15;
  std::vector<double> utilizations{0.5, 0.6, 0.7, 0.8, 0.9};
};

int run_queue(const QueueArgs& a) {
  const queueing::QueueSpec spec{a.servers, a.arrival_rate, a.service_rate, a.ca, a.cs};
  std::cout << io::to_json(queueing::wait_ggc(spec)).dump(2) << '\n';
  return kExitOk;
}

int run_queue_sweep(const QueueSweepArgs& a) {
  const auto rows = queueing::pooling_sweep(a.max_routes, a.servers, a.service_rate, a.cs, a.utilizations);
  std::cout << "m,utilization,wait_seconds\n";
  for (const auto& r : rows) std::cout << r.routes << ',' << format_fixed(r.utilization) << ',' << format_fixed(r.wait) << '\n';
  return kExitOk;
}

int run_allocate(const std::string& config, const std::string& shared) {
  auto file = io::load_scenario_file(config);
  io::read_shared_size(file.base, shared == "all" ? io::json("all") : io::json(std::stoi(shared)), "--shared");
  const auto resolved = io::resolve(file.base);
  std::cout << io::to_json(resolved.allocation).dump(2) << '\n';
  return kExitOk;
}

int run_dispatch(const std::string& instance) {
  const auto inst = io::instance_from_json(io::load_json_file(instance));
  std::cout << io::to_json(dispatch::solve(inst)).dump(2) << '\n';
  return kExitOk;
}

int run_simulate(const std::string& config, std::optional<std::uint64_t> seed, const fs::path& out) {
  auto file = io::load_scenario_file(config);
  if (seed) file.base.seed = *seed;
  const auto resolved = io::resolve(file.base);
  const auto result = sim::run_scenario(resolved.scenario);

  ensure_dir(out);
  std::ostringstream csv;
  io::write_departures_csv(csv, result.records);
  write_file(out / "departures.csv", csv.str());
  io::json metrics = io::to_json(result.metrics);
  metrics["scenario_hash"] = io::scenario_hash(resolved);
  metrics["seed"] = resolved.scenario.seed;
  write_file(out / "metrics.json", metrics.dump(2) + "\n");
  write_file(out / "scenario.json", io::emit_scenario(resolved).dump(2) + "\n");
  std::cout << metrics.dump(2) << '\n';
  return kExitOk;
}

int run_sweep(const std::string& config, int replications, int jobs, const fs::path& out) {
  const auto file = io::load_scenario_file(config);
  const auto result = io::run_sweep(file, replications, jobs);
  io::emit_report(result, out);
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.ok ? 0 : 1;
  std::cout << "points=" << result.point_count << " runs=" << result.rows.size() << " failed=" << failed
            << " out=" << out.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interlining and shared-fleet dispatch toolkit"};
  app.require_subcommand(1);

  QueueArgs qa;
  auto* queue = app.add_subcommand("queue", "G/G/c waiting time approximation");
  queue->add_option("--servers", qa.servers, "number of servers (buses)")->check(CLI::PositiveNumber);
  queue->add_option("--arrival-rate", qa.arrival_rate, "arrivals per hour");
  queue->add_option("--service-rate", qa.service_rate, "services per hour per server");
  queue->add_option("--ca", qa.ca, "arrival coefficient of variation");
  queue->add_option("--cs", qa.cs, "service coefficient of variation");

  QueueSweepArgs qs;
  auto* qsweep = queue->add_subcommand("sweep", "pooled wait for 1..m routes over a utilization grid (CSV)");
  qsweep->add_option("--routes", qs.max_routes, "largest number of pooled routes")->check(CLI::PositiveNumber);
  qsweep->add_option("--servers", qs.servers, "buses per route")->check(CLI::PositiveNumber);
  qsweep->add_option("--service-rate", qs.service_rate, "services per hour per bus");
  qsweep->add_option("--cs", qs.cs, "service coefficient of variation");
  qsweep->add_option("--utilization", qs.utilizations, "utilization values")->delimiter(',');

  std::string alloc_config, alloc_shared;
  auto* alloc = app.add_subcommand("allocate", "greedy shared-fleet allocation with donation trace");
  alloc->add_option("--config", alloc_config, "scenario file")->required();
  alloc->add_option("--shared", alloc_shared, "shared fleet size, or 'all'")->required();

  std::string instance_path;
  auto* disp = app.add_subcommand("dispatch", "solve one dispatch instance (JSON in, JSON out)");
  disp->add_option("--instance", instance_path, "instance file")->required();

  std::string sim_config, sim_out = "out";
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "one replication; writes departures.csv, metrics.json, scenario.json");
  simulate->add_option("--config", sim_config, "scenario file")->required();
  simulate->add_option("--seed", sim_seed, "random seed (overrides the file)");
  simulate->add_option("--out", sim_out, "output directory");

  std::string sw_config, sw_out = "out";
  int sw_reps = 20, sw_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "factor grid x replications; writes CSV tables and summary.json");
  sweep->add_option("--config", sw_config, "scenario file")->required();
  sweep->add_option("--replications", sw_reps, "replications per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sw_jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (qsweep->parsed()) return run_queue_sweep(qs);
    if (queue->parsed()) return run_queue(qa);
    if (alloc->parsed()) return run_allocate(alloc_config, alloc_shared);
    if (disp->parsed()) return run_dispatch(instance_path);
    if (simulate->parsed()) return run_simulate(sim_config, sim_seed, output_dir(sim_out));
    if (sweep->parsed()) return run_sweep(sw_config, sw_reps, sw_jobs, output_dir(sw_out));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}

// htnet: generate trafficking networks, build interdiction instances, solve them.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "htnet/attacker.hpp"
#include "htnet/defender.hpp"
#include "htnet/experiment.hpp"
#include "htnet/generator.hpp"
#include "htnet/instance.hpp"
#include "htnet/io.hpp"
#include "htnet/oracle.hpp"

namespace fs = std::filesystem;
using namespace htnet;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kSolver = 3 };

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

struct Timer {
  bool enabled = false;
  Clock::time_point start = Clock::now();
  void report(const std::string& what) const {
    if (!enabled) return;
    const double s = std::chrono::duration<double>(Clock::now() - start).count();
    std::cerr << what << " wall_time_seconds = " << format_real(s) << "\n";
  }
};

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void emit(const std::string& out, const Json& j) {
  if (out.empty() || out == "-")
    std::cout << j.dump(2) << "\n";
  else
    write_json_file(out, j);
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path s = p;
  s.replace_extension();
  return s.string() + suffix;
}

std::optional<Clock::time_point> deadline_from(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(seconds));
}

// ---------------------------------------------------------------- commands

struct GenerateArgs {
  std::string config, out;
  int count = 5;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, const Timer& timer) {
  ToolConfig cfg = load_tool_config(opt_path(a.config));
  if (a.seed) cfg.generator.seed = *a.seed;
  if (a.count < 1) throw ConfigError("--count must be at least 1");
  TraffickingNetwork net = generate_network(static_cast<std::size_t>(a.count), cfg.generator);
  std::vector<std::string> violations = validate_network(net);
  std::string report;
  for (const auto& v : violations) report += v + "\n";
  if (report.empty()) report = "ok\n";
  const fs::path out = a.out.empty() ? fs::path("network.json") : fs::path(a.out);
  write_json_file(out, to_json(net));
  write_text_file(sibling(out, ".validation.txt"), report);
  write_text_file(sibling(out, ".metrics.csv"), metrics_csv(net, true));
  std::cout << "operations " << net.operations.size() << " nodes " << net.persons.size()
            << " traffickers " << net.count(Role::Trafficker) << " bottoms "
            << net.count(Role::Bottom) << " victims " << net.count(Role::Victim) << "\n";
  timer.report("generate");
  if (!violations.empty()) throw ValidationFailure(violations.front());
  return kOk;
}

int cmd_metrics(const std::string& network, bool exclude_bottom, const std::string& out) {
  TraffickingNetwork net = network_from_json(read_json_file(network));
  std::string csv = metrics_csv(net, !exclude_bottom);
  if (out.empty() || out == "-")
    std::cout << csv;
  else
    write_text_file(out, csv);
  return kOk;
}

int cmd_build_instance(const std::string& network, const std::string& config,
                       std::optional<std::uint64_t> seed, const std::string& out,
                       const Timer& timer) {
  ToolConfig cfg = load_tool_config(opt_path(config));
  TraffickingNetwork net = network_from_json(read_json_file(network));
  auto violations = validate_network(net);
  if (!violations.empty()) throw ValidationFailure(violations.front());
  Rng rng(mix_seed(seed.value_or(net.generation_seed)));
  InterdictionInstance inst = build_instance(net, cfg.schedule, rng);
  emit(out, to_json(inst));
  timer.report("build-instance");
  return kOk;
}

// Accepts a plan document or a solve report, whose plan is reused.
NodeMask read_interdiction(const InterdictionInstance& inst, const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.value("kind", "") == "solve_report" && j.contains("plan")) {
    Json p{{"schema_version", j["schema_version"]}, {"kind", "plan"}};
    p["interdicted"] = j["plan"].value("interdicted", Json::array());
    return interdiction_from_json(inst, p);
  }
  return interdiction_from_json(inst, j);
}

struct SolveArgs {
  std::string model, instance, plan, out;
  int budget = 0;
  double time_limit = 7200.0;
};

int cmd_solve(const SolveArgs& a, const Timer& timer) {
  InterdictionInstance inst = instance_from_json(read_json_file(a.instance));
  if (a.model == "defender") {
    if (a.plan.empty()) throw ConfigError("solve defender needs --plan");
    NodeMask y = read_interdiction(inst, a.plan);
    DefenderOptions opt;
    opt.deadline = deadline_from(a.time_limit);
    DefenderResult r = solve_defender(inst, y, opt);
    if (!r.optimal) throw SolveTimeout("defender time limit reached", -1, r.value());
    emit(a.out, to_json(inst, y, r));
    std::cerr << "defender value " << r.value() << "\n";
  } else {
    if (a.budget < 0) throw ConfigError("--budget must be non-negative");
    AttackerOptions opt;
    opt.deadline = deadline_from(a.time_limit);
    SolveReport r = a.model == "mfnip" ? solve_mfnip(inst, a.budget, opt)
                                       : solve_mfnip_r(inst, a.budget, opt);
    emit(a.out, to_json(inst, r));
    std::cerr << a.model << " objective " << r.objective << " iterations " << r.iterations << "\n";
  }
  timer.report("solve");
  return kOk;
}

int cmd_oracle(const std::string& instance, const std::string& model, int budget,
               const std::string& plan, const std::string& out, const Timer& timer) {
  InterdictionInstance inst = instance_from_json(read_json_file(instance));
  OracleResult r;
  if (model == "defender") {
    if (plan.empty()) throw ConfigError("oracle defender needs --plan");
    r = oracle_defender(inst, read_interdiction(inst, plan));
  } else {
    if (budget < 0) throw ConfigError("--budget must be non-negative");
    r = model == "mfnip" ? oracle_mfnip(inst, budget) : oracle_mfnip_r(inst, budget);
  }
  emit(out, to_json(inst, r));
  std::cerr << "oracle " << model << " optimum " << r.optimum << " enumerated " << r.enumerated
            << "\n";
  timer.report("oracle");
  return kOk;
}

int cmd_experiment(const std::string& spec_path, const std::string& output_dir, int workers,
                   double cell_time_limit, bool timing, const Timer& timer) {
  const fs::path p(spec_path);
  ExperimentSpec spec = experiment_spec_from_key_values(read_key_values(p), p.parent_path());
  if (!output_dir.empty()) spec.output_dir = output_dir;
  if (workers > 0) spec.workers = workers;
  if (cell_time_limit > 0) spec.cell_time_limit = cell_time_limit;
  validate_experiment_spec(spec);
  ToolConfig cfg = load_tool_config(spec.config);
  auto results = run_experiment(spec, cfg, [&](const NetworkResult& r) {
    int failed = 0;
    for (const auto& c : r.cells) failed += c.status != CellStatus::Ok;
    std::cerr << "network " << r.index << " seed " << r.seed << " cells " << r.cells.size()
              << " failed " << failed << "\n";
  });
  write_experiment(spec, results, timing);
  const BottomTendency t = bottom_tendency(results);
  std::cout << "bottoms interdicted: mfnip " << t.mfnip_bottoms << " mfnip-r " << t.mfnip_r_bottoms
            << "\n";
  timer.report("experiment");
  for (const auto& r : results)
    for (const auto& c : r.cells)
      if (c.status != CellStatus::Ok) return kSolver;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic trafficking networks and exact max-flow interdiction with restructuring"};
  app.require_subcommand(1);
  bool timing = false;
  app.add_flag("--timing", timing, "Print wall time to stderr");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a network");
  generate->add_option("-c,--config", gen.config, "Key-value config file (default: $HTNET_CONFIG)");
  generate->add_option("-n,--count", gen.count, "Number of operations")->capture_default_str();
  generate->add_option("-s,--seed", gen.seed, "Seed (overrides the config)");
  generate->add_option("-o,--out", gen.out, "Network JSON path")->default_str("network.json");

  std::string net_path, metrics_out;
  bool exclude_bottom = false;
  auto* metrics = app.add_subcommand("metrics", "Per-operation centrality CSV");
  metrics->add_option("network", net_path, "Network JSON")->required();
  metrics->add_flag("--exclude-bottom", exclude_bottom, "Leave the bottom out of the victim graph");
  metrics->add_option("-o,--out", metrics_out, "CSV path (default stdout)");

  std::string bi_net, bi_config, bi_out;
  std::optional<std::uint64_t> bi_seed;
  auto* build = app.add_subcommand("build-instance", "Build an interdiction instance");
  build->add_option("network", bi_net, "Network JSON")->required();
  build->add_option("-c,--config", bi_config, "Key-value config file (schedule.* keys)");
  build->add_option("-s,--seed", bi_seed, "Instance seed (default: derived from the network seed)");
  build->add_option("-o,--out", bi_out, "Instance JSON path (default stdout)");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Solve mfnip, mfnip-r, or the defender problem");
  solve->add_option("model", sol.model, "mfnip | mfnip-r | defender")
      ->required()
      ->check(CLI::IsMember({"mfnip", "mfnip-r", "defender"}));
  solve->add_option("instance", sol.instance, "Instance JSON")->required();
  solve->add_option("-b,--budget", sol.budget, "Attacker budget")->capture_default_str();
  solve->add_option("-p,--plan", sol.plan, "Plan or solve-report JSON (defender)");
  solve->add_option("-t,--time-limit", sol.time_limit, "Seconds; 0 for none")->capture_default_str();
  solve->add_option("-o,--out", sol.out, "Report JSON path (default stdout)");

  std::string or_inst, or_model = "mfnip-r", or_plan, or_out;
  int or_budget = 0;
  auto* oracle = app.add_subcommand("oracle", "Brute-force reference answer for a micro instance");
  oracle->add_option("instance", or_inst, "Instance JSON")->required();
  oracle->add_option("-m,--model", or_model, "mfnip | mfnip-r | defender")
      ->check(CLI::IsMember({"mfnip", "mfnip-r", "defender"}))
      ->capture_default_str();
  oracle->add_option("-b,--budget", or_budget, "Attacker budget")->capture_default_str();
  oracle->add_option("-p,--plan", or_plan, "Plan or solve-report JSON (defender)");
  oracle->add_option("-o,--out", or_out, "Report JSON path (default stdout)");

  std::string ex_spec, ex_dir;
  int ex_workers = 0;
  double ex_limit = 0;
  auto* experiment = app.add_subcommand("experiment", "Budget sweep over generated networks");
  experiment->add_option("spec", ex_spec, "Experiment key-value file")->required();
  experiment->add_option("-o,--output-dir", ex_dir, "Override output_dir");
  experiment->add_option("-j,--workers", ex_workers, "Override workers");
  experiment->add_option("--cell-time-limit", ex_limit, "Override cell_time_limit (seconds)");

  std::string cfg_path;
  auto* config = app.add_subcommand("config", "Print the effective key-value config");
  config->add_option("-c,--config", cfg_path, "Key-value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  Timer timer{timing};
  try {
    if (*generate) return cmd_generate(gen, timer);
    if (*metrics) return cmd_metrics(net_path, exclude_bottom, metrics_out);
    if (*build) return cmd_build_instance(bi_net, bi_config, bi_seed, bi_out, timer);
    if (*solve) return cmd_solve(sol, timer);
    if (*oracle) return cmd_oracle(or_inst, or_model, or_budget, or_plan, or_out, timer);
    if (*experiment) return cmd_experiment(ex_spec, ex_dir, ex_workers, ex_limit, timing, timer);
    if (*config) {
      std::cout << to_key_values(load_tool_config(opt_path(cfg_path)));
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const InvalidNetwork& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (lower " << e.lower << ", upper " << e.upper
              << ")\n";
    return kSolver;
  } catch (const OracleRefusal& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kUsage;
}

#include "htnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>

#include "htnet/generator.hpp"

namespace htnet {

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Timeout: return "timeout";
    case CellStatus::IterationCap: return "iteration_cap";
    case CellStatus::Error: return "error";
  }
  return "?";
}

TraffickingNetwork experiment_network(const ToolConfig& cfg, int num_operations,
                                      std::uint64_t seed) {
  GeneratorConfig g = cfg.generator;
  g.seed = seed;
  return generate_network(static_cast<std::size_t>(num_operations), g);
}

InterdictionInstance experiment_instance(const TraffickingNetwork& net, const ToolConfig& cfg,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  return build_instance(net, cfg.schedule, rng);
}

NetworkResult run_network(const ExperimentSpec& spec, const ToolConfig& cfg, std::size_t index) {
  using clock = std::chrono::steady_clock;
  NetworkResult out;
  out.index = index;
  out.seed = spec.seeds.at(index);
  out.network = experiment_network(cfg, spec.num_operations, out.seed);
  out.instance = experiment_instance(out.network, cfg, out.seed);
  const InterdictionInstance& inst = out.instance;

  AttackerSolver solver(inst, *std::max_element(spec.budgets.begin(), spec.budgets.end()));
  const auto limit = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(spec.cell_time_limit));
  for (int b : spec.budgets) {
    CellResult cell;
    cell.budget = b;
    cell.total = inst.victims_and_bottoms();
    solver.set_deadline(clock::now() + limit);
    try {
      SolveReport m = solver.solve_mfnip(b);
      cell.mfnip = m.objective;
      cell.mfnip_seconds = m.wall_time;
      cell.mfnip_counts = count_roles(inst, m.plan.mask);
      cell.restructured = solver.evaluate_plan(m.plan.mask).value();
      SolveReport r = solver.solve_mfnip_r(b);
      cell.mfnip_r = r.objective;
      cell.mfnip_r_seconds = r.wall_time;
      cell.mfnip_r_counts = count_roles(inst, r.plan.mask);
      cell.trace = r.bounds_trace;
      cell.iterations = r.iterations;
    } catch (const SolveTimeout& e) {
      cell.status = CellStatus::Timeout;
      cell.message = e.what();
    } catch (const IterationCapExceeded& e) {
      cell.status = CellStatus::IterationCap;
      cell.message = e.what();
    } catch (const std::exception& e) {
      cell.status = CellStatus::Error;
      cell.message = e.what();
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

std::vector<NetworkResult> run_experiment(const ExperimentSpec& spec, const ToolConfig& cfg,
                                          const std::function<void(const NetworkResult&)>& on_result) {
  validate_experiment_spec(spec);
  const std::size_t n = spec.seeds.size();
  std::vector<std::optional<NetworkResult>> slots(n);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        NetworkResult r = run_network(spec, cfg, i);
        std::lock_guard lock(mu);
        slots[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
      cv.notify_all();
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(spec.workers), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);

  // Collector: hand results on in index order as soon as the prefix is complete.
  std::vector<NetworkResult> results;
  {
    std::unique_lock lock(mu);
    while (results.size() < n && !failure) {
      cv.wait(lock, [&] { return failure || slots[results.size()].has_value(); });
      while (results.size() < n && slots[results.size()]) {
        results.push_back(std::move(*slots[results.size()]));
        if (on_result) {
          lock.unlock();
          on_result(results.back());
          lock.lock();
        }
      }
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

namespace {

std::string value_or_blank(const CellResult& c, int v) {
  return c.status == CellStatus::Ok ? std::to_string(v) : "";
}

std::string counts(const CellResult& c, const RoleCounts& rc) {
  if (c.status != CellStatus::Ok) return ",,,";
  return std::to_string(rc.traffickers) + "," + std::to_string(rc.bottoms) + "," +
         std::to_string(rc.victims) + "," + std::to_string(rc.recruitables + rc.backups);
}

}  // namespace

std::string results_csv_header(bool timing) {
  std::string h =
      "network,seed,budget,total,mfnip,restructured,mfnip_r,"
      "mfnip_int_trafficker,mfnip_int_bottom,mfnip_int_victim,mfnip_int_latent,"
      "mfnip_r_int_trafficker,mfnip_r_int_bottom,mfnip_r_int_victim,mfnip_r_int_latent,"
      "iterations,status";
  if (timing) h += ",mfnip_seconds,mfnip_r_seconds";
  return h + "\n";
}

std::string results_csv_rows(const NetworkResult& r, bool timing) {
  std::string out;
  for (const CellResult& c : r.cells) {
    out += std::to_string(r.index) + "," + std::to_string(r.seed) + "," + std::to_string(c.budget) +
           "," + std::to_string(c.total) + "," + value_or_blank(c, c.mfnip) + "," +
           value_or_blank(c, c.restructured) + "," + value_or_blank(c, c.mfnip_r) + "," +
           counts(c, c.mfnip_counts) + "," + counts(c, c.mfnip_r_counts) + "," +
           std::to_string(c.iterations) + "," + to_string(c.status);
    if (timing) out += "," + format_real(c.mfnip_seconds) + "," + format_real(c.mfnip_r_seconds);
    out += "\n";
  }
  return out;
}

std::string plot_csv(const NetworkResult& r) {
  std::string out = "budget,total,mfnip,restructured,mfnip_r\n";
  for (const CellResult& c : r.cells)
    out += std::to_string(c.budget) + "," + std::to_string(c.total) + "," +
           value_or_blank(c, c.mfnip) + "," + value_or_blank(c, c.restructured) + "," +
           value_or_blank(c, c.mfnip_r) + "\n";
  return out;
}

std::string traces_csv_rows(const NetworkResult& r) {
  std::string out;
  for (const CellResult& c : r.cells)
    for (std::size_t i = 0; i < c.trace.size(); ++i)
      out += std::to_string(r.index) + "," + std::to_string(c.budget) + "," + std::to_string(i + 1) +
             "," + std::to_string(c.trace[i].lower) + "," + std::to_string(c.trace[i].upper) + "\n";
  return out;
}

BottomTendency bottom_tendency(const std::vector<NetworkResult>& results) {
  BottomTendency t;
  for (const NetworkResult& r : results)
    for (const CellResult& c : r.cells) {
      if (c.status != CellStatus::Ok) continue;
      t.mfnip_bottoms += c.mfnip_counts.bottoms;
      t.mfnip_r_bottoms += c.mfnip_r_counts.bottoms;
      t.cells_holding += c.mfnip_counts.bottoms >= c.mfnip_r_counts.bottoms;
      ++t.cells;
    }
  return t;
}

void write_experiment(const ExperimentSpec& spec, const std::vector<NetworkResult>& results,
                      bool timing) {
  const auto& dir = spec.output_dir;
  std::string rows = results_csv_header(timing);
  std::string traces = "network,budget,iteration,lower,upper\n";
  int failed = 0;
  for (const NetworkResult& r : results) {
    rows += results_csv_rows(r, timing);
    traces += traces_csv_rows(r);
    const std::string k = std::to_string(r.index);
    write_json_file(dir / ("network_" + k + ".json"), to_json(r.network));
    write_json_file(dir / ("instance_" + k + ".json"), to_json(r.instance));
    write_text_file(dir / ("plot_" + k + ".csv"), plot_csv(r));
    for (const CellResult& c : r.cells) failed += c.status != CellStatus::Ok;
  }
  write_text_file(dir / "results.csv", rows);
  write_text_file(dir / "traces.csv", traces);
  const BottomTendency t = bottom_tendency(results);
  std::string summary;
  summary += "networks = " + std::to_string(results.size()) + "\n";
  summary += "failed_cells = " + std::to_string(failed) + "\n";
  summary += "mfnip_bottoms_interdicted = " + std::to_string(t.mfnip_bottoms) + "\n";
  summary += "mfnip_r_bottoms_interdicted = " + std::to_string(t.mfnip_r_bottoms) + "\n";
  summary += "cells_mfnip_at_least_as_many_bottoms = " + std::to_string(t.cells_holding) + " of " +
             std::to_string(t.cells) + "\n";
  summary += std::string("bottom_tendency_holds = ") + (t.holds() ? "true" : "false") + "\n";
  write_text_file(dir / "summary.txt", summary);
}

}  // namespace htnet

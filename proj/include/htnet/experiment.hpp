#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "htnet/attacker.hpp"
#include "htnet/core.hpp"
#include "htnet/instance.hpp"
#include "htnet/io.hpp"

namespace htnet {

enum class CellStatus { Ok, Timeout, IterationCap, Error };
std::string to_string(CellStatus s);

/// One (network, budget) row of an experiment.
struct CellResult {
  int budget = 0;
  int total = 0;
  CellStatus status = CellStatus::Ok;
  std::string message;
  int mfnip = -1;
  int restructured = -1;
  int mfnip_r = -1;
  RoleCounts mfnip_counts;
  RoleCounts mfnip_r_counts;
  std::vector<BoundsPoint> trace;
  std::size_t iterations = 0;
  double mfnip_seconds = 0.0;
  double mfnip_r_seconds = 0.0;
};

struct NetworkResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  TraffickingNetwork network;
  InterdictionInstance instance;
  std::vector<CellResult> cells;
};

/// The generated network and built instance for one experiment seed.
TraffickingNetwork experiment_network(const ToolConfig& cfg, int num_operations,
                                      std::uint64_t seed);
InterdictionInstance experiment_instance(const TraffickingNetwork& net, const ToolConfig& cfg,
                                         std::uint64_t seed);

/// Runs every budget of one network on a shared solver. Solver failures are
/// recorded in the cell and the sweep moves on.
NetworkResult run_network(const ExperimentSpec& spec, const ToolConfig& cfg, std::size_t index);

/// Networks are dispatched to `spec.workers` threads; `on_result` sees them
/// in index order whatever the completion order.
std::vector<NetworkResult> run_experiment(const ExperimentSpec& spec, const ToolConfig& cfg,
                                          const std::function<void(const NetworkResult&)>& on_result = {});

std::string results_csv_header(bool timing);
std::string results_csv_rows(const NetworkResult& r, bool timing);
/// budget,total,mfnip,restructured,mfnip_r
std::string plot_csv(const NetworkResult& r);
/// network,budget,iteration,lower,upper
std::string traces_csv_rows(const NetworkResult& r);

struct BottomTendency {
  int mfnip_bottoms = 0;
  int mfnip_r_bottoms = 0;
  /// Cells where MFNIP interdicted at least as many bottoms.
  int cells_holding = 0;
  int cells = 0;
  bool holds() const { return mfnip_bottoms >= mfnip_r_bottoms; }
};
BottomTendency bottom_tendency(const std::vector<NetworkResult>& results);

/// Writes results.csv, traces.csv, summary.txt, and per network
/// network_<k>.json, instance_<k>.json, plot_<k>.csv.
void write_experiment(const ExperimentSpec& spec, const std::vector<NetworkResult>& results,
                      bool timing);

}  // namespace htnet

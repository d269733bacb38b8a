#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "htnet/core.hpp"
#include "htnet/generator_config.hpp"
#include "htnet/rng.hpp"

namespace htnet {

/// Pod sizes in non-increasing order.
using Partition = std::vector<int>;

int sample_victim_count(const GeneratorConfig& cfg, Rng& rng);

bool sample_bottom_presence(int victims, const GeneratorConfig& cfg, Rng& rng);

/// Every partition of n with parts <= max_part, descending-lexicographic
/// (e.g. n=3: [3], [2,1], [1,1,1]). Throws std::invalid_argument unless
/// 1 <= n <= 12 and max_part >= 1.
std::vector<Partition> enumerate_partitions(int n, int max_part = 6);

Partition sample_pod_partition(int n, const GeneratorConfig& cfg, Rng& rng);

/// Ages per pod member. With several pods each pod shares one age, except
/// that a two-victim pod may be mixed; a lone pod draws every victim alone.
std::vector<std::vector<AgeClass>> assign_ages(const Partition& pods, const GeneratorConfig& cfg,
                                               Rng& rng);

/// Wiring decisions. A "unit" is a pod, or a single victim when the operation
/// has one pod.
struct PodWiring {
  bool per_victim = false;
  std::vector<bool> to_trafficker;
  std::vector<bool> to_bottom;
};

PodWiring wire_pods(const Partition& pods, const std::vector<std::vector<AgeClass>>& ages,
                    bool has_bottom, const GeneratorConfig& cfg, Rng& rng);

/// Cross-pod social ties inside one operation, as pairs of flat victim
/// indices (pod-major order).
std::vector<std::pair<std::size_t, std::size_t>> add_intra_operation_social(
    const Partition& pods, const std::vector<std::vector<AgeClass>>& ages,
    const GeneratorConfig& cfg, Rng& rng);

/// People and arcs of one freshly generated operation.
struct GeneratedOperation {
  Operation operation;
  std::vector<Person> persons;
  std::vector<Arc> arcs;
};

/// Runs the full per-operation pipeline, numbering people from `first_id`.
GeneratedOperation generate_operation(const GeneratorConfig& cfg, Rng& rng, NodeId first_id,
                                      std::size_t operation_index);

/// Watts-Strogatz ring over traffickers 0..n-1. `ws_neighbors` is clamped to
/// the largest even value below n. Edges are returned in lattice order with
/// rewired edges replaced in place.
std::vector<std::pair<std::size_t, std::size_t>> generate_trafficker_social(
    std::size_t num_traffickers, const GeneratorConfig& cfg, Rng& rng);

/// Deterministic in (cfg, cfg.seed).
TraffickingNetwork generate_network(std::size_t num_operations, const GeneratorConfig& cfg);

}  // namespace htnet

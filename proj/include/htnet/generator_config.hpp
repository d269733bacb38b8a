#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace htnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probabilities keyed by the age mix of a pod.
struct ByPodClass {
  double adult = 0.0;
  double minor = 0.0;
  double mixed = 0.0;
  bool operator==(const ByPodClass&) const = default;
};

/// Probabilities keyed by an unordered pair of victim ages.
struct ByAgePair {
  double minor_minor = 0.0;
  double minor_adult = 0.0;
  double adult_adult = 0.0;
  bool operator==(const ByAgePair&) const = default;
};

/// Every tunable of the operation generator. Defaults are set by
/// default_generator_config(); a value-initialized config is not valid.
struct GeneratorConfig {
  /// victim count -> probability; support within 1..12.
  std::map<int, double> victim_count_pmf;
  /// victim count -> P(bottom). Counts above the largest key use that key.
  std::map<int, double> bottom_prob;
  /// Partition weight is decay^(pods - 1); 1.0 is uniform over partitions.
  double partition_pod_decay = 1.0;
  double minor_prob = 0.0;
  double mixed_pair_prob = 0.0;
  ByPodClass pod_to_trafficker_prob;
  ByPodClass pod_to_bottom_prob;
  ByAgePair intra_op_social_prob;
  ByAgePair cross_op_social_prob;
  int ws_neighbors = 2;
  double ws_rewire = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const GeneratorConfig&) const = default;
};

GeneratorConfig default_generator_config();

/// Throws ConfigError describing the first violated rule.
void validate_config(const GeneratorConfig& cfg);

/// P(bottom) for an operation with `victims` victims.
double bottom_probability(const GeneratorConfig& cfg, int victims);

}  // namespace htnet

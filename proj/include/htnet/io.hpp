#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "htnet/attacker.hpp"
#include "htnet/core.hpp"
#include "htnet/defender.hpp"
#include "htnet/generator_config.hpp"
#include "htnet/instance.hpp"
#include "htnet/metrics.hpp"
#include "htnet/oracle.hpp"

namespace htnet {

inline constexpr int kSchemaVersion = 1;
/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "HTNET_CONFIG";

/// Malformed file: bad syntax, wrong schema version, unknown or missing fields.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const Json& j);
Json to_json(const CostSchedule& s);
CostSchedule schedule_from_json(const Json& j);

Json to_json(const TraffickingNetwork& net);
TraffickingNetwork network_from_json(const Json& j);

Json to_json(const InterdictionInstance& inst);
InterdictionInstance instance_from_json(const Json& j);

/// Interdicted NodeIds plus the defender plan as restruct-arc indices.
Json plan_to_json(const InterdictionInstance& inst, const NodeMask& y, const RestructuringPlan& z);
Json to_json(const InterdictionInstance& inst, const SolveReport& report);
Json to_json(const InterdictionInstance& inst, const NodeMask& y, const DefenderResult& result);
Json to_json(const InterdictionInstance& inst, const OracleResult& result);
/// Interdicted NodeIds read from a plan document; extra keys allowed
/// only when they are the ones plan_to_json writes.
NodeMask interdiction_from_json(const InterdictionInstance& inst, const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Flat `key = value` file. `#` starts a comment; blank lines are skipped.
/// Duplicate keys are an error.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Applies generator keys (victim_count_pmf, bottom_prob, minor_prob, ...,
/// seed) and `schedule.*` keys over defaults. Unknown keys are an error.
struct ToolConfig {
  GeneratorConfig generator;
  CostSchedule schedule;
};
ToolConfig tool_config_from_key_values(const KeyValues& kv);
std::string to_key_values(const ToolConfig& cfg);
/// Explicit path, else $HTNET_CONFIG, else built-in defaults.
ToolConfig load_tool_config(const std::optional<std::filesystem::path>& path);

struct ExperimentSpec {
  int num_networks = 5;
  int num_operations = 5;
  std::optional<std::filesystem::path> config;
  std::vector<int> budgets = default_budgets();
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir = "experiment_out";
  double cell_time_limit = 7200.0;  // seconds
  int workers = 1;
};
/// Relative paths resolve against `base`.
ExperimentSpec experiment_spec_from_key_values(const KeyValues& kv,
                                               const std::filesystem::path& base = {});
void validate_experiment_spec(const ExperimentSpec& spec);

std::string metrics_csv(const TraffickingNetwork& net, bool include_bottom);

/// Fixed-point with six decimals, so files are stable across platforms.
std::string format_real(double x);

}  // namespace htnet

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "htnet/core.hpp"
#include "htnet/rng.hpp"

namespace htnet {

class InvalidNetwork : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeRole { Source, Sink, Trafficker, Bottom, Victim, Recruitable, Backup };

/// Listed in the canonical order restructure-able arcs are stored and searched.
enum class RestructCategory {
  BackupActivate,
  Recruit,
  KnownVictim,
  PromoteActivate,
  TakeFromBottom,
  GiveToBottom,
  AssignToPromoted,
};

std::string to_string(NodeRole role);
std::string to_string(RestructCategory category);
NodeRole node_role_from_string(const std::string& s);
RestructCategory restruct_category_from_string(const std::string& s);

/// Interdiction and restructuring economics. All amounts are integral cost
/// units.
struct CostSchedule {
  int r_trafficker = 8;
  int r_bottom = 4;
  int r_victim = 2;
  int d_bottom = 3;
  int d_victim = 1;
  int r_min = 2;
  int b_restructure = 8;
  int c_known_victim = 1;
  int c_bottom_transfer = 1;
  int c_recruit = 2;
  int c_backup = 4;
  int c_promote = 5;
  int c_assign_promoted = 2;
  double recruitable_fraction = 0.4;
  int backup_threshold = 4;
  double promotable_fraction = 0.5;
  /// Trafficker capacity = ceil(slack * victims in the operation).
  double trafficker_capacity_slack = 1.0;
  /// P(a trafficker may recruit a given recruitable); empty draws are redrawn.
  double recruit_eligibility_prob = 0.5;
  /// Whether recruitable and back-up nodes may be interdicted.
  bool latent_interdictable = true;

  bool operator==(const CostSchedule&) const = default;
};

CostSchedule default_schedule();

/// Throws ConfigError on negative costs, r_min > r_trafficker, fractions
/// outside [0,1], or reductions larger than the cost of the node granting them.
void validate_schedule(const CostSchedule& s);

struct InstanceNode {
  NodeId id;
  NodeRole role = NodeRole::Victim;
  int capacity = 0;
  /// Base interdiction cost r_i (traffickers are discounted at plan time).
  int cost = 0;
  std::optional<std::size_t> operation;
};

/// Directed arc of the base network, between dense node indices.
struct FlowArc {
  std::size_t from = 0;
  std::size_t to = 0;
  int capacity = 0;
};

/// Arc the defender may switch on. Indices are dense node indices.
struct RestructArc {
  std::size_t from = 0;
  std::size_t to = 0;
  /// Trafficker whose budget pays for the activation.
  std::size_t owner = 0;
  int cost = 0;
  /// Out activation is always allowed; In only for trafficker -> existing victim.
  bool allows_in = false;
  RestructCategory category = RestructCategory::Recruit;
  /// Index of the restruct arc that must be active first.
  std::optional<std::size_t> gate;
};

struct RecruitableNode {
  std::size_t node = 0;
  std::vector<std::size_t> eligible;  // trafficker indices
};

struct BackupPair {
  std::size_t trafficker = 0;
  std::size_t backup = 0;
  std::size_t activation = 0;  // restruct arc index of (source, backup)
};

struct PromotablePair {
  std::size_t bottom = 0;
  std::size_t victim = 0;
  int gain = 0;
  std::size_t activation = 0;  // restruct arc index of (source, victim)
};

struct Reduction {
  std::size_t node = 0;
  int amount = 0;
};

struct OperationGroup {
  std::size_t trafficker = 0;
  std::optional<std::size_t> bottom;
  std::vector<std::size_t> victims;
  std::optional<std::size_t> backup;
};

/// Interdiction decisions over dense node indices (1 = interdicted).
using NodeMask = std::vector<std::uint8_t>;

/// Flow network plus everything the attacker and defender need. Nodes are
/// addressed by dense index; `index_of` maps NodeIds back.
struct InterdictionInstance {
  std::vector<InstanceNode> nodes;
  std::vector<FlowArc> arcs;
  std::vector<RestructArc> restruct_arcs;
  std::vector<RecruitableNode> recruitables;
  std::vector<BackupPair> backups;
  std::vector<PromotablePair> promotables;
  /// Per trafficker node index: reductions of its interdiction cost.
  std::vector<std::vector<Reduction>> reductions;
  std::vector<OperationGroup> operations;
  CostSchedule schedule;
  std::size_t source = 0;
  std::size_t sink = 0;
  int big_m = 0;

  // Derived lookups, rebuilt by finalize().
  /// Victims h with a base arc (trafficker, h), per trafficker.
  std::vector<std::vector<std::size_t>> own_victims;
  /// Traffickers h with a base arc (h, victim), per victim.
  std::vector<std::vector<std::size_t>> controlling_traffickers;
  std::unordered_map<NodeId, std::size_t> id_index;

  void finalize();
  std::size_t index_of(NodeId id) const;
  std::size_t size() const { return nodes.size(); }
  bool interdictable(std::size_t node) const;
  NodeMask empty_mask() const { return NodeMask(nodes.size(), 0); }
  NodeMask mask_of(const std::vector<NodeId>& ids) const;
  std::vector<NodeId> ids_of(const NodeMask& mask) const;
  int victims_and_bottoms() const;
};

/// Orients the network, adds source/sink, latent recruitable and back-up
/// nodes, and every restructure-able arc. `rng` drives recruit eligibility
/// and the choice of promotable victims. Throws InvalidNetwork when
/// validate_network reports anything.
InterdictionInstance build_instance(const TraffickingNetwork& net, const CostSchedule& sched,
                                    Rng& rng);

/// Sub-instance induced by `keep` (source and sink are always kept). Arcs,
/// restructure-able arcs, latent pairs and reductions survive only when all
/// their nodes do, including the bottom a promotion replaces. NodeIds are preserved.
InterdictionInstance induced_subinstance(const InterdictionInstance& inst,
                                         const std::vector<std::size_t>& keep);

}  // namespace htnet

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htnet/flow.hpp"
#include "htnet/instance.hpp"

namespace htnet {

/// Feasibility rules on a restructuring plan, in reporting order.
enum class Rule {
  Budget,                  // owner's spend <= b_restructure
  OutTrigger,              // trafficker out-recruitments <= own interdicted victims
  InTrigger,               // in-recruitments of a victim <= its interdicted traffickers
  BackupTrigger,           // back-up only for an interdicted trafficker
  PromotionTrigger,        // promotion only when the operation's bottom is interdicted
  PromotedNotInterdicted,  // an interdicted victim cannot be promoted
  SinglePromotion,         // at most one promotion per operation
  PromotionGate,           // assignment to a promoted victim needs the promotion
  SingleRecruitment,       // a victim joins at most one operation
  DirectionExclusive,      // an arc is not both out- and in-activated
};

std::string to_string(Rule rule);

struct Violation {
  Rule rule;
  std::string message;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

/// Checks every rule and reports all violations. Throws std::invalid_argument
/// on structural problems (bad mask size, arc index out of range, In on an arc
/// that only allows Out).
FeasibilityReport is_feasible(const InterdictionInstance& inst, const NodeMask& y,
                              const RestructuringPlan& z);

/// Incremental rule bookkeeping for one fixed y. Activations are added and
/// removed in LIFO order by the searches.
class FeasibilityTracker {
 public:
  FeasibilityTracker(const InterdictionInstance& inst, const NodeMask& y);

  /// Whether activating `arc` in `mode` keeps the current state feasible.
  bool allowed(std::size_t arc, std::uint8_t mode) const;
  void add(std::size_t arc, std::uint8_t mode);
  void remove(std::size_t arc);
  const ActivationState& state() const { return state_; }
  bool allowed_ignoring_gate(std::size_t arc, std::uint8_t mode) const;
  /// Feasible in isolation and able to carry flow under y.
  bool useful(std::size_t arc, std::uint8_t mode) const;
  int budget_left(std::size_t owner) const;
  int out_left(std::size_t trafficker) const { return out_limit_[trafficker] - out_used_[trafficker]; }

 private:
  const InterdictionInstance* inst_;
  const NodeMask* y_;
  ActivationState state_;
  std::vector<int> spent_;
  std::vector<int> out_used_, out_limit_;
  std::vector<int> in_used_, in_limit_;
  std::vector<int> recruited_;
  std::vector<int> promotions_;
  /// Trigger node per arc: trafficker for back-ups, bottom for promotions.
  std::vector<std::size_t> trigger_;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t flow_evaluations = 0;
};

struct DefenderResult {
  RestructuringPlan plan;
  FlowAssignment flow;
  bool optimal = true;
  SearchStats explored;
  int value() const { return flow.value; }
};

struct DefenderOptions {
  /// 0 = unlimited.
  std::size_t node_limit = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Exact defender optimum by depth-first branch and bound. Arcs are branched
/// in canonical order with choices skip, Out, In; the bound enables every
/// still-admissible remaining arc for free. Among optimal plans the
/// lexicographically smallest activation vector is returned.
class DefenderSolver {
 public:
  explicit DefenderSolver(const InterdictionInstance& inst);

  DefenderResult solve(const NodeMask& y, const DefenderOptions& opt = {});
  /// Value only (skips building the flow assignment).
  int solve_value(const NodeMask& y, RestructuringPlan* plan = nullptr,
                  const DefenderOptions& opt = {});
  FlowEvaluator& evaluator() { return flow_; }
  /// False when the last solve hit its node limit or deadline.
  bool last_optimal() const { return !aborted_; }

 private:
  struct Candidate {
    std::size_t arc;
    std::vector<std::uint8_t> modes;
  };
  /// Relaxed network used for bounds: each remaining arc of a group runs
  /// through a gadget whose capacity reflects the owner's budget and triggers.
  struct BoundGraph {
    Dinic graph;
    std::vector<std::size_t> node_edge, direct_edge, hub_edge;
    std::vector<std::vector<std::size_t>> gadget_edges;  // per arc
    std::vector<std::size_t> entry_edge;                 // per group
    std::vector<std::vector<std::size_t>> group_arcs;    // per group
    std::vector<std::size_t> group_from;
    std::vector<std::uint8_t> group_mode;
    std::vector<int> group_kind;
    std::vector<std::optional<std::size_t>> group_hub;
    /// A hub shares one trafficker's budget between its out and in groups.
    std::vector<std::size_t> hub_from;
    std::vector<std::vector<std::size_t>> hub_groups;
    std::vector<std::size_t> gain_edge;  // per owner gain hub
    std::vector<std::size_t> bypass_in, bypass_out, bypass_hub;  // per promotable
  };
  void build_bound_graph();
  int greedy(FeasibilityTracker& tr, ActivationState& out);
  void dfs(std::size_t pos, int cur_val);
  int upper_bound(std::size_t pos);
  bool out_of_time();

  const InterdictionInstance* inst_;
  FlowEvaluator flow_;
  BoundGraph bound_;
  std::vector<std::vector<std::pair<std::size_t, int>>> promotion_;
  std::vector<std::uint8_t> possible_;

  // Per-solve state.
  const NodeMask* y_ = nullptr;
  FeasibilityTracker* tracker_ = nullptr;
  std::vector<Candidate> cands_;
  int best_val_ = 0;
  bool found_ = false;
  bool aborted_ = false;
  ActivationState best_state_;
  ActivationState scratch_;
  SearchStats stats_;
  DefenderOptions opt_;
};

DefenderResult solve_defender(const InterdictionInstance& inst, const NodeMask& y,
                              const DefenderOptions& opt = {});

/// Keeps z's activations, in arc order, while they stay feasible under y.
RestructuringPlan feasible_components(const InterdictionInstance& inst, const NodeMask& y,
                                      const RestructuringPlan& z);

}  // namespace htnet

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "htnet/instance.hpp"

namespace htnet {

/// Activation of each restructure-able arc, parallel to instance.restruct_arcs.
enum : std::uint8_t { kInactive = 0, kOut = 1, kIn = 2 };
using ActivationState = std::vector<std::uint8_t>;

/// Arcs switched on by the defender, as sorted indices into restruct_arcs.
struct RestructuringPlan {
  std::vector<std::size_t> activated_out;
  std::vector<std::size_t> activated_in;

  bool empty() const { return activated_out.empty() && activated_in.empty(); }
  std::size_t size() const { return activated_out.size() + activated_in.size(); }
  bool operator==(const RestructuringPlan&) const = default;
  auto operator<=>(const RestructuringPlan&) const = default;
};

/// Throws std::invalid_argument on out-of-range indices or an arc listed in
/// both sets.
ActivationState to_state(const InterdictionInstance& inst, const RestructuringPlan& plan);
RestructuringPlan to_plan(const ActivationState& state);

struct FlowAssignment {
  std::vector<int> arc_flow;       // parallel to instance.arcs
  std::vector<int> restruct_flow;  // parallel to instance.restruct_arcs
  std::vector<int> node_flow;      // throughput per node
  int value = 0;
};

/// Only positive-capacity elements are listed; their capacities sum to value.
struct CutResult {
  int value = 0;
  /// Nodes whose internal (split) arc is cut.
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> arcs;
  std::vector<std::size_t> restruct_arcs;
  /// 1 when the node's outgoing half is reachable from the source in the residual graph.
  std::vector<std::uint8_t> source_side;
};

/// Integral Dinic max flow on a fixed graph whose capacities can be reset.
class Dinic {
 public:
  explicit Dinic(std::size_t n = 0);
  std::size_t add_edge(std::size_t from, std::size_t to, int cap);
  void set_capacity(std::size_t edge, int cap) { cap_[edge] = cap; }
  int capacity(std::size_t edge) const { return cap_[edge]; }
  int run(std::size_t s, std::size_t t);
  /// Flow on an edge after run().
  int flow(std::size_t edge) const { return cap_[edge] - res_[edge]; }
  /// Residual reachability from s after run().
  std::vector<std::uint8_t> reachable(std::size_t s) const;
  std::size_t vertex_count() const { return head_.size(); }

 private:
  bool bfs(std::size_t s, std::size_t t);
  int dfs(std::size_t v, std::size_t t, int pushed);

  std::vector<std::vector<std::size_t>> head_;
  std::vector<std::size_t> to_;
  std::vector<int> cap_;
  std::vector<int> res_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

/// Max flow on the node-split instance. Node i becomes 2i (in) -> 2i+1 (out)
/// with the node's effective capacity; every arc runs out(from) -> in(to).
/// Reuse one evaluator for many (y, z) pairs on the same instance.
class FlowEvaluator {
 public:
  explicit FlowEvaluator(const InterdictionInstance& inst);

  /// Max-flow value. `state` may be empty (no restructuring).
  int value(const NodeMask& y, const ActivationState& state);
  FlowAssignment assignment(const NodeMask& y, const ActivationState& state);
  CutResult cut(const NodeMask& y, const ActivationState& state);

  const InterdictionInstance& instance() const { return *inst_; }

 private:
  void load(const NodeMask& y, const ActivationState& state);

  const InterdictionInstance* inst_;
  Dinic graph_;
  std::vector<std::size_t> node_edge_;
  std::vector<std::size_t> arc_edge_;
  std::vector<std::size_t> restruct_edge_;
  /// Promotion arc index per node, if the node is promotable.
  std::vector<std::vector<std::pair<std::size_t, int>>> promotion_;
};

/// Structural validity of (y, plan) for the instance. Throws
/// std::invalid_argument on a mask of the wrong size or a bad plan.
void check_structure(const InterdictionInstance& inst, const NodeMask& y);

FlowAssignment max_flow(const InterdictionInstance& inst, const NodeMask& y,
                        const RestructuringPlan& z);
CutResult min_cut(const InterdictionInstance& inst, const NodeMask& y, const RestructuringPlan& z);

}  // namespace htnet

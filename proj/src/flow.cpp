#include "htnet/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace htnet {

ActivationState to_state(const InterdictionInstance& inst, const RestructuringPlan& plan) {
  ActivationState s(inst.restruct_arcs.size(), kInactive);
  auto mark = [&](std::size_t a, std::uint8_t mode) {
    if (a >= s.size())
      throw std::invalid_argument("restructure arc " + std::to_string(a) + " out of range");
    if (s[a] != kInactive)
      throw std::invalid_argument("restructure arc " + std::to_string(a) + " listed twice");
    s[a] = mode;
  };
  for (auto a : plan.activated_out) mark(a, kOut);
  for (auto a : plan.activated_in) mark(a, kIn);
  return s;
}

RestructuringPlan to_plan(const ActivationState& state) {
  RestructuringPlan p;
  for (std::size_t a = 0; a < state.size(); ++a) {
    if (state[a] == kOut) p.activated_out.push_back(a);
    if (state[a] == kIn) p.activated_in.push_back(a);
  }
  return p;
}

Dinic::Dinic(std::size_t n) : head_(n) {}

std::size_t Dinic::add_edge(std::size_t from, std::size_t to, int cap) {
  const std::size_t e = to_.size();
  to_.push_back(to);
  cap_.push_back(cap);
  head_[from].push_back(e);
  to_.push_back(from);
  cap_.push_back(0);
  head_[to].push_back(e + 1);
  return e;
}

bool Dinic::bfs(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  level_[s] = 0;
  std::deque<std::size_t> q{s};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto e : head_[v]) {
      if (res_[e] > 0 && level_[to_[e]] < 0) {
        level_[to_[e]] = level_[v] + 1;
        q.push_back(to_[e]);
      }
    }
  }
  return level_[t] >= 0;
}

int Dinic::dfs(std::size_t v, std::size_t t, int pushed) {
  if (v == t) return pushed;
  for (auto& i = it_[v]; i < head_[v].size(); ++i) {
    auto e = head_[v][i];
    auto w = to_[e];
    if (res_[e] <= 0 || level_[w] != level_[v] + 1) continue;
    int got = dfs(w, t, std::min(pushed, res_[e]));
    if (got > 0) {
      res_[e] -= got;
      res_[e ^ 1] += got;
      return got;
    }
  }
  return 0;
}

int Dinic::run(std::size_t s, std::size_t t) {
  res_ = cap_;
  // Reverse edges start empty regardless of what cap_ holds for them.
  for (std::size_t e = 1; e < res_.size(); e += 2) res_[e] = 0;
  level_.assign(head_.size(), -1);
  it_.assign(head_.size(), 0);
  int total = 0;
  while (bfs(s, t)) {
    std::fill(it_.begin(), it_.end(), 0);
    while (int f = dfs(s, t, std::numeric_limits<int>::max())) total += f;
  }
  return total;
}

std::vector<std::uint8_t> Dinic::reachable(std::size_t s) const {
  std::vector<std::uint8_t> seen(head_.size(), 0);
  seen[s] = 1;
  std::deque<std::size_t> q{s};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto e : head_[v])
      if (res_[e] > 0 && !seen[to_[e]]) {
        seen[to_[e]] = 1;
        q.push_back(to_[e]);
      }
  }
  return seen;
}

FlowEvaluator::FlowEvaluator(const InterdictionInstance& inst)
    : inst_(&inst), graph_(2 * inst.nodes.size()), promotion_(inst.nodes.size()) {
  const auto n = inst.nodes.size();
  for (std::size_t i = 0; i < n; ++i) node_edge_.push_back(graph_.add_edge(2 * i, 2 * i + 1, 0));
  for (const auto& a : inst.arcs)
    arc_edge_.push_back(graph_.add_edge(2 * a.from + 1, 2 * a.to, a.capacity));
  for (const auto& a : inst.restruct_arcs)
    restruct_edge_.push_back(graph_.add_edge(2 * a.from + 1, 2 * a.to, 0));
  for (const auto& p : inst.promotables) promotion_[p.victim].push_back({p.activation, p.gain});
}

void FlowEvaluator::load(const NodeMask& y, const ActivationState& state) {
  const auto& inst = *inst_;
  check_structure(inst, y);
  if (!state.empty() && state.size() != inst.restruct_arcs.size())
    throw std::invalid_argument("activation state does not match the instance");
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    int cap = y[i] ? 0 : inst.nodes[i].capacity;
    if (!y[i] && !state.empty())
      for (auto [arc, gain] : promotion_[i])
        if (state[arc] != kInactive) cap += gain;
    graph_.set_capacity(node_edge_[i], cap);
  }
  for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a)
    graph_.set_capacity(restruct_edge_[a],
                        !state.empty() && state[a] != kInactive ? inst.big_m : 0);
}

int FlowEvaluator::value(const NodeMask& y, const ActivationState& state) {
  load(y, state);
  return graph_.run(2 * inst_->source + 1, 2 * inst_->sink);
}

FlowAssignment FlowEvaluator::assignment(const NodeMask& y, const ActivationState& state) {
  FlowAssignment f;
  f.value = value(y, state);
  for (auto e : arc_edge_) f.arc_flow.push_back(graph_.flow(e));
  for (auto e : restruct_edge_) f.restruct_flow.push_back(graph_.flow(e));
  for (std::size_t i = 0; i < node_edge_.size(); ++i) f.node_flow.push_back(graph_.flow(node_edge_[i]));
  // Terminals carry the full value even though their split arc is bypassed.
  f.node_flow[inst_->source] = f.value;
  f.node_flow[inst_->sink] = f.value;
  return f;
}

CutResult FlowEvaluator::cut(const NodeMask& y, const ActivationState& state) {
  CutResult c;
  c.value = value(y, state);
  const auto seen = graph_.reachable(2 * inst_->source + 1);
  const auto& inst = *inst_;
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    c.source_side.push_back(seen[2 * i + 1]);
    if (i != inst.source && i != inst.sink && seen[2 * i] && !seen[2 * i + 1] &&
        graph_.capacity(node_edge_[i]) > 0)
      c.nodes.push_back(i);
  }
  for (std::size_t a = 0; a < inst.arcs.size(); ++a)
    if (seen[2 * inst.arcs[a].from + 1] && !seen[2 * inst.arcs[a].to] &&
        graph_.capacity(arc_edge_[a]) > 0)
      c.arcs.push_back(a);
  for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a)
    if (seen[2 * inst.restruct_arcs[a].from + 1] && !seen[2 * inst.restruct_arcs[a].to] &&
        graph_.capacity(restruct_edge_[a]) > 0)
      c.restruct_arcs.push_back(a);
  return c;
}

void check_structure(const InterdictionInstance& inst, const NodeMask& y) {
  if (y.size() != inst.nodes.size())
    throw std::invalid_argument("interdiction mask has " + std::to_string(y.size()) +
                                " entries, instance has " + std::to_string(inst.nodes.size()) +
                                " nodes");
  if (y[inst.source] || y[inst.sink])
    throw std::invalid_argument("source and sink cannot be interdicted");
}

FlowAssignment max_flow(const InterdictionInstance& inst, const NodeMask& y,
                        const RestructuringPlan& z) {
  FlowEvaluator ev(inst);
  return ev.assignment(y, to_state(inst, z));
}

CutResult min_cut(const InterdictionInstance& inst, const NodeMask& y, const RestructuringPlan& z) {
  FlowEvaluator ev(inst);
  return ev.cut(y, to_state(inst, z));
}

}  // namespace htnet

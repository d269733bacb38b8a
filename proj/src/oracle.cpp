#include "htnet/oracle.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <string>

namespace htnet {

namespace {

using Matrix = std::vector<std::vector<long long>>;

long long edmonds_karp(Matrix cap, std::size_t s, std::size_t t) {
  const auto n = cap.size();
  long long total = 0;
  while (true) {
    std::vector<long long> parent(n, -1);
    parent[s] = static_cast<long long>(s);
    std::deque<std::size_t> q{s};
    while (!q.empty() && parent[t] < 0) {
      auto u = q.front();
      q.pop_front();
      for (std::size_t v = 0; v < n; ++v)
        if (parent[v] < 0 && cap[u][v] > 0) {
          parent[v] = static_cast<long long>(u);
          q.push_back(v);
        }
    }
    if (parent[t] < 0) return total;
    long long push = LLONG_MAX;
    for (auto v = t; v != s; v = static_cast<std::size_t>(parent[v]))
      push = std::min(push, cap[static_cast<std::size_t>(parent[v])][v]);
    for (auto v = t; v != s; v = static_cast<std::size_t>(parent[v])) {
      const auto u = static_cast<std::size_t>(parent[v]);
      cap[u][v] -= push;
      cap[v][u] += push;
    }
    total += push;
  }
}

int max_flow_unguarded(const InterdictionInstance& inst, const NodeMask& y, const ActivationState& z) {
  const auto n = inst.nodes.size();
  Matrix cap(2 * n, std::vector<long long>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    long long c = y[i] ? 0 : inst.nodes[i].capacity;
    if (!y[i])
      for (const auto& p : inst.promotables)
        if (p.victim == i && !z.empty() && z[p.activation]) c += p.gain;
    cap[2 * i][2 * i + 1] = c;
  }
  for (const auto& a : inst.arcs) cap[2 * a.from + 1][2 * a.to] += a.capacity;
  for (std::size_t k = 0; k < inst.restruct_arcs.size(); ++k)
    if (!z.empty() && z[k]) {
      const auto& a = inst.restruct_arcs[k];
      cap[2 * a.from + 1][2 * a.to] += inst.big_m;
    }
  return static_cast<int>(edmonds_karp(std::move(cap), 2 * inst.source + 1, 2 * inst.sink));
}

bool person(NodeRole r) {
  return r == NodeRole::Trafficker || r == NodeRole::Bottom || r == NodeRole::Victim;
}

void guard(const InterdictionInstance& inst, const OracleLimits& limits) {
  std::size_t persons = 0;
  for (const auto& node : inst.nodes) persons += person(node.role) ? 1 : 0;
  if (persons > limits.max_person_nodes)
    throw OracleRefusal("oracle refuses " + std::to_string(persons) + " person nodes (limit " +
                        std::to_string(limits.max_person_nodes) + ")");
  if (inst.restruct_arcs.size() > limits.max_restruct_arcs)
    throw OracleRefusal("oracle refuses " + std::to_string(inst.restruct_arcs.size()) +
                        " restructure arcs (limit " + std::to_string(limits.max_restruct_arcs) + ")");
}

bool recruits(RestructCategory c) {
  return c == RestructCategory::Recruit || c == RestructCategory::KnownVictim ||
         c == RestructCategory::TakeFromBottom;
}

// Rule data re-derived from base arcs and operation records.
struct Rules {
  const InterdictionInstance* inst;
  std::vector<int> out_allow;  // per node
  std::vector<int> in_allow;   // per node
  std::vector<int> trigger;    // per arc: node that must be interdicted, -1 if none
  std::vector<int> needs_promotion_of;  // per arc: victim whose promotion gates it, -1 if none

  Rules(const InterdictionInstance& in, const NodeMask& y) : inst(&in) {
    const auto n = in.nodes.size();
    out_allow.assign(n, 0);
    in_allow.assign(n, 0);
    for (const auto& a : in.arcs)
      if (in.nodes[a.from].role == NodeRole::Trafficker && in.nodes[a.to].role == NodeRole::Victim &&
          y[a.to])
        ++out_allow[a.from];
    for (const auto& a : in.arcs)
      if (in.nodes[a.from].role == NodeRole::Trafficker && in.nodes[a.to].role == NodeRole::Victim &&
          y[a.from])
        ++in_allow[a.to];
    trigger.assign(in.restruct_arcs.size(), -1);
    needs_promotion_of.assign(in.restruct_arcs.size(), -1);
    for (std::size_t k = 0; k < in.restruct_arcs.size(); ++k) {
      const auto& a = in.restruct_arcs[k];
      if (a.category == RestructCategory::BackupActivate) {
        for (const auto& op : in.operations)
          if (op.backup && *op.backup == a.to) trigger[k] = static_cast<int>(op.trafficker);
      } else if (a.category == RestructCategory::PromoteActivate) {
        for (const auto& op : in.operations)
          if (op.trafficker == a.owner && op.bottom) trigger[k] = static_cast<int>(*op.bottom);
      } else if (a.category == RestructCategory::AssignToPromoted) {
        needs_promotion_of[k] = static_cast<int>(a.from);
      }
    }
  }

  // Checks the whole state; rules are counted from scratch. Without gates
  // every rule is closed under removing activations.
  bool feasible(const NodeMask& y, const ActivationState& z, bool gates = true) const {
    const auto& in = *inst;
    const auto n = in.nodes.size();
    std::vector<int> spend(n, 0), outs(n, 0), ins(n, 0), recruited(n, 0), promotions(n, 0);
    std::vector<std::uint8_t> promoted(n, 0);
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (!z[k]) continue;
      const auto& a = in.restruct_arcs[k];
      if (z[k] != kOut && z[k] != kIn) return false;
      if (z[k] == kIn && !a.allows_in) return false;
      spend[a.owner] += a.cost;
      if (z[k] == kOut && recruits(a.category) && in.nodes[a.from].role == NodeRole::Trafficker)
        ++outs[a.from];
      if (z[k] == kIn) ++ins[a.to];
      if (recruits(a.category)) ++recruited[a.to];
      if (trigger[k] >= 0 && !y[static_cast<std::size_t>(trigger[k])]) return false;
      if (a.category == RestructCategory::PromoteActivate) {
        if (y[a.to]) return false;
        ++promotions[a.owner];
        promoted[a.to] = 1;
      }
    }
    for (std::size_t k = 0; gates && k < z.size(); ++k)
      if (z[k] && needs_promotion_of[k] >= 0 && !promoted[static_cast<std::size_t>(needs_promotion_of[k])])
        return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (spend[i] > in.schedule.b_restructure) return false;
      if (outs[i] > out_allow[i]) return false;
      if (ins[i] > in_allow[i]) return false;
      if (recruited[i] > 1) return false;
      if (promotions[i] > 1) return false;
    }
    return true;
  }
};

bool mask_less(const NodeMask& a, const NodeMask& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

int oracle_max_flow(const InterdictionInstance& inst, const NodeMask& y, const ActivationState& z,
                    const OracleLimits& limits) {
  if (inst.nodes.size() > limits.max_flow_nodes + 2)
    throw OracleRefusal("oracle max flow refuses " + std::to_string(inst.nodes.size()) + " nodes");
  check_structure(inst, y);
  if (!z.empty() && z.size() != inst.restruct_arcs.size())
    throw std::invalid_argument("activation state does not match the instance");
  return max_flow_unguarded(inst, y, z);
}

int oracle_cost(const InterdictionInstance& inst, const NodeMask& y) {
  int total = 0;
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    if (!y[i]) continue;
    int c = inst.nodes[i].cost;
    if (inst.nodes[i].role == NodeRole::Trafficker) {
      for (const auto& r : inst.reductions[i]) c -= y[r.node] ? r.amount : 0;
      c = std::max(c, inst.schedule.r_min);
    }
    total += c;
  }
  return total;
}

bool oracle_feasible(const InterdictionInstance& inst, const NodeMask& y, const ActivationState& z) {
  return Rules(inst, y).feasible(y, z);
}

std::vector<ActivationState> oracle_defender_plans(const InterdictionInstance& inst, const NodeMask& y,
                                                   const OracleLimits& limits) {
  guard(inst, limits);
  const Rules rules(inst, y);
  const auto m = inst.restruct_arcs.size();
  std::vector<ActivationState> out;
  ActivationState z(m, kInactive);
  // Lexicographic enumeration, last arc varying fastest.
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (!rules.feasible(y, z, false)) return;
    if (k == m) {
      if (rules.feasible(y, z)) out.push_back(z);
      return;
    }
    self(self, k + 1);
    z[k] = kOut;
    self(self, k + 1);
    if (inst.restruct_arcs[k].allows_in) {
      z[k] = kIn;
      self(self, k + 1);
    }
    z[k] = kInactive;
  };
  rec(rec, 0);
  return out;
}

OracleResult oracle_defender(const InterdictionInstance& inst, const NodeMask& y,
                             const OracleLimits& limits) {
  check_structure(inst, y);
  OracleResult r;
  r.optimum = -1;
  for (auto& z : oracle_defender_plans(inst, y, limits)) {
    const int v = max_flow_unguarded(inst, y, z);
    ++r.enumerated;
    if (v > r.optimum) {
      r.optimum = v;
      r.optimal_plans.clear();
    }
    if (v == r.optimum) r.optimal_plans.push_back({y, std::move(z)});
  }
  return r;
}

std::vector<NodeMask> oracle_interdiction_plans(const InterdictionInstance& inst, int budget,
                                                bool include_latent, const OracleLimits& limits) {
  guard(inst, limits);
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    const auto r = inst.nodes[i].role;
    if (r == NodeRole::Source || r == NodeRole::Sink) continue;
    if (!person(r) && (!include_latent || !inst.schedule.latent_interdictable)) continue;
    cand.push_back(i);
  }
  // Cost never drops when a node is added (reductions are at most the
  // reducing node's own cost), so over-budget branches are cut.
  std::vector<NodeMask> out;
  NodeMask y = inst.empty_mask();
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (oracle_cost(inst, y) > budget) return;
    if (k == cand.size()) {
      out.push_back(y);
      return;
    }
    self(self, k + 1);
    y[cand[k]] = 1;
    self(self, k + 1);
    y[cand[k]] = 0;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), mask_less);
  return out;
}

OracleResult oracle_mfnip(const InterdictionInstance& inst, int budget, const OracleLimits& limits) {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  OracleResult r;
  r.optimum = INT_MAX;
  for (auto& y : oracle_interdiction_plans(inst, budget, false, limits)) {
    const int v = max_flow_unguarded(inst, y, {});
    ++r.enumerated;
    if (v < r.optimum) {
      r.optimum = v;
      r.optimal_plans.clear();
    }
    if (v == r.optimum) r.optimal_plans.push_back({y, ActivationState(inst.restruct_arcs.size(), kInactive)});
  }
  return r;
}

OracleResult oracle_mfnip_r(const InterdictionInstance& inst, int budget, const OracleLimits& limits) {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  OracleResult r;
  r.optimum = INT_MAX;
  for (const auto& y : oracle_interdiction_plans(inst, budget, true, limits)) {
    auto best = oracle_defender(inst, y, limits);
    r.enumerated += best.enumerated;
    if (best.optimum < r.optimum) {
      r.optimum = best.optimum;
      r.optimal_plans.clear();
    }
    if (best.optimum == r.optimum)
      for (auto& p : best.optimal_plans) r.optimal_plans.push_back(std::move(p));
  }
  return r;
}

}  // namespace htnet

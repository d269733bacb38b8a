#pragma once

// Hand-built networks for tests.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "htnet/core.hpp"
#include "htnet/generator.hpp"
#include "htnet/instance.hpp"

namespace htnet::test {

struct MicroOp {
  bool bottom = false;
  std::vector<std::vector<AgeClass>> pods;
  std::vector<std::size_t> trafficker_pods;
  std::vector<std::size_t> bottom_pods;
};

/// Operations are numbered trafficker, bottom, victims (pod-major). Social
/// ties are given as (operation, flat victim index) pairs.
struct MicroNet {
  TraffickingNetwork net;
  std::vector<std::vector<NodeId>> victims;  // per operation
  std::vector<NodeId> traffickers;
  std::vector<std::optional<NodeId>> bottoms;
};

inline void add_arc(TraffickingNetwork& net, NodeId a, NodeId b, ArcKind kind) {
  if (b < a) std::swap(a, b);
  net.arcs.push_back(Arc{a, b, kind, false});
}

inline MicroNet micro_network(const std::vector<MicroOp>& ops) {
  MicroNet m;
  m.net.config_snapshot = default_generator_config();
  std::uint32_t next = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const MicroOp& spec = ops[k];
    Operation op;
    op.trafficker = NodeId{next++};
    m.net.persons[op.trafficker] = Person{op.trafficker, Role::Trafficker, AgeClass::NotApplicable, k};
    if (spec.bottom) {
      op.bottom = NodeId{next++};
      m.net.persons[*op.bottom] = Person{*op.bottom, Role::Bottom, AgeClass::Adult, k};
    }
    std::vector<NodeId> flat;
    for (const auto& ages : spec.pods) {
      Pod pod;
      for (AgeClass a : ages) {
        NodeId v{next++};
        m.net.persons[v] = Person{v, Role::Victim, a, k};
        pod.members.push_back(v);
        pod.ages.push_back(a);
        flat.push_back(v);
      }
      for (std::size_t i = 0; i < pod.members.size(); ++i)
        for (std::size_t j = i + 1; j < pod.members.size(); ++j)
          add_arc(m.net, pod.members[i], pod.members[j], ArcKind::Operational);
      op.pods.push_back(std::move(pod));
    }
    op.trafficker_pods = spec.trafficker_pods;
    op.bottom_pods = spec.bottom_pods;
    for (std::size_t p : spec.trafficker_pods)
      for (NodeId v : op.pods[p].members) {
        op.trafficker_victims.push_back(v);
        add_arc(m.net, op.trafficker, v, ArcKind::Operational);
      }
    for (std::size_t p : spec.bottom_pods)
      for (NodeId v : op.pods[p].members) {
        op.bottom_victims.push_back(v);
        add_arc(m.net, *op.bottom, v, ArcKind::Operational);
      }
    std::sort(op.trafficker_victims.begin(), op.trafficker_victims.end());
    std::sort(op.bottom_victims.begin(), op.bottom_victims.end());
    m.traffickers.push_back(op.trafficker);
    m.bottoms.push_back(op.bottom);
    m.victims.push_back(flat);
    m.net.operations.push_back(std::move(op));
  }
  return m;
}

inline void add_social(MicroNet& m, NodeId a, NodeId b) { add_arc(m.net, a, b, ArcKind::Social); }

inline void add_trafficker_tie(MicroNet& m, std::size_t i, std::size_t j) {
  NodeId a = m.traffickers[i], b = m.traffickers[j];
  if (b < a) std::swap(a, b);
  m.net.trafficker_social.push_back(Arc{a, b, ArcKind::Social, false});
}

constexpr AgeClass kA = AgeClass::Adult;
constexpr AgeClass kM = AgeClass::Minor;

/// T1: trafficker with pod {v1, v2}, bottom with {v3}.
inline MicroNet t1_network() {
  return micro_network({MicroOp{true, {{kA, kA}, {kA}}, {0}, {1}}});
}

/// M1: trafficker with two victims, no bottom.
inline MicroNet m1_network() { return micro_network({MicroOp{false, {{kA, kA}}, {0}, {}}}); }

inline InterdictionInstance build(const MicroNet& m, const CostSchedule& s = default_schedule(),
                                  std::uint64_t seed = 1) {
  Rng rng(seed);
  return build_instance(m.net, s, rng);
}

}  // namespace htnet::test

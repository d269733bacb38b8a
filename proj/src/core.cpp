#include "htnet/core.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace htnet {

std::string to_string(Role role) {
  switch (role) {
    case Role::Trafficker: return "trafficker";
    case Role::Bottom: return "bottom";
    case Role::Victim: return "victim";
  }
  return "?";
}

std::string to_string(AgeClass age) {
  switch (age) {
    case AgeClass::Minor: return "minor";
    case AgeClass::Adult: return "adult";
    case AgeClass::NotApplicable: return "n/a";
  }
  return "?";
}

std::string to_string(ArcKind kind) {
  return kind == ArcKind::Operational ? "operational" : "social";
}

Role role_from_string(const std::string& s) {
  if (s == "trafficker") return Role::Trafficker;
  if (s == "bottom") return Role::Bottom;
  if (s == "victim") return Role::Victim;
  throw std::invalid_argument("unknown role: " + s);
}

AgeClass age_from_string(const std::string& s) {
  if (s == "minor") return AgeClass::Minor;
  if (s == "adult") return AgeClass::Adult;
  if (s == "n/a") return AgeClass::NotApplicable;
  throw std::invalid_argument("unknown age class: " + s);
}

ArcKind arc_kind_from_string(const std::string& s) {
  if (s == "operational") return ArcKind::Operational;
  if (s == "social") return ArcKind::Social;
  throw std::invalid_argument("unknown arc kind: " + s);
}

PodClass pod_class(const Pod& pod) {
  bool minor = false;
  bool adult = false;
  for (auto age : pod.ages) {
    minor |= age == AgeClass::Minor;
    adult |= age == AgeClass::Adult;
  }
  if (minor && adult) return PodClass::Mixed;
  return minor ? PodClass::Minor : PodClass::Adult;
}

std::vector<NodeId> Operation::victims() const {
  std::vector<NodeId> out;
  for (const auto& pod : pods) out.insert(out.end(), pod.members.begin(), pod.members.end());
  return out;
}

std::size_t Operation::victim_count() const {
  std::size_t n = 0;
  for (const auto& pod : pods) n += pod.members.size();
  return n;
}

const Person& TraffickingNetwork::person(NodeId id) const {
  auto it = persons.find(id);
  if (it == persons.end()) throw std::out_of_range("unknown node " + std::to_string(id.value));
  return it->second;
}

std::size_t TraffickingNetwork::count(Role role) const {
  return static_cast<std::size_t>(std::count_if(
      persons.begin(), persons.end(), [role](const auto& kv) { return kv.second.role == role; }));
}

namespace {

std::string node_name(NodeId id) { return "node " + std::to_string(id.value); }

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

std::vector<std::string> validate_network(const TraffickingNetwork& net) {
  std::vector<std::string> out;
  auto known = [&](NodeId id) { return net.persons.count(id) != 0; };

  // Node-count identity: every person referenced by an operation exists and
  // nobody exists outside an operation.
  {
    std::set<NodeId> referenced;
    std::size_t expected = 0;
    for (const auto& op : net.operations) {
      referenced.insert(op.trafficker);
      ++expected;
      if (op.bottom) {
        referenced.insert(*op.bottom);
        ++expected;
      }
      for (auto v : op.victims()) referenced.insert(v);
      expected += op.victim_count();
    }
    std::vector<NodeId> missing;
    std::vector<NodeId> extra;
    for (auto id : referenced)
      if (!known(id)) missing.push_back(id);
    for (const auto& [id, _] : net.persons)
      if (!referenced.count(id)) extra.push_back(id);
    if (net.persons.size() != expected || !missing.empty() || !extra.empty()) {
      std::ostringstream msg;
      msg << "node count " << net.persons.size()
          << " != traffickers + bottoms + victims (" << expected << ")";
      for (auto id : missing) msg << "; missing " << node_name(id);
      for (auto id : extra) msg << "; unreferenced " << node_name(id);
      out.push_back(msg.str());
    }
  }

  for (const auto& [id, p] : net.persons) {
    if (p.id != id) out.push_back(node_name(id) + ": person id mismatch");
    bool aged = p.age == AgeClass::Minor || p.age == AgeClass::Adult;
    if (p.role == Role::Trafficker && p.age != AgeClass::NotApplicable)
      out.push_back(node_name(id) + ": trafficker must have no age class");
    if (p.role != Role::Trafficker && !aged)
      out.push_back(node_name(id) + ": " + to_string(p.role) + " must be minor or adult");
  }

  // Arc set: no self-loops, no duplicates, known endpoints.
  std::set<std::tuple<NodeId, NodeId, ArcKind>> seen;
  std::set<std::pair<NodeId, NodeId>> operational;
  auto check_arc = [&](const Arc& a, const char* layer) {
    if (!known(a.from) || !known(a.to)) return;
    if (a.from == a.to) {
      out.push_back(std::string(layer) + " arc: self-loop at " + node_name(a.from));
      return;
    }
    auto [u, v] = a.directed ? std::pair{a.from, a.to} : ordered(a.from, a.to);
    if (!seen.insert({u, v, a.kind}).second)
      out.push_back(std::string(layer) + " arc: duplicate " + node_name(u) + " - " + node_name(v));
    if (a.kind == ArcKind::Operational) operational.insert(ordered(a.from, a.to));
  };
  for (const auto& a : net.arcs) check_arc(a, "network");
  for (const auto& a : net.trafficker_social) {
    check_arc(a, "trafficker social");
    if (known(a.from) && known(a.to) &&
        (net.person(a.from).role != Role::Trafficker || net.person(a.to).role != Role::Trafficker))
      out.push_back("trafficker social arc joins a non-trafficker: " + node_name(a.from) + " - " +
                    node_name(a.to));
  }
  auto has_op_arc = [&](NodeId a, NodeId b) { return operational.count(ordered(a, b)) != 0; };

  for (std::size_t k = 0; k < net.operations.size(); ++k) {
    const auto& op = net.operations[k];
    const std::string where = "operation " + std::to_string(k);
    auto check_role = [&](NodeId id, Role role) {
      if (!known(id)) return;
      const auto& p = net.person(id);
      if (p.role != role)
        out.push_back(where + ": " + node_name(id) + " should be a " + to_string(role));
      if (p.operation != k) out.push_back(where + ": " + node_name(id) + " has wrong operation");
    };
    check_role(op.trafficker, Role::Trafficker);
    if (op.bottom) check_role(*op.bottom, Role::Bottom);

    std::set<NodeId> members;
    for (std::size_t i = 0; i < op.pods.size(); ++i) {
      const auto& pod = op.pods[i];
      const std::string pod_name = where + " pod " + std::to_string(i);
      if (pod.members.empty() || pod.members.size() > 6)
        out.push_back(pod_name + ": size " + std::to_string(pod.members.size()) +
                      " violates pod-size rule (1..6)");
      if (pod.ages.size() != pod.members.size())
        out.push_back(pod_name + ": age profile does not match members");
      for (std::size_t m = 0; m < pod.members.size(); ++m) {
        auto v = pod.members[m];
        if (!members.insert(v).second) out.push_back(pod_name + ": " + node_name(v) + " in two pods");
        check_role(v, Role::Victim);
        if (known(v) && m < pod.ages.size() && net.person(v).age != pod.ages[m])
          out.push_back(pod_name + ": " + node_name(v) + " age differs from pod profile");
      }
      // Single-pod operations draw ages per victim; otherwise only pairs may mix.
      if (op.pods.size() > 1 && pod.members.size() != 2 && pod_class(pod) == PodClass::Mixed)
        out.push_back(pod_name + ": mixed ages are only allowed in two-victim pods");
      for (std::size_t a = 0; a < pod.members.size(); ++a)
        for (std::size_t b = a + 1; b < pod.members.size(); ++b) {
          auto u = pod.members[a], v = pod.members[b];
          if (known(u) && known(v) && !has_op_arc(u, v))
            out.push_back(pod_name + ": missing clique arc " + node_name(u) + " - " + node_name(v));
        }
    }

    std::set<std::size_t> wired_pods(op.trafficker_pods.begin(), op.trafficker_pods.end());
    wired_pods.insert(op.bottom_pods.begin(), op.bottom_pods.end());
    for (auto i : wired_pods)
      if (i >= op.pods.size()) out.push_back(where + ": wiring references missing pod " + std::to_string(i));
    for (std::size_t i = 0; i < op.pods.size(); ++i)
      if (!wired_pods.count(i)) out.push_back(where + ": pod " + std::to_string(i) + " is not wired");
    if (!op.bottom) {
      if (!op.bottom_pods.empty() || !op.bottom_victims.empty())
        out.push_back(where + ": bottom wiring without a bottom");
      if (op.trafficker_pods.size() != op.pods.size())
        out.push_back(where + ": without a bottom every pod must be wired to the trafficker");
    }

    std::set<NodeId> wired(op.trafficker_victims.begin(), op.trafficker_victims.end());
    wired.insert(op.bottom_victims.begin(), op.bottom_victims.end());
    for (auto v : members)
      if (!wired.count(v)) out.push_back(where + ": " + node_name(v) + " is not wired to a controller");
    for (auto v : wired)
      if (!members.count(v)) out.push_back(where + ": wiring references non-member " + node_name(v));
    for (auto v : op.trafficker_victims)
      if (known(v) && known(op.trafficker) && !has_op_arc(op.trafficker, v))
        out.push_back(where + ": missing trafficker arc to " + node_name(v));
    if (op.bottom)
      for (auto v : op.bottom_victims)
        if (known(v) && known(*op.bottom) && !has_op_arc(*op.bottom, v))
          out.push_back(where + ": missing bottom arc to " + node_name(v));

    // Every victim reaches its trafficker or bottom along operational arcs.
    std::set<NodeId> controllers{op.trafficker};
    if (op.bottom) controllers.insert(*op.bottom);
    for (auto v : members) {
      if (!known(v)) continue;
      std::set<NodeId> visited{v};
      std::deque<NodeId> queue{v};
      bool reached = false;
      while (!queue.empty() && !reached) {
        auto u = queue.front();
        queue.pop_front();
        for (const auto& [a, b] : operational) {
          NodeId w;
          if (a == u) w = b;
          else if (b == u) w = a;
          else continue;
          if (controllers.count(w)) {
            reached = true;
            break;
          }
          if (visited.insert(w).second) queue.push_back(w);
        }
      }
      if (!reached) out.push_back(where + ": " + node_name(v) + " has no operational path to a controller");
    }
  }
  return out;
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

bool UndirectedGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b || has_edge(a, b)) return false;
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  return true;
}

bool UndirectedGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto& adj = adjacency_[a];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

UndirectedGraph victim_social_subgraph(const TraffickingNetwork& net, std::size_t operation,
                                       bool include_bottom) {
  if (operation >= net.operations.size())
    throw std::out_of_range("unknown operation " + std::to_string(operation));
  const auto& op = net.operations[operation];
  std::vector<NodeId> nodes = op.victims();
  if (include_bottom && op.bottom) nodes.push_back(*op.bottom);
  std::sort(nodes.begin(), nodes.end());
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

  UndirectedGraph g(nodes.size());
  g.labels = nodes;
  for (const auto& a : net.arcs) {
    auto f = index.find(a.from);
    auto t = index.find(a.to);
    if (f != index.end() && t != index.end()) g.add_edge(f->second, t->second);
  }
  return g;
}

}  // namespace htnet

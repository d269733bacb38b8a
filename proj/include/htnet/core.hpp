#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnet/generator_config.hpp"

namespace htnet {

/// Identifier of a person (or latent node) in a network or instance.
struct NodeId {
  std::uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

enum class Role { Trafficker, Bottom, Victim };
enum class AgeClass { Minor, Adult, NotApplicable };
enum class ArcKind { Operational, Social };

/// Age mix of a pod (or lone victim) used to look up wiring probabilities.
enum class PodClass { Adult, Minor, Mixed };

std::string to_string(Role role);
std::string to_string(AgeClass age);
std::string to_string(ArcKind kind);
Role role_from_string(const std::string& s);
AgeClass age_from_string(const std::string& s);
ArcKind arc_kind_from_string(const std::string& s);

struct Person {
  NodeId id;
  Role role = Role::Victim;
  AgeClass age = AgeClass::NotApplicable;
  std::optional<std::size_t> operation;
  bool operator==(const Person&) const = default;
};

/// Relationship between two people. Generated networks store undirected arcs
/// with `from < to`; orientation happens when an instance is built.
struct Arc {
  NodeId from;
  NodeId to;
  ArcKind kind = ArcKind::Operational;
  bool directed = false;
  bool operator==(const Arc&) const = default;
};

struct Pod {
  std::vector<NodeId> members;
  std::vector<AgeClass> ages;  // parallel to members
  bool operator==(const Pod&) const = default;
};

PodClass pod_class(const Pod& pod);

/// One trafficker, an optional bottom, and the victims they control.
///
/// Pod-level wiring is kept in `trafficker_pods`/`bottom_pods`. Victim-level
/// wiring is kept as well because a single-pod operation wires each victim
/// individually.
struct Operation {
  NodeId trafficker;
  std::optional<NodeId> bottom;
  std::vector<Pod> pods;
  std::vector<std::size_t> trafficker_pods;
  std::vector<std::size_t> bottom_pods;
  std::vector<NodeId> trafficker_victims;
  std::vector<NodeId> bottom_victims;

  std::vector<NodeId> victims() const;
  std::size_t victim_count() const;
  bool operator==(const Operation&) const = default;
};

struct TraffickingNetwork {
  std::vector<Operation> operations;
  std::map<NodeId, Person> persons;
  /// Operational arcs and victim social arcs.
  std::vector<Arc> arcs;
  /// Undirected social arcs among traffickers.
  std::vector<Arc> trafficker_social;
  std::uint64_t generation_seed = 0;
  GeneratorConfig config_snapshot;

  const Person& person(NodeId id) const;
  std::size_t count(Role role) const;
  bool operator==(const TraffickingNetwork&) const = default;
};

/// Returns one human-readable description per broken invariant.
std::vector<std::string> validate_network(const TraffickingNetwork& net);

/// Simple undirected graph over dense vertices 0..n-1.
class UndirectedGraph {
 public:
  explicit UndirectedGraph(std::size_t n = 0) : adjacency_(n) {}

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const;
  /// Adds {a, b}; ignores self-loops and duplicates. Returns true if added.
  bool add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }

  /// Vertex labels (NodeIds) when the graph was extracted from a network.
  std::vector<NodeId> labels;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Graph over an operation's victims (plus its bottom when requested) with
/// every network arc between included people. Throws std::out_of_range for an
/// unknown operation index.
UndirectedGraph victim_social_subgraph(const TraffickingNetwork& net, std::size_t operation,
                                       bool include_bottom);

}  // namespace htnet

template <>
struct std::hash<htnet::NodeId> {
  std::size_t operator()(const htnet::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

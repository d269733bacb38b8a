#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "htnet/flow.hpp"
#include "htnet/instance.hpp"

namespace htnet {

/// Brute-force ground truth for micro instances. Shares only the instance
/// data structures with the solvers: flow, costs and feasibility rules are
/// re-implemented here.

class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::size_t max_person_nodes = 20;
  std::size_t max_restruct_arcs = 14;
  /// Non-terminal nodes accepted by oracle_max_flow.
  std::size_t max_flow_nodes = 14;
};

struct OraclePair {
  NodeMask y;
  ActivationState z;
};

struct OracleResult {
  int optimum = 0;
  /// Every optimal (y, z): y minimizes, z is a best response to y. Sorted.
  std::vector<OraclePair> optimal_plans;
  /// (y, z) pairs whose flow was evaluated.
  std::size_t enumerated = 0;
};

/// Augmenting-path max flow on an adjacency matrix of the split network.
int oracle_max_flow(const InterdictionInstance& inst, const NodeMask& y, const ActivationState& z,
                    const OracleLimits& limits = {});

/// Attacker cost of y, recomputed from node costs and reductions.
int oracle_cost(const InterdictionInstance& inst, const NodeMask& y);
/// Rule check written independently of the defender module.
bool oracle_feasible(const InterdictionInstance& inst, const NodeMask& y, const ActivationState& z);
/// Every feasible activation state under y, in lexicographic order.
std::vector<ActivationState> oracle_defender_plans(const InterdictionInstance& inst, const NodeMask& y,
                                                   const OracleLimits& limits = {});
/// Best defender response to y by full enumeration.
OracleResult oracle_defender(const InterdictionInstance& inst, const NodeMask& y,
                             const OracleLimits& limits = {});

/// Every cost-feasible y, in lexicographic order.
std::vector<NodeMask> oracle_interdiction_plans(const InterdictionInstance& inst, int budget,
                                                bool include_latent, const OracleLimits& limits = {});

OracleResult oracle_mfnip(const InterdictionInstance& inst, int budget, const OracleLimits& limits = {});
OracleResult oracle_mfnip_r(const InterdictionInstance& inst, int budget,
                            const OracleLimits& limits = {});

}  // namespace htnet

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "htnet/defender.hpp"
#include "htnet/instance.hpp"

namespace htnet {

/// r~_i = max(r_min, r_i - sum of reductions for interdicted bottom/victims).
int adjusted_cost(const InterdictionInstance& inst, const NodeMask& y, std::size_t trafficker);
/// Total attacker spend of y with adjusted trafficker costs.
int plan_cost(const InterdictionInstance& inst, const NodeMask& y);

struct InterdictionPlan {
  NodeMask mask;
  std::vector<NodeId> interdicted;
  /// Every trafficker with its adjusted cost under this plan.
  std::vector<std::pair<NodeId, int>> adjusted_costs;
  int spent = 0;
};

InterdictionPlan make_plan(const InterdictionInstance& inst, const NodeMask& y);

struct BoundsPoint {
  int lower = 0;
  int upper = 0;
};

struct SolveReport {
  InterdictionPlan plan;
  DefenderResult defender_response;
  int objective = 0;
  std::vector<BoundsPoint> bounds_trace;
  std::size_t iterations = 0;
  double wall_time = 0.0;  // seconds
};

struct AttackerOptions {
  std::size_t max_iterations = 10000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Carries the best bounds known when a solve stops early.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int lower, int upper)
      : std::runtime_error(what), lower(lower), upper(upper) {}
  int lower;
  int upper;
};

class IterationCapExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

class SolveTimeout : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Exact attacker solvers for one instance. Per-operation tables are built
/// lazily for budgets up to `max_budget` and shared by later calls, as is the
/// pool of defender plans.
///
/// Among optimal plans the lexicographically smallest indicator vector over
/// nodes in NodeId order is returned (an unneeded node is never interdicted).
class AttackerSolver {
 public:
  AttackerSolver(const InterdictionInstance& inst, int max_budget, AttackerOptions opt = {});
  ~AttackerSolver();

  SolveReport solve_mfnip(int budget);
  SolveReport solve_mfnip_r(int budget);
  DefenderResult evaluate_plan(const NodeMask& y);

  const InterdictionInstance& instance() const { return *inst_; }
  std::size_t pool_size() const;
  /// Applies to later solves.
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
    opt_.deadline = deadline;
  }

 private:
  struct Tables;
  struct Master;
  void build_tables(bool restructure);
  std::pair<NodeMask, int> master(int budget, bool restructure, const NodeMask* seed, int upper);
  int pool_value(const NodeMask& y, int cutoff);
  void check_time(int lower, int upper) const;

  const InterdictionInstance* inst_;
  int max_budget_;
  AttackerOptions opt_;
  DefenderSolver defender_;
  FlowEvaluator flow_;
  std::unique_ptr<Tables> flow_tables_, restruct_tables_;
  std::vector<ActivationState> pool_;
};

SolveReport solve_mfnip(const InterdictionInstance& inst, int budget,
                        const AttackerOptions& opt = {});
SolveReport solve_mfnip_r(const InterdictionInstance& inst, int budget,
                          const AttackerOptions& opt = {});
DefenderResult evaluate_plan(const InterdictionInstance& inst, const NodeMask& y);

struct RoleCounts {
  int traffickers = 0;
  int bottoms = 0;
  int victims = 0;
  int recruitables = 0;
  int backups = 0;
};

RoleCounts count_roles(const InterdictionInstance& inst, const NodeMask& y);

struct SweepRow {
  int budget = 0;
  int total = 0;  // |V| + |B|
  SolveReport mfnip;
  int restructured = 0;  // defender response to the MFNIP plan
  SolveReport mfnip_r;
  RoleCounts mfnip_counts;
  RoleCounts mfnip_r_counts;
};

std::vector<SweepRow> budget_sweep(const InterdictionInstance& inst, const std::vector<int>& budgets,
                                   const AttackerOptions& opt = {});

std::vector<int> default_budgets();

}  // namespace htnet

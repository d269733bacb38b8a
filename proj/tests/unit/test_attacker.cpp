#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "htnet/attacker.hpp"
#include "htnet/generator.hpp"
#include "htnet/oracle.hpp"
#include "../support/micro.hpp"

using namespace htnet;
using namespace htnet::test;

namespace {

InterdictionInstance generated(std::uint64_t seed, std::size_t ops) {
  GeneratorConfig cfg = default_generator_config();
  cfg.seed = seed;
  Rng rng(mix_seed(seed));
  return build_instance(generate_network(ops, cfg), default_schedule(), rng);
}

void check_trace(const SolveReport& r) {
  REQUIRE_FALSE(r.bounds_trace.empty());
  CHECK(r.bounds_trace.size() == r.iterations);
  for (std::size_t k = 1; k < r.bounds_trace.size(); ++k) {
    CHECK(r.bounds_trace[k].lower >= r.bounds_trace[k - 1].lower);
    CHECK(r.bounds_trace[k].upper <= r.bounds_trace[k - 1].upper);
  }
  for (const BoundsPoint& p : r.bounds_trace) CHECK(p.lower <= p.upper);
  CHECK(r.bounds_trace.back().lower == r.bounds_trace.back().upper);
  CHECK(r.bounds_trace.back().upper == r.objective);
}

}  // namespace

TEST_CASE("interdicting a bottom and two victims prices the trafficker at 3") {
  MicroNet m = micro_network({MicroOp{true, {{kA}, {kA}}, {0}, {1}}});
  InterdictionInstance inst = build(m);
  const std::size_t t = inst.index_of(m.traffickers[0]);
  NodeMask y = inst.mask_of({*m.bottoms[0], m.victims[0][0], m.victims[0][1]});
  CHECK(adjusted_cost(inst, y, t) == 3);
  CHECK(adjusted_cost(inst, inst.empty_mask(), t) == 8);
  y[t] = 1;
  CHECK(plan_cost(inst, y) == 3 + 4 + 2 + 2);
  CHECK(plan_cost(inst, y) == oracle_cost(inst, y));
  InterdictionPlan p = make_plan(inst, y);
  CHECK(p.spent == 11);
  CHECK(p.interdicted.size() == 4);
  REQUIRE(p.adjusted_costs.size() == 1);
  CHECK(p.adjusted_costs[0] == std::pair<NodeId, int>{m.traffickers[0], 3});
}

TEST_CASE("adjusted cost never drops below the floor") {
  MicroNet m = micro_network({MicroOp{true, {{kA, kA, kA}, {kA, kA}}, {0}, {1}}});
  InterdictionInstance inst = build(m);
  std::vector<NodeId> all(m.victims[0]);
  all.push_back(*m.bottoms[0]);
  CHECK(adjusted_cost(inst, inst.mask_of(all), inst.index_of(m.traffickers[0])) == 2);
}

TEST_CASE("plan cost agrees with the reference on random masks") {
  Rng rng(9);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    InterdictionInstance inst = generated(s, 4);
    for (int k = 0; k < 20; ++k) {
      NodeMask y = inst.empty_mask();
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.interdictable(i) && rng.bernoulli(0.3)) y[i] = 1;
      CHECK(plan_cost(inst, y) == oracle_cost(inst, y));
    }
  }
}

TEST_CASE("M1 values by budget") {
  InterdictionInstance inst = build(m1_network());
  AttackerSolver solver(inst, 8);
  const std::vector<std::pair<int, std::pair<int, int>>> table{
      {0, {2, 2}}, {2, {1, 2}}, {4, {0, 1}}, {6, {0, 0}}, {8, {0, 0}}};
  for (auto [b, v] : table) {
    CAPTURE(b);
    CHECK(solver.solve_mfnip(b).objective == v.first);
    CHECK(solver.solve_mfnip_r(b).objective == v.second);
    CHECK(oracle_mfnip(inst, b).optimum == v.first);
    CHECK(oracle_mfnip_r(inst, b).optimum == v.second);
  }
}

TEST_CASE("zero budget interdicts nothing; a budget covering everything stops all flow") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    InterdictionInstance inst = generated(s, 2);
    SolveReport a = solve_mfnip(inst, 0);
    CHECK(a.objective == inst.victims_and_bottoms());
    CHECK(a.plan.interdicted.empty());
    SolveReport b = solve_mfnip_r(inst, 0);
    CHECK(b.objective == inst.victims_and_bottoms());
    CHECK(b.plan.spent == 0);
    // Bottoms draw from the source directly, so they go too.
    int heads = 0;
    for (const OperationGroup& g : inst.operations)
      heads += inst.nodes[g.trafficker].cost + (g.bottom ? inst.nodes[*g.bottom].cost : 0);
    SolveReport c = solve_mfnip(inst, heads);
    CHECK(c.objective == 0);
    CHECK(c.plan.spent <= heads);
  }
}

TEST_CASE("solvers match enumeration on small instances") {
  int checked = 0;
  for (std::uint64_t s = 1; checked < 12; ++s) {
    InterdictionInstance inst = generated(s, 1);
    int persons = 0;
    for (const auto& n : inst.nodes)
      persons += n.role == NodeRole::Trafficker || n.role == NodeRole::Bottom || n.role == NodeRole::Victim;
    if (persons > 9 || inst.restruct_arcs.size() > 10) continue;
    AttackerSolver solver(inst, 8);
    for (int b : {2, 4, 8}) {
      CAPTURE(s);
      CAPTURE(b);
      OracleResult om = oracle_mfnip(inst, b), orr = oracle_mfnip_r(inst, b);
      SolveReport m = solver.solve_mfnip(b), r = solver.solve_mfnip_r(b);
      CHECK(m.objective == om.optimum);
      CHECK(r.objective == orr.optimum);
      REQUIRE_FALSE(om.optimal_plans.empty());
      CHECK(m.plan.mask == om.optimal_plans.front().y);
      CHECK(r.plan.mask == orr.optimal_plans.front().y);
      CHECK(m.plan.spent <= b);
      CHECK(r.plan.spent <= b);
      check_trace(r);
    }
    ++checked;
  }
}

TEST_CASE("dominance, monotonicity and traces on generated networks") {
  for (std::uint64_t s : {1, 3}) {
    InterdictionInstance inst = generated(s, 3);
    std::vector<SweepRow> rows = budget_sweep(inst, {0, 4, 8, 12, 16});
    REQUIRE(rows.size() == 5);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const SweepRow& r = rows[k];
      CHECK(r.mfnip.objective <= r.mfnip_r.objective);
      CHECK(r.mfnip_r.objective <= r.restructured);
      CHECK(r.restructured <= r.total);
      CHECK(r.total == inst.victims_and_bottoms());
      check_trace(r.mfnip);
      check_trace(r.mfnip_r);
      CHECK(r.restructured == evaluate_plan(inst, r.mfnip.plan.mask).value());
      if (k > 0) {
        CHECK(r.mfnip.objective <= rows[k - 1].mfnip.objective);
        CHECK(r.mfnip_r.objective <= rows[k - 1].mfnip_r.objective);
      }
      RoleCounts c = count_roles(inst, r.mfnip.plan.mask);
      CHECK(c.traffickers + c.bottoms + c.victims + c.recruitables + c.backups ==
            static_cast<int>(r.mfnip.plan.interdicted.size()));
      CHECK(r.mfnip_counts.bottoms == c.bottoms);
    }
  }
}

TEST_CASE("iteration cap and time limit") {
  // Find a solve needing several rounds, then cap it below that.
  bool found = false;
  for (std::uint64_t s = 1; s <= 30 && !found; ++s) {
    InterdictionInstance inst = generated(s, 2);
    SolveReport r = solve_mfnip_r(inst, 12);
    if (r.iterations < 2) continue;
    found = true;
    AttackerOptions opt;
    opt.max_iterations = r.iterations - 1;
    try {
      solve_mfnip_r(inst, 12, opt);
      FAIL("expected the iteration cap");
    } catch (const IterationCapExceeded& e) {
      CHECK(e.lower <= r.objective);
      CHECK(e.upper >= r.objective);
    }
  }
  CHECK(found);

  InterdictionInstance big = generated(2, 5);
  AttackerOptions opt;
  opt.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(solve_mfnip_r(big, 32, opt), SolveTimeout);
}

TEST_CASE("bad budgets") {
  InterdictionInstance inst = build(m1_network());
  CHECK_THROWS_AS(solve_mfnip(inst, -1), std::invalid_argument);
  AttackerSolver solver(inst, 4);
  CHECK_THROWS_AS(solver.solve_mfnip(6), std::invalid_argument);
  CHECK(default_budgets() == std::vector<int>{8, 12, 16, 20, 24, 28, 32, 36, 40});
}

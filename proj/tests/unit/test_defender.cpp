#include <algorithm>

#include "doctest.h"
#include "htnet/defender.hpp"
#include "htnet/generator.hpp"
#include "htnet/oracle.hpp"
#include "../support/micro.hpp"

using namespace htnet;
using namespace htnet::test;

namespace {

bool violates(const FeasibilityReport& r, Rule rule) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::size_t arc_of(const InterdictionInstance& inst, RestructCategory c, std::size_t nth = 0) {
  for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a)
    if (inst.restruct_arcs[a].category == c && nth-- == 0) return a;
  FAIL("no such arc");
  return 0;
}

/// Small instances the oracle accepts: cut generated 1-2 operation
/// instances down to a few people.
std::vector<InterdictionInstance> small_instances(std::size_t count, std::uint64_t salt) {
  std::vector<InterdictionInstance> out;
  Rng pick(salt);
  for (std::uint64_t s = 1; out.size() < count; ++s) {
    GeneratorConfig cfg = default_generator_config();
    cfg.seed = s * 7919 + salt;
    Rng rng(mix_seed(cfg.seed));
    InterdictionInstance full = build_instance(generate_network(1 + s % 2, cfg), default_schedule(), rng);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < full.size(); ++i)
      if (i != full.source && i != full.sink && pick.bernoulli(0.6)) keep.push_back(i);
    InterdictionInstance inst = induced_subinstance(full, keep);
    if (inst.restruct_arcs.size() > 10 || inst.restruct_arcs.empty() || inst.size() > 16) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

TEST_CASE("rule names") {
  CHECK(to_string(Rule::Budget) == "budget");
  CHECK(to_string(Rule::PromotionGate) == "promotion_gate");
  CHECK(to_string(Rule::DirectionExclusive) == "direction_exclusive");
}

TEST_CASE("T1 with the bottom interdicted: promotion recovers one unit") {
  MicroNet m = t1_network();
  InterdictionInstance inst = build(m);
  NodeMask y = inst.mask_of({*m.bottoms[0]});
  DefenderResult r = solve_defender(inst, y);
  CHECK(r.value() == 3);
  CHECK(r.optimal);
  CHECK(r.value() == oracle_defender(inst, y).optimum);
  CHECK(is_feasible(inst, y, r.plan).feasible);
  const std::size_t promote = arc_of(inst, RestructCategory::PromoteActivate);
  CHECK(std::count(r.plan.activated_out.begin(), r.plan.activated_out.end(), promote) == 1);
}

TEST_CASE("M1: recruitment only after a victim is lost") {
  MicroNet m = m1_network();
  InterdictionInstance inst = build(m);
  CHECK(solve_defender(inst, inst.empty_mask()).value() == 2);
  NodeMask y = inst.mask_of({m.victims[0][0]});
  DefenderResult r = solve_defender(inst, y);
  CHECK(r.value() == 2);
  REQUIRE(r.plan.activated_out.size() == 1);
  CHECK(inst.restruct_arcs[r.plan.activated_out[0]].category == RestructCategory::Recruit);
  CHECK(solve_defender(inst, inst.mask_of({m.traffickers[0]})).value() == 0);
}

TEST_CASE("each rule is reported by name") {
  MicroNet m = t1_network();
  InterdictionInstance inst = build(m);
  const std::size_t t = inst.index_of(m.traffickers[0]), b = inst.index_of(*m.bottoms[0]);
  const std::size_t backup = arc_of(inst, RestructCategory::BackupActivate);
  const std::size_t recruit = arc_of(inst, RestructCategory::Recruit);
  const std::size_t promote = arc_of(inst, RestructCategory::PromoteActivate);
  const std::size_t take = arc_of(inst, RestructCategory::TakeFromBottom);
  const std::size_t assign = arc_of(inst, RestructCategory::AssignToPromoted);
  NodeMask none = inst.empty_mask();

  CHECK(is_feasible(inst, none, {}).feasible);
  CHECK(violates(is_feasible(inst, none, {{backup}, {}}), Rule::BackupTrigger));
  CHECK(violates(is_feasible(inst, none, {{recruit}, {}}), Rule::OutTrigger));
  CHECK(violates(is_feasible(inst, none, {{promote}, {}}), Rule::PromotionTrigger));
  CHECK(violates(is_feasible(inst, none, {{take}, {}}), Rule::OutTrigger));
  CHECK(violates(is_feasible(inst, none, {{}, {take}}), Rule::InTrigger));
  CHECK(violates(is_feasible(inst, none, {{take}, {take}}), Rule::DirectionExclusive));

  NodeMask yb = none;
  yb[b] = 1;
  CHECK(is_feasible(inst, yb, {{promote}, {}}).feasible);
  CHECK(violates(is_feasible(inst, yb, {{assign}, {}}), Rule::PromotionGate));
  CHECK(is_feasible(inst, yb, {{promote, assign}, {}}).feasible);
  NodeMask yp = yb;
  yp[inst.restruct_arcs[promote].to] = 1;
  CHECK(violates(is_feasible(inst, yp, {{promote}, {}}), Rule::PromotedNotInterdicted));

  NodeMask yt = none;
  yt[t] = 1;
  CHECK(is_feasible(inst, yt, {{backup}, {}}).feasible);
  CostSchedule tight = default_schedule();
  tight.b_restructure = 3;
  InterdictionInstance poor = build(m, tight);
  CHECK(violates(is_feasible(poor, yt, {{backup}, {}}), Rule::Budget));

  CHECK_THROWS_AS(is_feasible(inst, none, {{}, {backup}}), std::invalid_argument);
  CHECK_THROWS_AS(is_feasible(inst, none, {{99}, {}}), std::invalid_argument);
}

TEST_CASE("single promotion and single recruitment") {
  SUBCASE("two promotables in one operation") {
    MicroNet m = micro_network({MicroOp{true, {{kA, kA}, {kA, kA}}, {0, 1}, {1}}});
    InterdictionInstance inst = build(m);
    REQUIRE(inst.promotables.size() == 2);
    NodeMask y = inst.mask_of({*m.bottoms[0]});
    auto r = is_feasible(inst, y, {{inst.promotables[0].activation, inst.promotables[1].activation}, {}});
    CHECK(violates(r, Rule::SinglePromotion));
  }
  SUBCASE("two traffickers recruiting the same person") {
    MicroNet m = micro_network({MicroOp{false, {{kA, kA}}, {0}, {}}, MicroOp{false, {{kA, kA}}, {0}, {}}});
    CostSchedule s = default_schedule();
    s.recruit_eligibility_prob = 1.0;
    InterdictionInstance inst = build(m, s);
    NodeMask y = inst.mask_of({m.victims[0][0], m.victims[1][0]});
    const std::size_t r0 = inst.recruitables[0].node;
    RestructuringPlan z;
    for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a)
      if (inst.restruct_arcs[a].to == r0) z.activated_out.push_back(a);
    REQUIRE(z.activated_out.size() == 2);
    auto r = is_feasible(inst, y, z);
    CHECK(violates(r, Rule::SingleRecruitment));
    CHECK_FALSE(violates(r, Rule::OutTrigger));
  }
  SUBCASE("known victim taken in after its trafficker falls") {
    MicroNet m = micro_network({MicroOp{false, {{kA}}, {0}, {}}, MicroOp{false, {{kA}}, {0}, {}}});
    add_trafficker_tie(m, 0, 1);
    CostSchedule s = default_schedule();
    s.recruitable_fraction = 0.0;
    InterdictionInstance inst = build(m, s);
    const std::size_t kv = arc_of(inst, RestructCategory::KnownVictim);
    const NodeId victim = inst.nodes[inst.restruct_arcs[kv].to].id;
    const NodeId other = victim == m.victims[0][0] ? m.traffickers[0] : m.traffickers[1];
    CHECK(violates(is_feasible(inst, inst.empty_mask(), {{}, {kv}}), Rule::InTrigger));
    NodeMask y = inst.mask_of({other});
    CHECK(is_feasible(inst, y, {{}, {kv}}).feasible);
    CHECK(solve_defender(inst, y).value() == 1);
  }
}

TEST_CASE("feasible components keep a greedy feasible prefix") {
  for (const InterdictionInstance& inst : small_instances(40, 11)) {
    Rng rng(inst.size());
    for (int trial = 0; trial < 5; ++trial) {
      NodeMask y = inst.empty_mask();
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.interdictable(i) && rng.bernoulli(0.3)) y[i] = 1;
      ActivationState z(inst.restruct_arcs.size(), kInactive);
      for (std::size_t a = 0; a < z.size(); ++a)
        if (rng.bernoulli(0.6)) z[a] = inst.restruct_arcs[a].allows_in && rng.bernoulli(0.5) ? kIn : kOut;
      ActivationState expect(z.size(), kInactive);
      for (std::size_t a = 0; a < z.size(); ++a) {
        if (z[a] == kInactive) continue;
        expect[a] = z[a];
        if (!oracle_feasible(inst, y, expect)) expect[a] = kInactive;
      }
      RestructuringPlan got = feasible_components(inst, y, to_plan(z));
      CHECK(got == to_plan(expect));
      CHECK(is_feasible(inst, y, got).feasible);
    }
  }
}

TEST_CASE("defender matches enumeration, including the tie-break") {
  int cases = 0;
  for (const InterdictionInstance& inst : small_instances(60, 23)) {
    DefenderSolver solver(inst);
    Rng rng(inst.restruct_arcs.size() * 31 + inst.size());
    for (int trial = 0; trial < 6; ++trial) {
      NodeMask y = inst.empty_mask();
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (inst.interdictable(i) && rng.bernoulli(0.35)) y[i] = 1;
      OracleResult o = oracle_defender(inst, y);
      DefenderResult r = solver.solve(y);
      CHECK(r.value() == o.optimum);
      CHECK(r.optimal);
      CHECK(is_feasible(inst, y, r.plan).feasible);
      CHECK(oracle_feasible(inst, y, to_state(inst, r.plan)));
      REQUIRE_FALSE(o.optimal_plans.empty());
      CHECK(to_state(inst, r.plan) == o.optimal_plans.front().z);
      CHECK(r.value() >= max_flow(inst, y, {}).value);
      ++cases;
    }
  }
  CHECK(cases == 360);
}

TEST_CASE("node limit stops the search early") {
  GeneratorConfig cfg = default_generator_config();
  cfg.seed = 2;
  Rng rng(mix_seed(2));
  InterdictionInstance inst = build_instance(generate_network(5, cfg), default_schedule(), rng);
  NodeMask y = inst.empty_mask();
  for (const OperationGroup& g : inst.operations) {
    y[g.trafficker] = 1;
    if (g.bottom) y[*g.bottom] = 1;
  }
  DefenderSolver solver(inst);
  DefenderResult full = solver.solve(y);
  CHECK(full.optimal);
  DefenderResult cut = solver.solve(y, DefenderOptions{1, std::nullopt});
  CHECK_FALSE(solver.last_optimal());
  CHECK(cut.value() <= full.value());
  CHECK(is_feasible(inst, y, cut.plan).feasible);
}

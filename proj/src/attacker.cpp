#include "htnet/attacker.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <string>

namespace htnet {

namespace {

constexpr int kInf = INT_MAX / 4;
constexpr std::uint8_t kNoValue = 255;
/// Largest operation (in branching variables) tabulated exhaustively.
constexpr std::size_t kMaxOpVars = 18;

bool is_person(NodeRole r) {
  return r == NodeRole::Trafficker || r == NodeRole::Bottom || r == NodeRole::Victim;
}

/// a < b as indicator vectors in node order, 0 before 1.
bool lex_less(const NodeMask& a, const NodeMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace

int adjusted_cost(const InterdictionInstance& inst, const NodeMask& y, std::size_t trafficker) {
  int r = inst.nodes[trafficker].cost;
  for (const auto& d : inst.reductions[trafficker])
    if (y[d.node]) r -= d.amount;
  return std::max(inst.schedule.r_min, r);
}

int plan_cost(const InterdictionInstance& inst, const NodeMask& y) {
  int c = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    c += inst.nodes[i].role == NodeRole::Trafficker ? adjusted_cost(inst, y, i) : inst.nodes[i].cost;
  }
  return c;
}

InterdictionPlan make_plan(const InterdictionInstance& inst, const NodeMask& y) {
  check_structure(inst, y);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] && !inst.interdictable(i))
      throw std::invalid_argument("node " + std::to_string(inst.nodes[i].id.value) +
                                  " cannot be interdicted");
  InterdictionPlan p;
  p.mask = y;
  p.interdicted = inst.ids_of(y);
  for (std::size_t i = 0; i < inst.nodes.size(); ++i)
    if (inst.nodes[i].role == NodeRole::Trafficker)
      p.adjusted_costs.emplace_back(inst.nodes[i].id, adjusted_cost(inst, y, i));
  p.spent = plan_cost(inst, y);
  return p;
}

RoleCounts count_roles(const InterdictionInstance& inst, const NodeMask& y) {
  RoleCounts c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    switch (inst.nodes[i].role) {
      case NodeRole::Trafficker: ++c.traffickers; break;
      case NodeRole::Bottom: ++c.bottoms; break;
      case NodeRole::Victim: ++c.victims; break;
      case NodeRole::Recruitable: ++c.recruitables; break;
      case NodeRole::Backup: ++c.backups; break;
      default: break;
    }
  }
  return c;
}

std::vector<int> default_budgets() { return {8, 12, 16, 20, 24, 28, 32, 36, 40}; }

// Per-operation lower-bound tables. For every operation the defender (or
// plain max flow) value of each subset of its variables is computed on the
// operation's induced sub-instance; the sum over operations never exceeds the
// full value because sub-plans combine into a feasible full plan.
// level[k][p * (budget + 1) + c] is the least value over completions of the
// first-k-variable pattern p with operation cost <= c.
struct AttackerSolver::Tables {
  struct Op {
    std::vector<std::size_t> vars;
    std::vector<std::vector<std::uint8_t>> level;
  };
  int budget = 0;
  std::vector<Op> ops;
  std::vector<int> var_op, var_bit;
  std::vector<std::size_t> order;
};

struct AttackerSolver::Master {
  AttackerSolver* self;
  const Tables* t;
  int budget;
  bool restructure;
  const NodeMask* seed;
  NodeMask y;
  std::vector<std::uint32_t> pattern;
  std::vector<int> depth;
  int extra_cost = 0;
  NodeMask best_y;
  int best = kInf;
  bool have_best = false;
  bool dfs_found = false;
  std::size_t nodes = 0;

  // pre[k] combines operations 0..k and suf[k] operations k..end; entries
  // are least value for total cost <= c. Only the operation touched last is
  // combined afresh at each node.
  std::vector<std::vector<int>> pre, suf;
  std::vector<int> zeros, q;
  std::vector<std::pair<int, int>> steps;
  int pre_ok = -1;
  int suf_ok = 0;
  int focus = 0;
  std::size_t latent_start = 0;
  int latent_pool = 0, latent_spent = 0, taken_cap = 0;
  /// removable[i][r]: most capacity among latent variables from position
  /// latent_start + i on with total cost <= r.
  std::vector<std::vector<int>> removable;

  void init_latent() {
    const auto& inst = *self->inst_;
    while (latent_start < t->order.size() && is_person(inst.nodes[t->order[latent_start]].role))
      ++latent_start;
    const auto n = t->order.size() - latent_start;
    removable.assign(n + 1, std::vector<int>(budget + 1, 0));
    for (auto i = n; i-- > 0;) {
      const auto& node = inst.nodes[t->order[latent_start + i]];
      for (int r = 0; r <= budget; ++r) {
        removable[i][r] = removable[i + 1][r];
        if (node.cost <= r)
          removable[i][r] = std::max(removable[i][r], removable[i + 1][r - node.cost] + node.capacity);
      }
    }
  }

  void init_cache() {
    const auto k = static_cast<int>(t->ops.size());
    pre.assign(k, std::vector<int>(budget + 1, kInf));
    suf = pre;
    zeros.assign(budget + 1, 0);
    pre_ok = -1;
    suf_ok = k;
  }

  void touched(int o) {
    pre_ok = std::min(pre_ok, o - 1);
    suf_ok = std::max(suf_ok, o + 1);
    focus = o;
  }

  const std::uint8_t* profile(std::size_t o) const {
    return t->ops[o].level[depth[o]].data() + static_cast<std::size_t>(pattern[o]) * (t->budget + 1);
  }

  void combine(const std::vector<int>& a, const std::uint8_t* prof, std::vector<int>& out) {
    // Profiles are non-increasing step functions; only their steps matter.
    steps.clear();
    int last = kInf;
    for (int c = 0; c <= budget; ++c)
      if (prof[c] != kNoValue && prof[c] < last) {
        last = prof[c];
        steps.emplace_back(c, last);
      }
    out.assign(budget + 1, kInf);
    for (auto [c1, v] : steps)
      for (int c = 0; c + c1 <= budget; ++c)
        if (a[c] < kInf) out[c + c1] = std::min(out[c + c1], a[c] + v);
    for (int c = 1; c <= budget; ++c) out[c] = std::min(out[c], out[c - 1]);
  }

  int lower_bound() {
    const int left = budget - extra_cost;
    if (left < 0) return kInf;
    const auto k = static_cast<int>(t->ops.size());
    if (k == 0) return 0;
    const int f = std::clamp(focus, 0, k - 1);
    while (pre_ok < f - 1) {
      ++pre_ok;
      combine(pre_ok == 0 ? zeros : pre[pre_ok - 1], profile(pre_ok), pre[pre_ok]);
    }
    while (suf_ok > f + 1) {
      --suf_ok;
      combine(suf_ok == k - 1 ? zeros : suf[suf_ok + 1], profile(suf_ok), suf[suf_ok]);
    }
    combine(f == 0 ? zeros : pre[f - 1], profile(f), q);
    const auto& rest = f == k - 1 ? zeros : suf[f + 1];
    int lb = kInf;
    for (int c = 0; c <= left; ++c)
      if (q[c] < kInf && rest[left - c] < kInf) lb = std::min(lb, q[c] + rest[left - c]);
    return lb;
  }

  int leaf_value(int lb) {
    if (!restructure) return self->flow_.value(y, {});
    // Accept only strict improvement or a tie that is lexicographically smaller.
    int cutoff = kInf;
    if (have_best) cutoff = lex_less(y, best_y) ? best + 1 : best;
    if (lb >= cutoff) return lb;
    return std::max(lb, self->pool_value(y, cutoff));
  }

  void offer(int v) {
    if (!have_best || v < best || (v == best && lex_less(y, best_y))) {
      best = v;
      best_y = y;
      have_best = true;
    }
  }

  void dfs(std::size_t pos, int rel) {
    if ((++nodes & 1023) == 0) self->check_time(-1, -1);
    const int lb = lower_bound();
    if (lb >= kInf) return;
    if (have_best && (lb > best || (lb == best && (dfs_found || rel > 0)))) return;
    if (pos == t->order.size()) {
      const int v = leaf_value(lb);
      const bool better = !have_best || v < best || (v == best && lex_less(y, best_y));
      if (better) {
        offer(v);
        dfs_found = true;
      }
      return;
    }
    if (restructure && pos >= latent_start) {
      // Interdicting a latent node touches no trigger and removes at most its
      // capacity from any flow, so the pool value with no latent node
      // interdicted, less the most capacity the budget can still remove,
      // bounds the subtree.
      const int cut = have_best ? (dfs_found || rel > 0 ? best : best + 1) : kInf;
      if (pos == latent_start) {
        latent_spent = plan_cost(*self->inst_, y);
        taken_cap = 0;
        if (latent_spent > budget) return;
        // Stopping early still leaves a valid lower bound on the pool value.
        const int enough = cut >= kInf ? kInf : cut + removable[0][budget - latent_spent];
        latent_pool = self->pool_value(y, enough);
      }
      const int left = budget - latent_spent;
      if (left < 0) return;
      const int bound = latent_pool - taken_cap - removable[pos - latent_start][left];
      if (bound >= cut) return;
    }
    const auto v = t->order[pos];
    const int o = t->var_op[v];
    const int seed_bit = seed ? (*seed)[v] : 0;
    if (o >= 0) {
      ++depth[o];
      touched(o);
    }
    dfs(pos + 1, rel != 0 ? rel : (seed_bit ? -1 : 0));
    y[v] = 1;
    const bool latent = pos >= latent_start;
    if (latent) {
      latent_spent += self->inst_->nodes[v].cost;
      taken_cap += self->inst_->nodes[v].capacity;
    }
    if (o >= 0) {
      pattern[o] |= 1u << t->var_bit[v];
      touched(o);
    } else {
      extra_cost += self->inst_->nodes[v].cost;
    }
    dfs(pos + 1, rel != 0 ? rel : (seed_bit ? 0 : 1));
    y[v] = 0;
    if (latent) {
      latent_spent -= self->inst_->nodes[v].cost;
      taken_cap -= self->inst_->nodes[v].capacity;
    }
    if (o >= 0) {
      pattern[o] &= ~(1u << t->var_bit[v]);
      --depth[o];
      touched(o);
    } else {
      extra_cost -= self->inst_->nodes[v].cost;
    }
  }
};

AttackerSolver::AttackerSolver(const InterdictionInstance& inst, int max_budget,
                               AttackerOptions opt)
    : inst_(&inst), max_budget_(max_budget), opt_(opt), defender_(inst), flow_(inst) {
  if (max_budget < 0) throw std::invalid_argument("budget must be non-negative");
}

AttackerSolver::~AttackerSolver() = default;

std::size_t AttackerSolver::pool_size() const { return pool_.size(); }

void AttackerSolver::check_time(int lower, int upper) const {
  if (opt_.deadline && std::chrono::steady_clock::now() > *opt_.deadline)
    throw SolveTimeout("solve time limit reached", lower, upper);
}

void AttackerSolver::build_tables(bool restructure) {
  auto& slot = restructure ? restruct_tables_ : flow_tables_;
  if (slot) return;
  const auto& inst = *inst_;
  auto t = std::make_unique<Tables>();
  t->budget = max_budget_;
  t->var_op.assign(inst.nodes.size(), -1);
  t->var_bit.assign(inst.nodes.size(), -1);

  // Operation membership of every branching variable.
  std::vector<std::vector<std::size_t>> members(inst.operations.size());
  std::map<std::size_t, std::size_t> op_of_trafficker;
  for (std::size_t o = 0; o < inst.operations.size(); ++o) {
    const auto& op = inst.operations[o];
    op_of_trafficker[op.trafficker] = o;
    members[o].push_back(op.trafficker);
    if (op.bottom) members[o].push_back(*op.bottom);
    for (auto v : op.victims) members[o].push_back(v);
  }
  std::vector<std::vector<std::size_t>> latent(inst.operations.size());
  if (restructure) {
    for (std::size_t o = 0; o < inst.operations.size(); ++o)
      if (inst.operations[o].backup && inst.interdictable(*inst.operations[o].backup))
        latent[o].push_back(*inst.operations[o].backup);
    for (const auto& r : inst.recruitables) {
      if (!inst.interdictable(r.node)) continue;
      std::optional<std::size_t> home;
      for (auto tr : r.eligible) {
        const auto o = op_of_trafficker.at(tr);
        if (!home || o < *home) home = o;
      }
      if (home) latent[*home].push_back(r.node);
    }
  }
  for (std::size_t i = 0; i < inst.nodes.size(); ++i)
    if (inst.interdictable(i) && (restructure || is_person(inst.nodes[i].role)))
      t->order.push_back(i);

  const int width = max_budget_ + 1;
  for (std::size_t o = 0; o < inst.operations.size(); ++o) {
    Tables::Op op;
    op.vars = members[o];
    std::sort(op.vars.begin(), op.vars.end());
    auto lat = latent[o];
    std::sort(lat.begin(), lat.end());
    // Latent nodes beyond the size cap are left out of the sub-instance,
    // which only weakens the bound.
    for (auto v : lat)
      if (op.vars.size() < kMaxOpVars) op.vars.push_back(v);
    if (op.vars.size() > kMaxOpVars)
      throw std::length_error("operation with " + std::to_string(op.vars.size()) +
                              " interdictable nodes is too large to tabulate");
    std::sort(op.vars.begin(), op.vars.end());
    std::vector<std::size_t> keep = op.vars;
    const auto sub = induced_subinstance(inst, keep);
    std::vector<std::size_t> local;
    for (auto v : op.vars) local.push_back(sub.index_of(inst.nodes[v].id));
    const std::size_t n = op.vars.size();
    op.level.resize(n + 1);
    op.level[n].assign((std::size_t{1} << n) * width, kNoValue);
    std::optional<DefenderSolver> solver;
    std::optional<FlowEvaluator> flow;
    if (restructure)
      solver.emplace(sub);
    else
      flow.emplace(sub);
    NodeMask ys = sub.empty_mask();
    for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
      if ((s & 255) == 0) check_time(-1, -1);
      for (std::size_t b = 0; b < n; ++b) ys[local[b]] = (s >> b) & 1;
      const int cost = plan_cost(sub, ys);
      if (cost > max_budget_) continue;
      const int v = restructure ? solver->solve_value(ys) : flow->value(ys, {});
      if (v >= kNoValue) throw std::length_error("operation flow too large to tabulate");
      auto* prof = op.level[n].data() + s * width;
      for (int c = cost; c <= max_budget_; ++c) prof[c] = static_cast<std::uint8_t>(v);
    }
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t count = std::size_t{1} << k;
      op.level[k].assign(count * width, kNoValue);
      for (std::size_t p = 0; p < count; ++p)
        for (int c = 0; c < width; ++c)
          op.level[k][p * width + c] = std::min(op.level[k + 1][p * width + c],
                                                op.level[k + 1][(p | (std::size_t{1} << k)) * width + c]);
    }
    for (std::size_t b = 0; b < n; ++b) {
      t->var_op[op.vars[b]] = static_cast<int>(o);
      t->var_bit[op.vars[b]] = static_cast<int>(b);
    }
    t->ops.push_back(std::move(op));
  }
  slot = std::move(t);
}

int AttackerSolver::pool_value(const NodeMask& y, int cutoff) {
  const auto& inst = *inst_;
  int best = 0;
  FeasibilityTracker tr(inst, y);
  std::vector<std::size_t> added;
  for (const auto& z : pool_) {
    added.clear();
    for (std::size_t a = 0; a < z.size(); ++a)
      if (z[a] != kInactive && tr.allowed(a, z[a])) {
        tr.add(a, z[a]);
        added.push_back(a);
      }
    if (!added.empty()) best = std::max(best, flow_.value(y, tr.state()));
    for (auto it = added.rbegin(); it != added.rend(); ++it) tr.remove(*it);
    if (best >= cutoff) break;
  }
  return best;
}

std::pair<NodeMask, int> AttackerSolver::master(int budget, bool restructure, const NodeMask* seed,
                                                int upper) {
  (void)upper;
  const auto* t = (restructure ? restruct_tables_ : flow_tables_).get();
  Master m;
  m.self = this;
  m.t = t;
  m.budget = budget;
  m.restructure = restructure;
  m.seed = seed;
  m.y = inst_->empty_mask();
  m.init_cache();
  m.init_latent();
  m.pattern.assign(t->ops.size(), 0);
  m.depth.assign(t->ops.size(), 0);
  if (seed) {
    // Exact master value of the seed under the current pool.
    m.y = *seed;
    for (std::size_t o = 0; o < t->ops.size(); ++o) {
      m.depth[o] = static_cast<int>(t->ops[o].vars.size());
      for (std::size_t b = 0; b < t->ops[o].vars.size(); ++b)
        if ((*seed)[t->ops[o].vars[b]]) m.pattern[o] |= 1u << b;
    }
    for (auto v : t->order)
      if ((*seed)[v] && t->var_op[v] < 0) m.extra_cost += inst_->nodes[v].cost;
    m.init_cache();
    const int lb = m.lower_bound();
    if (lb < kInf) m.offer(m.leaf_value(lb));
    m.y = inst_->empty_mask();
    std::fill(m.pattern.begin(), m.pattern.end(), 0);
    std::fill(m.depth.begin(), m.depth.end(), 0);
    m.extra_cost = 0;
    m.init_cache();
  }
  m.dfs(0, 0);
  if (!m.have_best) throw std::logic_error("attacker master found no feasible plan");
  return {m.best_y, m.best};
}

SolveReport AttackerSolver::solve_mfnip(int budget) {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  if (budget > max_budget_) throw std::invalid_argument("budget exceeds the solver's table budget");
  const auto start = std::chrono::steady_clock::now();
  build_tables(false);
  auto [y, v] = master(budget, false, nullptr, kInf);
  SolveReport r;
  r.plan = make_plan(*inst_, y);
  r.defender_response.flow = flow_.assignment(y, {});
  r.objective = r.defender_response.value();
  if (r.objective != v) throw std::logic_error("MFNIP table value disagrees with max flow");
  r.bounds_trace.push_back({v, v});
  r.iterations = 1;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

DefenderResult AttackerSolver::evaluate_plan(const NodeMask& y) {
  DefenderOptions dopt;
  dopt.deadline = opt_.deadline;
  auto res = defender_.solve(y, dopt);
  if (!res.optimal) throw SolveTimeout("defender stopped before proving optimality", -1, res.value());
  return res;
}

SolveReport AttackerSolver::solve_mfnip_r(int budget) {
  if (budget < 0) throw std::invalid_argument("budget must be non-negative");
  if (budget > max_budget_) throw std::invalid_argument("budget exceeds the solver's table budget");
  const auto start = std::chrono::steady_clock::now();
  build_tables(true);
  SolveReport r;
  int upper = kInf;
  std::optional<NodeMask> incumbent;
  DefenderOptions dopt;
  dopt.deadline = opt_.deadline;
  for (std::size_t iter = 1;; ++iter) {
    const int last_lower = r.bounds_trace.empty() ? 0 : r.bounds_trace.back().lower;
    if (iter > opt_.max_iterations)
      throw IterationCapExceeded("C&CG iteration cap exceeded", last_lower, upper);
    std::pair<NodeMask, int> m;
    try {
      m = master(budget, true, incumbent ? &*incumbent : nullptr, upper);
    } catch (const SolveTimeout&) {
      throw SolveTimeout("solve time limit reached", last_lower, upper);
    }
    const auto& [y, lower] = m;
    RestructuringPlan plan;
    const int f = defender_.solve_value(y, &plan, dopt);
    if (!defender_.last_optimal()) throw SolveTimeout("solve time limit reached", lower, upper);
    if (f < upper || (f == upper && lex_less(y, *incumbent))) {
      upper = f;
      incumbent = y;
    }
    r.bounds_trace.push_back({lower, upper});
    r.iterations = iter;
    if (f == lower) {
      r.plan = make_plan(*inst_, y);
      r.defender_response = defender_.solve(y, dopt);
      r.objective = r.defender_response.value();
      break;
    }
    auto z = to_state(*inst_, plan);
    if (std::find(pool_.begin(), pool_.end(), z) == pool_.end()) pool_.push_back(std::move(z));
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SolveReport solve_mfnip(const InterdictionInstance& inst, int budget, const AttackerOptions& opt) {
  AttackerSolver s(inst, budget, opt);
  return s.solve_mfnip(budget);
}

SolveReport solve_mfnip_r(const InterdictionInstance& inst, int budget, const AttackerOptions& opt) {
  AttackerSolver s(inst, budget, opt);
  return s.solve_mfnip_r(budget);
}

DefenderResult evaluate_plan(const InterdictionInstance& inst, const NodeMask& y) {
  make_plan(inst, y);
  return solve_defender(inst, y);
}

std::vector<SweepRow> budget_sweep(const InterdictionInstance& inst, const std::vector<int>& budgets,
                                   const AttackerOptions& opt) {
  if (budgets.empty()) throw std::invalid_argument("budget list is empty");
  AttackerSolver s(inst, *std::max_element(budgets.begin(), budgets.end()), opt);
  std::vector<SweepRow> rows;
  for (int b : budgets) {
    SweepRow row;
    row.budget = b;
    row.total = inst.victims_and_bottoms();
    row.mfnip = s.solve_mfnip(b);
    row.restructured = s.evaluate_plan(row.mfnip.plan.mask).value();
    row.mfnip_r = s.solve_mfnip_r(b);
    row.mfnip_counts = count_roles(inst, row.mfnip.plan.mask);
    row.mfnip_r_counts = count_roles(inst, row.mfnip_r.plan.mask);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace htnet

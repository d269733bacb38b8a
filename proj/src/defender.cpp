#include "htnet/defender.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace htnet {

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::Budget: return "budget";
    case Rule::OutTrigger: return "out_trigger";
    case Rule::InTrigger: return "in_trigger";
    case Rule::BackupTrigger: return "backup_trigger";
    case Rule::PromotionTrigger: return "promotion_trigger";
    case Rule::PromotedNotInterdicted: return "promoted_not_interdicted";
    case Rule::SinglePromotion: return "single_promotion";
    case Rule::PromotionGate: return "promotion_gate";
    case Rule::SingleRecruitment: return "single_recruitment";
    case Rule::DirectionExclusive: return "direction_exclusive";
  }
  return "?";
}

namespace {

bool is_recruitment(RestructCategory c) {
  return c == RestructCategory::KnownVictim || c == RestructCategory::TakeFromBottom ||
         c == RestructCategory::Recruit;
}

/// Out-activations that consume the owner's trigger allowance.
bool counts_as_out(const InterdictionInstance& inst, const RestructArc& a) {
  return is_recruitment(a.category) && inst.nodes[a.from].role == NodeRole::Trafficker;
}

std::vector<std::size_t> trigger_nodes(const InterdictionInstance& inst) {
  std::vector<std::size_t> t(inst.restruct_arcs.size(), inst.source);
  for (const auto& b : inst.backups) t[b.activation] = b.trafficker;
  for (const auto& p : inst.promotables) t[p.activation] = p.bottom;
  return t;
}

std::string label(const InterdictionInstance& inst, std::size_t node) {
  return to_string(inst.nodes[node].role) + " " + std::to_string(inst.nodes[node].id.value);
}

}  // namespace

FeasibilityReport is_feasible(const InterdictionInstance& inst, const NodeMask& y,
                              const RestructuringPlan& z) {
  check_structure(inst, y);
  const auto n_arcs = inst.restruct_arcs.size();
  for (auto a : z.activated_out)
    if (a >= n_arcs) throw std::invalid_argument("restructure arc index out of range");
  for (auto a : z.activated_in) {
    if (a >= n_arcs) throw std::invalid_argument("restructure arc index out of range");
    if (!inst.restruct_arcs[a].allows_in)
      throw std::invalid_argument("arc " + std::to_string(a) + " cannot be in-activated");
  }

  FeasibilityReport rep;
  auto fail = [&](Rule r, const std::string& msg) {
    rep.feasible = false;
    rep.violations.push_back(Violation{r, msg});
  };
  const auto trig = trigger_nodes(inst);
  const auto n = inst.nodes.size();
  std::vector<int> spent(n, 0), out_used(n, 0), in_used(n, 0), recruited(n, 0), promos(n, 0),
      backups(n, 0), promos_by_bottom(n, 0);
  std::vector<std::uint8_t> active(n_arcs, 0);
  for (auto a : z.activated_out) active[a] |= 1;
  for (auto a : z.activated_in) active[a] |= 2;

  for (std::size_t a = 0; a < n_arcs; ++a) {
    if (!active[a]) continue;
    const auto& arc = inst.restruct_arcs[a];
    const int copies = (active[a] & 1) + ((active[a] >> 1) & 1);
    spent[arc.owner] += arc.cost * copies;
    if ((active[a] & 1) && counts_as_out(inst, arc)) ++out_used[arc.from];
    if (active[a] & 2) ++in_used[arc.to];
    if (is_recruitment(arc.category)) recruited[arc.to] += copies;
    if (arc.category == RestructCategory::BackupActivate) backups[trig[a]] += copies;
    if (arc.category == RestructCategory::PromoteActivate) {
      promos[arc.owner] += copies;
      promos_by_bottom[trig[a]] += copies;
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    if (spent[i] > inst.schedule.b_restructure)
      fail(Rule::Budget, label(inst, i) + " spends " + std::to_string(spent[i]) + " > " +
                             std::to_string(inst.schedule.b_restructure));
  for (std::size_t i = 0; i < n; ++i) {
    if (!out_used[i]) continue;
    int limit = 0;
    for (auto h : inst.own_victims[i]) limit += y[h] ? 1 : 0;
    if (out_used[i] > limit)
      fail(Rule::OutTrigger, label(inst, i) + " recruits " + std::to_string(out_used[i]) +
                                 " with " + std::to_string(limit) + " own victims interdicted");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!in_used[j]) continue;
    int limit = 0;
    for (auto h : inst.controlling_traffickers[j]) limit += y[h] ? 1 : 0;
    if (in_used[j] > limit)
      fail(Rule::InTrigger, label(inst, j) + " in-recruited " + std::to_string(in_used[j]) +
                                " times with " + std::to_string(limit) +
                                " of its traffickers interdicted");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (backups[i] > (y[i] ? 1 : 0))
      fail(Rule::BackupTrigger, "back-up activated for non-interdicted " + label(inst, i));
  for (std::size_t i = 0; i < n; ++i)
    if (promos_by_bottom[i] > (y[i] ? 1 : 0))
      fail(Rule::PromotionTrigger, "promotion while " + label(inst, i) + " is not interdicted");
  for (std::size_t a = 0; a < n_arcs; ++a)
    if (active[a] && inst.restruct_arcs[a].category == RestructCategory::PromoteActivate &&
        y[inst.restruct_arcs[a].to])
      fail(Rule::PromotedNotInterdicted,
           "interdicted " + label(inst, inst.restruct_arcs[a].to) + " promoted");
  for (std::size_t i = 0; i < n; ++i)
    if (promos[i] > 1)
      fail(Rule::SinglePromotion, label(inst, i) + " promotes " + std::to_string(promos[i]));
  for (std::size_t a = 0; a < n_arcs; ++a) {
    const auto& arc = inst.restruct_arcs[a];
    if (active[a] && arc.gate && !active[*arc.gate])
      fail(Rule::PromotionGate, "arc " + std::to_string(a) + " used without its promotion");
  }
  for (std::size_t j = 0; j < n; ++j)
    if (recruited[j] > 1)
      fail(Rule::SingleRecruitment,
           label(inst, j) + " recruited " + std::to_string(recruited[j]) + " times");
  for (std::size_t a = 0; a < n_arcs; ++a)
    if (active[a] == 3)
      fail(Rule::DirectionExclusive, "arc " + std::to_string(a) + " is both out and in");
  return rep;
}

FeasibilityTracker::FeasibilityTracker(const InterdictionInstance& inst, const NodeMask& y)
    : inst_(&inst),
      y_(&y),
      state_(inst.restruct_arcs.size(), kInactive),
      spent_(inst.nodes.size(), 0),
      out_used_(inst.nodes.size(), 0),
      out_limit_(inst.nodes.size(), 0),
      in_used_(inst.nodes.size(), 0),
      in_limit_(inst.nodes.size(), 0),
      recruited_(inst.nodes.size(), 0),
      promotions_(inst.nodes.size(), 0),
      trigger_(trigger_nodes(inst)) {
  check_structure(inst, y);
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    for (auto h : inst.own_victims[i]) out_limit_[i] += y[h] ? 1 : 0;
    for (auto h : inst.controlling_traffickers[i]) in_limit_[i] += y[h] ? 1 : 0;
  }
}

bool FeasibilityTracker::allowed_ignoring_gate(std::size_t a, std::uint8_t mode) const {
  const auto& inst = *inst_;
  const auto& y = *y_;
  const auto& arc = inst.restruct_arcs[a];
  if (state_[a] != kInactive) return false;
  if (mode == kIn && !arc.allows_in) return false;
  if (spent_[arc.owner] + arc.cost > inst.schedule.b_restructure) return false;
  if (mode == kOut && counts_as_out(inst, arc) && out_used_[arc.from] >= out_limit_[arc.from])
    return false;
  if (mode == kIn && in_used_[arc.to] >= in_limit_[arc.to]) return false;
  switch (arc.category) {
    case RestructCategory::BackupActivate:
      if (!y[trigger_[a]]) return false;
      break;
    case RestructCategory::PromoteActivate:
      if (!y[trigger_[a]] || y[arc.to] || promotions_[arc.owner] > 0) return false;
      break;
    default: break;
  }
  if (is_recruitment(arc.category) && recruited_[arc.to] > 0) return false;
  return true;
}

bool FeasibilityTracker::allowed(std::size_t a, std::uint8_t mode) const {
  const auto& arc = inst_->restruct_arcs[a];
  if (arc.gate && state_[*arc.gate] == kInactive) return false;
  return allowed_ignoring_gate(a, mode);
}

int FeasibilityTracker::budget_left(std::size_t owner) const {
  return inst_->schedule.b_restructure - spent_[owner];
}

bool FeasibilityTracker::useful(std::size_t a, std::uint8_t mode) const {
  const auto& arc = inst_->restruct_arcs[a];
  const auto& y = *y_;
  if (y[arc.to]) return false;
  if (arc.from != inst_->source && y[arc.from]) return false;
  return allowed_ignoring_gate(a, mode);
}

void FeasibilityTracker::add(std::size_t a, std::uint8_t mode) {
  const auto& inst = *inst_;
  const auto& arc = inst.restruct_arcs[a];
  state_[a] = mode;
  spent_[arc.owner] += arc.cost;
  if (mode == kOut && counts_as_out(inst, arc)) ++out_used_[arc.from];
  if (mode == kIn) ++in_used_[arc.to];
  if (is_recruitment(arc.category)) ++recruited_[arc.to];
  if (arc.category == RestructCategory::PromoteActivate) ++promotions_[arc.owner];
}

void FeasibilityTracker::remove(std::size_t a) {
  const auto& inst = *inst_;
  const auto& arc = inst.restruct_arcs[a];
  const auto mode = state_[a];
  if (mode == kInactive) return;
  state_[a] = kInactive;
  spent_[arc.owner] -= arc.cost;
  if (mode == kOut && counts_as_out(inst, arc)) --out_used_[arc.from];
  if (mode == kIn) --in_used_[arc.to];
  if (is_recruitment(arc.category)) --recruited_[arc.to];
  if (arc.category == RestructCategory::PromoteActivate) --promotions_[arc.owner];
}

RestructuringPlan feasible_components(const InterdictionInstance& inst, const NodeMask& y,
                                      const RestructuringPlan& z) {
  const auto want = to_state(inst, z);
  FeasibilityTracker tr(inst, y);
  for (std::size_t a = 0; a < want.size(); ++a)
    if (want[a] != kInactive && tr.allowed(a, want[a])) tr.add(a, want[a]);
  return to_plan(tr.state());
}

DefenderSolver::DefenderSolver(const InterdictionInstance& inst)
    : inst_(&inst), flow_(inst), promotion_(inst.nodes.size()) {
  for (const auto& p : inst.promotables) promotion_[p.victim].push_back({p.activation, p.gain});
  build_bound_graph();
}

bool DefenderSolver::out_of_time() {
  if (opt_.node_limit && stats_.nodes > opt_.node_limit) return true;
  if (opt_.deadline && (stats_.nodes & 63) == 0 &&
      std::chrono::steady_clock::now() > *opt_.deadline)
    return true;
  return false;
}

int DefenderSolver::greedy(FeasibilityTracker& tr, ActivationState& out) {
  const auto& y = *y_;
  ++stats_.flow_evaluations;
  int cur = flow_.value(y, tr.state());
  std::vector<std::size_t> applied;
  for (;;) {
    int best_gain = 0;
    std::vector<std::pair<std::size_t, std::uint8_t>> choice;
    for (const auto& c : cands_) {
      for (auto m : c.modes) {
        if (!tr.allowed(c.arc, m)) continue;
        tr.add(c.arc, m);
        ++stats_.flow_evaluations;
        const int v = flow_.value(y, tr.state());
        if (v - cur > best_gain) {
          best_gain = v - cur;
          choice = {{c.arc, m}};
        } else if (v == cur &&
                   inst_->restruct_arcs[c.arc].category == RestructCategory::PromoteActivate) {
          // A promotion often pays off only together with an assignment.
          for (const auto& g : cands_) {
            const auto& ga = inst_->restruct_arcs[g.arc];
            if (!ga.gate || *ga.gate != c.arc) continue;
            for (auto m2 : g.modes) {
              if (!tr.allowed(g.arc, m2)) continue;
              tr.add(g.arc, m2);
              ++stats_.flow_evaluations;
              const int v2 = flow_.value(y, tr.state());
              tr.remove(g.arc);
              if (v2 - cur > best_gain) {
                best_gain = v2 - cur;
                choice = {{c.arc, m}, {g.arc, m2}};
              }
            }
          }
        }
        tr.remove(c.arc);
      }
    }
    if (best_gain <= 0) break;
    for (auto [a, m] : choice) {
      tr.add(a, m);
      applied.push_back(a);
    }
    cur += best_gain;
  }
  out = tr.state();
  for (auto a : applied) tr.remove(a);
  return cur;
}

void DefenderSolver::build_bound_graph() {
  const auto& inst = *inst_;
  const auto n = inst.nodes.size();
  const auto m = inst.restruct_arcs.size();
  auto& bg = bound_;
  std::map<std::pair<int, std::size_t>, std::size_t> group_of;
  std::map<std::size_t, std::size_t> hub_of;
  std::vector<std::vector<std::size_t>> arc_groups(m);
  auto group = [&](int kind, std::size_t from, std::uint8_t mode, bool hubbed) {
    auto [it, fresh] = group_of.try_emplace({kind, from}, bg.group_arcs.size());
    if (fresh) {
      bg.group_arcs.emplace_back();
      bg.group_from.push_back(from);
      bg.group_mode.push_back(mode);
      bg.group_kind.push_back(kind);
      std::optional<std::size_t> hub;
      if (hubbed) {
        auto [h, new_hub] = hub_of.try_emplace(from, bg.hub_from.size());
        if (new_hub) {
          bg.hub_from.push_back(from);
          bg.hub_groups.emplace_back();
        }
        bg.hub_groups[h->second].push_back(it->second);
        hub = h->second;
      }
      bg.group_hub.push_back(hub);
    }
    return it->second;
  };
  for (std::size_t a = 0; a < m; ++a) {
    const auto& arc = inst.restruct_arcs[a];
    std::vector<std::size_t> gs;
    if (counts_as_out(inst, arc)) {
      gs.push_back(group(0, arc.from, kOut, true));
      if (arc.allows_in) gs.push_back(group(1, arc.from, kIn, true));
    } else if (arc.category == RestructCategory::GiveToBottom) {
      gs.push_back(group(2, arc.from, kOut, false));
    } else if (arc.category == RestructCategory::AssignToPromoted) {
      gs.push_back(group(3, arc.from, kOut, false));
    } else if (arc.category == RestructCategory::PromoteActivate) {
      // Keyed by owner: at most one promotion per operation.
      auto g = group(5, arc.owner, kOut, false);
      bg.group_from[g] = arc.from;
      gs.push_back(g);
    } else if (arc.allows_in) {
      gs.push_back(group(4, arc.from, kIn, false));
    }
    for (auto g : gs) bg.group_arcs[g].push_back(a);
    arc_groups[a] = gs;
  }
  const auto groups = bg.group_arcs.size();
  const auto hubs = bg.hub_from.size();
  // Promotion gain as a bypass of the victim's split arc, shared by all
  // promotables of one owner since only one promotion can happen.
  std::map<std::size_t, std::size_t> gain_hub;
  for (const auto& p : inst.promotables)
    gain_hub.try_emplace(inst.restruct_arcs[p.activation].owner, gain_hub.size());
  const auto base = 2 * n + groups + hubs;
  bg.graph = Dinic(base + 2 * gain_hub.size());
  for (std::size_t i = 0; i < n; ++i) bg.node_edge.push_back(bg.graph.add_edge(2 * i, 2 * i + 1, 0));
  for (const auto& a : inst.arcs) bg.graph.add_edge(2 * a.from + 1, 2 * a.to, a.capacity);
  for (const auto& a : inst.restruct_arcs)
    bg.direct_edge.push_back(bg.graph.add_edge(2 * a.from + 1, 2 * a.to, 0));
  for (std::size_t h = 0; h < hubs; ++h)
    bg.hub_edge.push_back(bg.graph.add_edge(2 * bg.hub_from[h] + 1, 2 * n + groups + h, 0));
  for (std::size_t g = 0; g < groups; ++g) {
    const auto entry = bg.group_hub[g] ? 2 * n + groups + *bg.group_hub[g] : 2 * bg.group_from[g] + 1;
    bg.entry_edge.push_back(bg.graph.add_edge(entry, 2 * n + g, 0));
  }
  // gadget_edges[a][k] belongs to the k-th group listing arc a.
  bg.gadget_edges.assign(m, {});
  for (std::size_t a = 0; a < m; ++a)
    for (auto g : arc_groups[a])
      bg.gadget_edges[a].push_back(bg.graph.add_edge(2 * n + g, 2 * inst.restruct_arcs[a].to, 0));

  bg.gain_edge.assign(gain_hub.size(), 0);
  for (std::size_t h = 0; h < gain_hub.size(); ++h)
    bg.gain_edge[h] = bg.graph.add_edge(base + 2 * h, base + 2 * h + 1, 0);
  for (const auto& p : inst.promotables) {
    const auto h = gain_hub.at(inst.restruct_arcs[p.activation].owner);
    bg.bypass_in.push_back(bg.graph.add_edge(2 * p.victim, base + 2 * h, 0));
    bg.bypass_out.push_back(bg.graph.add_edge(base + 2 * h + 1, 2 * p.victim + 1, 0));
    bg.bypass_hub.push_back(h);
  }
}

namespace {

/// Largest total gain from arcs affordable within `budget`, at most `limit` arcs.
int unit_bound(std::vector<int>& costs, std::vector<int>& gains, int budget, std::size_t limit) {
  std::sort(costs.begin(), costs.end());
  std::size_t k = 0;
  while (k < costs.size() && k < limit && costs[k] <= budget) budget -= costs[k++];
  std::sort(gains.begin(), gains.end(), std::greater<>());
  int units = 0;
  for (std::size_t i = 0; i < k; ++i) units += gains[i];
  return units;
}

}  // namespace

int DefenderSolver::upper_bound(std::size_t pos) {
  const auto& inst = *inst_;
  const auto& y = *y_;
  const auto& tr = *tracker_;
  auto& bg = bound_;
  scratch_ = tr.state();
  possible_.assign(inst.restruct_arcs.size(), 0);
  for (std::size_t k = pos; k < cands_.size(); ++k) {
    const auto a = cands_[k].arc;
    const auto& arc = inst.restruct_arcs[a];
    if (arc.gate && scratch_[*arc.gate] == kInactive) continue;
    for (auto m : cands_[k].modes) {
      // Feasibility against the committed state only; the rest is relaxed.
      if (tr.allowed_ignoring_gate(a, m)) {
        possible_[a] |= m;
        scratch_[a] = kOut;
      }
    }
  }
  const int M = inst.big_m;
  auto absorb = [&](std::size_t v) {
    if (y[v]) return 0;
    int cap = inst.nodes[v].capacity;
    for (auto [arc, gain] : promotion_[v])
      if (scratch_[arc] != kInactive) cap += gain;
    return cap;
  };
  // Gains go through the owner's shared bypass, not the node itself.
  for (std::size_t i = 0; i < inst.nodes.size(); ++i)
    bg.graph.set_capacity(bg.node_edge[i], y[i] ? 0 : inst.nodes[i].capacity);
  std::vector<int> hub_gain(bg.gain_edge.size(), 0);
  for (std::size_t k = 0; k < inst.promotables.size(); ++k) {
    const auto& p = inst.promotables[k];
    const bool on = !y[p.victim] && scratch_[p.activation] != kInactive;
    bg.graph.set_capacity(bg.bypass_in[k], on ? M : 0);
    bg.graph.set_capacity(bg.bypass_out[k], on ? M : 0);
    if (on) hub_gain[bg.bypass_hub[k]] = std::max(hub_gain[bg.bypass_hub[k]], p.gain);
  }
  for (std::size_t h = 0; h < hub_gain.size(); ++h) bg.graph.set_capacity(bg.gain_edge[h], hub_gain[h]);
  for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a) {
    const bool grouped = !bg.gadget_edges[a].empty();
    const bool direct = tr.state()[a] != kInactive || (!grouped && possible_[a]);
    bg.graph.set_capacity(bg.direct_edge[a], direct ? M : 0);
  }
  std::vector<std::size_t> slot(inst.restruct_arcs.size(), 0);
  std::vector<int> costs, gains;
  auto budget_of = [&](std::size_t g, std::size_t owner) {
    int left = tr.budget_left(owner);
    if (bg.group_kind[g] == 3) {
      // Assignments need the promotion paid first.
      bool active = false;
      int cost = 0;
      for (auto [arc, gain] : promotion_[bg.group_from[g]]) {
        active = active || tr.state()[arc] != kInactive;
        cost = inst.restruct_arcs[arc].cost;
      }
      if (!active) left -= cost;
    }
    return left;
  };
  for (std::size_t g = 0; g < bg.group_arcs.size(); ++g) {
    costs.clear();
    gains.clear();
    const auto mode = bg.group_mode[g];
    std::size_t owner = 0;
    for (auto a : bg.group_arcs[g]) {
      const bool on = tr.state()[a] == kInactive && (possible_[a] & mode);
      bg.graph.set_capacity(bg.gadget_edges[a][slot[a]++], on ? M : 0);
      if (!on) continue;
      owner = inst.restruct_arcs[a].owner;
      costs.push_back(inst.restruct_arcs[a].cost);
      gains.push_back(absorb(inst.restruct_arcs[a].to));
    }
    int units = 0;
    if (!costs.empty()) {
      std::size_t limit = costs.size();
      if (bg.group_kind[g] == 0)
        limit = static_cast<std::size_t>(std::max(0, tr.out_left(bg.group_from[g])));
      if (bg.group_kind[g] == 5) limit = 1;
      units = unit_bound(costs, gains, budget_of(g, owner), limit);
    }
    bg.graph.set_capacity(bg.entry_edge[g], units);
  }
  for (std::size_t h = 0; h < bg.hub_from.size(); ++h) {
    costs.clear();
    gains.clear();
    std::size_t owner = 0;
    std::vector<std::size_t> seen;
    for (auto g : bg.hub_groups[h])
      for (auto a : bg.group_arcs[g]) {
        if (tr.state()[a] != kInactive || !(possible_[a] & bg.group_mode[g])) continue;
        if (std::find(seen.begin(), seen.end(), a) != seen.end()) continue;
        seen.push_back(a);
        owner = inst.restruct_arcs[a].owner;
        costs.push_back(inst.restruct_arcs[a].cost);
        gains.push_back(absorb(inst.restruct_arcs[a].to));
      }
    const int units = costs.empty() ? 0 : unit_bound(costs, gains, tr.budget_left(owner), costs.size());
    bg.graph.set_capacity(bg.hub_edge[h], units);
  }
  ++stats_.flow_evaluations;
  return bg.graph.run(2 * inst.source + 1, 2 * inst.sink);
}

void DefenderSolver::dfs(std::size_t pos, int cur_val) {
  ++stats_.nodes;
  if (aborted_ || out_of_time()) {
    aborted_ = true;
    return;
  }
  auto record = [&](int v) {
    if (v > best_val_ || (v == best_val_ && !found_)) {
      best_val_ = v;
      found_ = true;
      best_state_ = tracker_->state();
    }
  };
  if (pos == cands_.size()) {
    record(cur_val);
    return;
  }
  const int ub = upper_bound(pos);
  if (ub < best_val_ || (ub == best_val_ && found_)) return;
  if (cur_val == ub) {
    // Skipping every remaining arc already attains the bound.
    record(cur_val);
    return;
  }
  const auto& c = cands_[pos];
  dfs(pos + 1, cur_val);
  for (auto m : c.modes) {
    if (aborted_) return;
    if (!tracker_->allowed(c.arc, m)) continue;
    tracker_->add(c.arc, m);
    ++stats_.flow_evaluations;
    const int v = flow_.value(*y_, tracker_->state());
    dfs(pos + 1, v);
    tracker_->remove(c.arc);
  }
}

int DefenderSolver::solve_value(const NodeMask& y, RestructuringPlan* plan,
                                const DefenderOptions& opt) {
  const auto& inst = *inst_;
  FeasibilityTracker tr(inst, y);
  y_ = &y;
  tracker_ = &tr;
  opt_ = opt;
  stats_ = {};
  aborted_ = false;
  found_ = false;
  cands_.clear();
  std::vector<std::uint8_t> is_cand(inst.restruct_arcs.size(), 0);
  for (std::size_t a = 0; a < inst.restruct_arcs.size(); ++a) {
    const auto& arc = inst.restruct_arcs[a];
    if (arc.gate && !is_cand[*arc.gate]) continue;
    Candidate c{a, {}};
    if (tr.useful(a, kOut)) c.modes.push_back(kOut);
    if (arc.allows_in && tr.useful(a, kIn)) c.modes.push_back(kIn);
    if (c.modes.empty()) continue;
    is_cand[a] = 1;
    cands_.push_back(std::move(c));
  }

  ActivationState greedy_state;
  best_val_ = greedy(tr, greedy_state);
  const int base = flow_.value(y, tr.state());
  ++stats_.flow_evaluations;
  dfs(0, base);
  if (!found_) best_state_ = greedy_state;
  if (plan) *plan = to_plan(best_state_);
  tracker_ = nullptr;
  return best_val_;
}

DefenderResult DefenderSolver::solve(const NodeMask& y, const DefenderOptions& opt) {
  DefenderResult r;
  solve_value(y, &r.plan, opt);
  r.optimal = !aborted_;
  r.explored = stats_;
  r.flow = flow_.assignment(y, to_state(*inst_, r.plan));
  return r;
}

DefenderResult solve_defender(const InterdictionInstance& inst, const NodeMask& y,
                              const DefenderOptions& opt) {
  DefenderSolver solver(inst);
  return solver.solve(y, opt);
}

}  // namespace htnet

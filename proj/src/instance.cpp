#include "htnet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace htnet {

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Source: return "source";
    case NodeRole::Sink: return "sink";
    case NodeRole::Trafficker: return "trafficker";
    case NodeRole::Bottom: return "bottom";
    case NodeRole::Victim: return "victim";
    case NodeRole::Recruitable: return "recruitable";
    case NodeRole::Backup: return "backup";
  }
  return "?";
}

std::string to_string(RestructCategory category) {
  switch (category) {
    case RestructCategory::BackupActivate: return "backup_activate";
    case RestructCategory::Recruit: return "recruit";
    case RestructCategory::KnownVictim: return "known_victim";
    case RestructCategory::PromoteActivate: return "promote_activate";
    case RestructCategory::TakeFromBottom: return "take_from_bottom";
    case RestructCategory::GiveToBottom: return "give_to_bottom";
    case RestructCategory::AssignToPromoted: return "assign_to_promoted";
  }
  return "?";
}

NodeRole node_role_from_string(const std::string& s) {
  for (auto r : {NodeRole::Source, NodeRole::Sink, NodeRole::Trafficker, NodeRole::Bottom,
                 NodeRole::Victim, NodeRole::Recruitable, NodeRole::Backup})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown node role '" + s + "'");
}

RestructCategory restruct_category_from_string(const std::string& s) {
  for (auto c : {RestructCategory::BackupActivate, RestructCategory::Recruit,
                 RestructCategory::KnownVictim, RestructCategory::PromoteActivate,
                 RestructCategory::TakeFromBottom, RestructCategory::GiveToBottom,
                 RestructCategory::AssignToPromoted})
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown restructure category '" + s + "'");
}

CostSchedule default_schedule() { return CostSchedule{}; }

void validate_schedule(const CostSchedule& s) {
  auto nonneg = [](int v, const char* name) {
    if (v < 0) throw ConfigError(std::string(name) + " must be >= 0");
  };
  nonneg(s.r_trafficker, "r_trafficker");
  nonneg(s.r_bottom, "r_bottom");
  nonneg(s.r_victim, "r_victim");
  nonneg(s.d_bottom, "d_bottom");
  nonneg(s.d_victim, "d_victim");
  nonneg(s.r_min, "r_min");
  nonneg(s.b_restructure, "b_restructure");
  nonneg(s.c_known_victim, "c_known_victim");
  nonneg(s.c_bottom_transfer, "c_bottom_transfer");
  nonneg(s.c_recruit, "c_recruit");
  nonneg(s.c_backup, "c_backup");
  nonneg(s.c_promote, "c_promote");
  nonneg(s.c_assign_promoted, "c_assign_promoted");
  nonneg(s.backup_threshold, "backup_threshold");
  if (s.r_min > s.r_trafficker) throw ConfigError("r_min must not exceed r_trafficker");
  // Keeps plan cost monotone under set inclusion, which the attacker relies on.
  if (s.d_bottom > s.r_bottom) throw ConfigError("d_bottom must not exceed r_bottom");
  if (s.d_victim > s.r_victim) throw ConfigError("d_victim must not exceed r_victim");
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  unit(s.recruitable_fraction, "recruitable_fraction");
  unit(s.promotable_fraction, "promotable_fraction");
  unit(s.recruit_eligibility_prob, "recruit_eligibility_prob");
  if (s.recruit_eligibility_prob <= 0.0)
    throw ConfigError("recruit_eligibility_prob must be positive");
  if (!(s.trafficker_capacity_slack >= 1.0))
    throw ConfigError("trafficker_capacity_slack must be >= 1");
}

void InterdictionInstance::finalize() {
  id_index.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) id_index[nodes[i].id] = i;
  own_victims.assign(nodes.size(), {});
  controlling_traffickers.assign(nodes.size(), {});
  for (const auto& a : arcs) {
    if (nodes[a.from].role == NodeRole::Trafficker && nodes[a.to].role == NodeRole::Victim) {
      own_victims[a.from].push_back(a.to);
      controlling_traffickers[a.to].push_back(a.from);
    }
  }
  for (auto& v : own_victims) std::sort(v.begin(), v.end());
  for (auto& v : controlling_traffickers) std::sort(v.begin(), v.end());
  if (reductions.size() != nodes.size()) reductions.resize(nodes.size());
}

std::size_t InterdictionInstance::index_of(NodeId id) const {
  auto it = id_index.find(id);
  if (it == id_index.end())
    throw std::out_of_range("node " + std::to_string(id.value) + " not in instance");
  return it->second;
}

bool InterdictionInstance::interdictable(std::size_t node) const {
  switch (nodes[node].role) {
    case NodeRole::Source:
    case NodeRole::Sink: return false;
    case NodeRole::Recruitable:
    case NodeRole::Backup: return schedule.latent_interdictable;
    default: return true;
  }
}

NodeMask InterdictionInstance::mask_of(const std::vector<NodeId>& ids) const {
  NodeMask m = empty_mask();
  for (auto id : ids) m[index_of(id)] = 1;
  return m;
}

std::vector<NodeId> InterdictionInstance::ids_of(const NodeMask& mask) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < mask.size() && i < nodes.size(); ++i)
    if (mask[i]) out.push_back(nodes[i].id);
  std::sort(out.begin(), out.end());
  return out;
}

int InterdictionInstance::victims_and_bottoms() const {
  int n = 0;
  for (const auto& node : nodes)
    if (node.role == NodeRole::Victim || node.role == NodeRole::Bottom) ++n;
  return n;
}

namespace {

int ceil_count(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

}  // namespace

InterdictionInstance build_instance(const TraffickingNetwork& net, const CostSchedule& sched,
                                    Rng& rng) {
  auto problems = validate_network(net);
  if (!problems.empty()) {
    std::string msg = "invalid network: " + problems.front();
    if (problems.size() > 1) msg += " (+" + std::to_string(problems.size() - 1) + " more)";
    throw InvalidNetwork(msg);
  }
  validate_schedule(sched);

  InterdictionInstance inst;
  inst.schedule = sched;
  std::map<NodeId, std::size_t> dense;
  std::uint32_t next_id = 0;
  for (const auto& [id, p] : net.persons) {
    InstanceNode node;
    node.id = id;
    node.operation = p.operation;
    switch (p.role) {
      case Role::Trafficker: node.role = NodeRole::Trafficker; node.cost = sched.r_trafficker; break;
      case Role::Bottom: node.role = NodeRole::Bottom; node.cost = sched.r_bottom; break;
      case Role::Victim: node.role = NodeRole::Victim; node.cost = sched.r_victim; node.capacity = 1; break;
    }
    dense[id] = inst.nodes.size();
    inst.nodes.push_back(node);
    next_id = std::max(next_id, id.value + 1);
  }
  auto at = [&](NodeId id) { return dense.at(id); };

  std::size_t victim_total = 0;
  for (const auto& op : net.operations) {
    auto& opg = inst.operations.emplace_back();
    opg.trafficker = at(op.trafficker);
    for (auto v : op.victims()) opg.victims.push_back(at(v));
    std::sort(opg.victims.begin(), opg.victims.end());
    victim_total += op.victim_count();
    inst.nodes[opg.trafficker].capacity =
        ceil_count(sched.trafficker_capacity_slack * static_cast<double>(op.victim_count()));
    if (op.bottom) {
      opg.bottom = at(*op.bottom);
      inst.nodes[*opg.bottom].capacity = static_cast<int>(op.bottom_victims.size()) + 1;
    }
  }

  // Latent recruitables, each with a nonempty set of eligible traffickers.
  const std::size_t num_recruitable =
      static_cast<std::size_t>(ceil_count(sched.recruitable_fraction * static_cast<double>(victim_total)));
  for (std::size_t r = 0; r < num_recruitable; ++r) {
    InstanceNode node;
    node.id = NodeId{next_id++};
    node.role = NodeRole::Recruitable;
    node.capacity = 1;
    node.cost = sched.r_victim;
    RecruitableNode rec;
    rec.node = inst.nodes.size();
    inst.nodes.push_back(node);
    while (rec.eligible.empty()) {
      for (const auto& opg : inst.operations)
        if (rng.bernoulli(sched.recruit_eligibility_prob)) rec.eligible.push_back(opg.trafficker);
    }
    inst.recruitables.push_back(std::move(rec));
  }

  for (std::size_t o = 0; o < net.operations.size(); ++o) {
    const auto& op = net.operations[o];
    const std::size_t members = op.victim_count() + (op.bottom ? 1 : 0);
    if (static_cast<int>(members) < sched.backup_threshold) continue;
    InstanceNode node;
    node.id = NodeId{next_id++};
    node.role = NodeRole::Backup;
    node.operation = o;
    node.capacity = inst.nodes[inst.operations[o].trafficker].capacity;
    node.cost = sched.r_trafficker;
    inst.operations[o].backup = inst.nodes.size();
    inst.nodes.push_back(node);
  }

  inst.source = inst.nodes.size();
  inst.nodes.push_back(InstanceNode{NodeId{next_id++}, NodeRole::Source, 0, 0, std::nullopt});
  inst.sink = inst.nodes.size();
  inst.nodes.push_back(InstanceNode{NodeId{next_id++}, NodeRole::Sink, 0, 0, std::nullopt});

  int bottoms = 0;
  for (const auto& opg : inst.operations) bottoms += opg.bottom ? 1 : 0;
  inst.big_m = static_cast<int>(victim_total) + bottoms + static_cast<int>(num_recruitable) + 1;
  const int M = inst.big_m;
  // Terminal nodes are uncapacitated; any value above total supply will do.
  inst.nodes[inst.source].capacity = M * static_cast<int>(inst.nodes.size());
  inst.nodes[inst.sink].capacity = inst.nodes[inst.source].capacity;

  // Base arcs.
  std::set<std::pair<std::size_t, std::size_t>> base;
  auto add_arc = [&](std::size_t from, std::size_t to, int cap) {
    if (base.insert({from, to}).second) inst.arcs.push_back(FlowArc{from, to, cap});
  };
  for (const auto& opg : inst.operations) {
    add_arc(inst.source, opg.trafficker, M);
    if (opg.bottom) add_arc(inst.source, *opg.bottom, M);
  }
  for (const auto& a : net.arcs) {
    auto u = at(a.from), v = at(a.to);
    auto ru = inst.nodes[u].role, rv = inst.nodes[v].role;
    if (ru == NodeRole::Victim && rv == NodeRole::Victim) {
      add_arc(u, v, M);
      add_arc(v, u, M);
    } else if (rv == NodeRole::Victim && (ru == NodeRole::Trafficker || ru == NodeRole::Bottom)) {
      add_arc(u, v, M);
    } else if (ru == NodeRole::Victim && (rv == NodeRole::Trafficker || rv == NodeRole::Bottom)) {
      add_arc(v, u, M);
    }
    // Trafficker-bottom control is carried by the source arc.
  }
  for (const auto& a : net.trafficker_social) {
    add_arc(at(a.from), at(a.to), 0);
    add_arc(at(a.to), at(a.from), 0);
  }
  for (std::size_t o = 0; o < net.operations.size(); ++o) {
    const auto& opg = inst.operations[o];
    if (!opg.backup) continue;
    for (auto v : net.operations[o].trafficker_victims) add_arc(*opg.backup, at(v), M);
  }
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    auto r = inst.nodes[i].role;
    if (r == NodeRole::Bottom || r == NodeRole::Victim || r == NodeRole::Recruitable)
      add_arc(i, inst.sink, 1);
  }

  // Restructure-able arcs, collected per category.
  std::map<RestructCategory, std::vector<RestructArc>> by_cat;
  auto add_r = [&](RestructCategory cat, std::size_t from, std::size_t to, std::size_t owner,
                   int cost, bool in) {
    by_cat[cat].push_back(RestructArc{from, to, owner, cost, in, cat, std::nullopt});
  };

  for (const auto& opg : inst.operations)
    if (opg.backup)
      add_r(RestructCategory::BackupActivate, inst.source, *opg.backup, opg.trafficker,
            sched.c_backup, false);

  for (const auto& rec : inst.recruitables)
    for (auto t : rec.eligible)
      add_r(RestructCategory::Recruit, t, rec.node, t, sched.c_recruit, false);

  std::map<std::size_t, std::vector<std::size_t>> peers;
  for (const auto& a : net.trafficker_social) {
    peers[at(a.from)].push_back(at(a.to));
    peers[at(a.to)].push_back(at(a.from));
  }
  std::map<std::size_t, std::size_t> op_of_trafficker;
  for (std::size_t o = 0; o < inst.operations.size(); ++o)
    op_of_trafficker[inst.operations[o].trafficker] = o;
  for (const auto& opg : inst.operations) {
    std::set<std::size_t> targets;
    for (auto k : peers[opg.trafficker])
      for (auto v : net.operations[op_of_trafficker.at(k)].trafficker_victims)
        targets.insert(at(v));
    for (auto j : targets)
      if (!base.count({opg.trafficker, j}))
        add_r(RestructCategory::KnownVictim, opg.trafficker, j, opg.trafficker,
              sched.c_known_victim, true);
  }

  for (std::size_t o = 0; o < net.operations.size(); ++o) {
    const auto& op = net.operations[o];
    const auto& opg = inst.operations[o];
    if (!opg.bottom) continue;
    std::vector<std::size_t> pool;
    for (auto v : op.trafficker_victims) pool.push_back(at(v));
    if (pool.empty()) pool = opg.victims;
    std::sort(pool.begin(), pool.end());
    std::size_t want = static_cast<std::size_t>(
        std::max(1, ceil_count(sched.promotable_fraction * static_cast<double>(pool.size()))));
    want = std::min(want, pool.size());
    // Partial Fisher-Yates draw of `want` promotables.
    for (std::size_t i = 0; i < want; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
    std::vector<std::size_t> chosen(pool.begin(), pool.begin() + static_cast<long>(want));
    std::sort(chosen.begin(), chosen.end());
    const int gain = inst.nodes[*opg.bottom].capacity - 1;
    for (auto j : chosen) {
      add_r(RestructCategory::PromoteActivate, inst.source, j, opg.trafficker, sched.c_promote,
            false);
      inst.promotables.push_back(PromotablePair{*opg.bottom, j, gain, 0});
    }

    std::set<std::size_t> to_t, to_b;
    for (auto v : op.trafficker_victims) to_t.insert(at(v));
    for (auto v : op.bottom_victims) to_b.insert(at(v));
    for (auto k : to_b)
      if (!to_t.count(k))
        add_r(RestructCategory::TakeFromBottom, opg.trafficker, k, opg.trafficker,
              sched.c_bottom_transfer, true);
    for (auto k : opg.victims)
      if (!to_b.count(k))
        add_r(RestructCategory::GiveToBottom, *opg.bottom, k, opg.trafficker,
              sched.c_bottom_transfer, false);
    for (auto j : chosen)
      for (auto k : opg.victims)
        if (k != j && !base.count({j, k}))
          add_r(RestructCategory::AssignToPromoted, j, k, opg.trafficker,
                sched.c_assign_promoted, false);
  }

  for (auto& [cat, list] : by_cat) {
    std::stable_sort(list.begin(), list.end(), [](const RestructArc& a, const RestructArc& b) {
      return std::tie(a.owner, a.from, a.to) < std::tie(b.owner, b.from, b.to);
    });
    for (auto& a : list) inst.restruct_arcs.push_back(a);
  }
  std::map<std::size_t, std::size_t> promote_arc;
  for (std::size_t i = 0; i < inst.restruct_arcs.size(); ++i) {
    const auto& a = inst.restruct_arcs[i];
    if (a.category == RestructCategory::PromoteActivate) promote_arc[a.to] = i;
    if (a.category == RestructCategory::BackupActivate) {
      auto o = *inst.nodes[a.to].operation;
      inst.backups.push_back(BackupPair{inst.operations[o].trafficker, a.to, i});
    }
  }
  for (auto& a : inst.restruct_arcs)
    if (a.category == RestructCategory::AssignToPromoted) a.gate = promote_arc.at(a.from);
  for (auto& p : inst.promotables) p.activation = promote_arc.at(p.victim);

  inst.reductions.assign(inst.nodes.size(), {});
  for (const auto& opg : inst.operations) {
    auto& red = inst.reductions[opg.trafficker];
    if (opg.bottom) red.push_back(Reduction{*opg.bottom, sched.d_bottom});
    for (auto v : opg.victims) red.push_back(Reduction{v, sched.d_victim});
    std::sort(red.begin(), red.end(),
              [](const Reduction& a, const Reduction& b) { return a.node < b.node; });
  }

  inst.finalize();
  return inst;
}

InterdictionInstance induced_subinstance(const InterdictionInstance& inst,
                                         const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kept(keep);
  kept.push_back(inst.source);
  kept.push_back(inst.sink);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(inst.nodes.size(), kNone);
  InterdictionInstance sub;
  sub.schedule = inst.schedule;
  sub.big_m = inst.big_m;
  for (auto i : kept) {
    remap[i] = sub.nodes.size();
    sub.nodes.push_back(inst.nodes[i]);
  }
  auto has = [&](std::size_t i) { return remap[i] != kNone; };
  sub.source = remap[inst.source];
  sub.sink = remap[inst.sink];
  for (const auto& a : inst.arcs)
    if (has(a.from) && has(a.to)) sub.arcs.push_back(FlowArc{remap[a.from], remap[a.to], a.capacity});

  // A promotion is meaningless once the bottom it replaces is gone.
  std::vector<std::size_t> trigger(inst.restruct_arcs.size(), inst.source);
  for (const auto& p : inst.promotables) trigger[p.activation] = p.bottom;
  std::vector<std::size_t> arc_remap(inst.restruct_arcs.size(), kNone);
  for (std::size_t i = 0; i < inst.restruct_arcs.size(); ++i) {
    const auto& a = inst.restruct_arcs[i];
    if (!has(a.from) || !has(a.to) || !has(a.owner) || !has(trigger[i])) continue;
    if (a.gate && arc_remap[*a.gate] == kNone) continue;
    RestructArc b = a;
    b.from = remap[a.from];
    b.to = remap[a.to];
    b.owner = remap[a.owner];
    if (a.gate) b.gate = arc_remap[*a.gate];
    arc_remap[i] = sub.restruct_arcs.size();
    sub.restruct_arcs.push_back(b);
  }
  for (const auto& r : inst.recruitables) {
    if (!has(r.node)) continue;
    RecruitableNode nr{remap[r.node], {}};
    for (auto t : r.eligible)
      if (has(t)) nr.eligible.push_back(remap[t]);
    sub.recruitables.push_back(std::move(nr));
  }
  for (const auto& b : inst.backups)
    if (has(b.trafficker) && has(b.backup) && arc_remap[b.activation] != kNone)
      sub.backups.push_back(BackupPair{remap[b.trafficker], remap[b.backup], arc_remap[b.activation]});
  for (const auto& p : inst.promotables)
    if (has(p.bottom) && has(p.victim) && arc_remap[p.activation] != kNone)
      sub.promotables.push_back(
          PromotablePair{remap[p.bottom], remap[p.victim], p.gain, arc_remap[p.activation]});
  sub.reductions.assign(sub.nodes.size(), {});
  for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
    if (!has(i) || i >= inst.reductions.size()) continue;
    for (const auto& r : inst.reductions[i])
      if (has(r.node)) sub.reductions[remap[i]].push_back(Reduction{remap[r.node], r.amount});
  }
  for (const auto& g : inst.operations) {
    if (!has(g.trafficker)) continue;
    OperationGroup ng;
    ng.trafficker = remap[g.trafficker];
    if (g.bottom && has(*g.bottom)) ng.bottom = remap[*g.bottom];
    if (g.backup && has(*g.backup)) ng.backup = remap[*g.backup];
    for (auto v : g.victims)
      if (has(v)) ng.victims.push_back(remap[v]);
    sub.operations.push_back(std::move(ng));
  }
  sub.finalize();
  return sub;
}

}  // namespace htnet

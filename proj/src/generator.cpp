#include "htnet/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace htnet {

GeneratorConfig default_generator_config() {
  GeneratorConfig cfg;
  cfg.victim_count_pmf = {{2, 0.10}, {3, 0.17}, {4, 0.33}, {5, 0.20},
                          {6, 0.12}, {7, 0.05}, {8, 0.03}};
  cfg.bottom_prob = {{1, 0.0}, {2, 0.10}, {3, 0.50}, {4, 0.85}, {5, 0.95}, {6, 1.0}};
  cfg.partition_pod_decay = 1.0;
  cfg.minor_prob = 0.4;
  cfg.mixed_pair_prob = 0.2;
  cfg.pod_to_trafficker_prob = {0.8, 0.5, 0.6};
  cfg.pod_to_bottom_prob = {0.6, 0.8, 0.7};
  cfg.intra_op_social_prob = {0.5, 0.25, 0.15};
  cfg.cross_op_social_prob = {0.08, 0.03, 0.02};
  cfg.ws_neighbors = 2;
  cfg.ws_rewire = 0.3;
  cfg.seed = 1;
  return cfg;
}

namespace {

void require_probability(double p, const std::string& name) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(name + " must lie in [0,1]");
}

double pair_prob(const ByAgePair& probs, AgeClass a, AgeClass b) {
  bool ma = a == AgeClass::Minor;
  bool mb = b == AgeClass::Minor;
  if (ma && mb) return probs.minor_minor;
  if (ma || mb) return probs.minor_adult;
  return probs.adult_adult;
}

double class_prob(const ByPodClass& probs, PodClass c) {
  switch (c) {
    case PodClass::Adult: return probs.adult;
    case PodClass::Minor: return probs.minor;
    case PodClass::Mixed: return probs.mixed;
  }
  return 0.0;
}

PodClass class_of(const std::vector<AgeClass>& ages) {
  Pod pod;
  pod.ages = ages;
  return pod_class(pod);
}

}  // namespace

void validate_config(const GeneratorConfig& cfg) {
  if (cfg.victim_count_pmf.empty()) throw ConfigError("victim_count_pmf is empty");
  double total = 0.0;
  for (auto [count, p] : cfg.victim_count_pmf) {
    if (count < 1 || count > 12) throw ConfigError("victim_count_pmf support must lie in 1..12");
    require_probability(p, "victim_count_pmf entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("victim_count_pmf must sum to 1");

  if (cfg.bottom_prob.empty()) throw ConfigError("bottom_prob is empty");
  double previous = 0.0;
  for (auto [count, p] : cfg.bottom_prob) {
    if (count < 1) throw ConfigError("bottom_prob keys must be positive");
    require_probability(p, "bottom_prob entry");
    if (p < previous) throw ConfigError("bottom_prob must be non-decreasing in victim count");
    previous = p;
  }
  // Only counts the pmf can actually produce are constrained.
  for (auto [count, p] : cfg.victim_count_pmf)
    if (count >= 6 && p > 0.0 && bottom_probability(cfg, count) != 1.0)
      throw ConfigError("bottom_prob must be 1 for operations with six or more victims");

  if (!(cfg.partition_pod_decay > 0.0)) throw ConfigError("partition_pod_decay must be positive");
  require_probability(cfg.minor_prob, "minor_prob");
  require_probability(cfg.mixed_pair_prob, "mixed_pair_prob");
  for (const auto* probs : {&cfg.pod_to_trafficker_prob, &cfg.pod_to_bottom_prob}) {
    require_probability(probs->adult, "wiring probability");
    require_probability(probs->minor, "wiring probability");
    require_probability(probs->mixed, "wiring probability");
  }
  for (const auto* probs : {&cfg.intra_op_social_prob, &cfg.cross_op_social_prob}) {
    require_probability(probs->minor_minor, "social probability");
    require_probability(probs->minor_adult, "social probability");
    require_probability(probs->adult_adult, "social probability");
    if (probs->minor_minor < probs->adult_adult)
      throw ConfigError("minor-minor social probability must be at least the adult-adult one");
  }
  if (cfg.ws_neighbors < 0 || cfg.ws_neighbors % 2 != 0)
    throw ConfigError("ws_neighbors must be a non-negative even integer");
  require_probability(cfg.ws_rewire, "ws_rewire");
}

double bottom_probability(const GeneratorConfig& cfg, int victims) {
  auto it = cfg.bottom_prob.upper_bound(victims);
  if (it == cfg.bottom_prob.begin()) return 0.0;
  return std::prev(it)->second;
}

int sample_victim_count(const GeneratorConfig& cfg, Rng& rng) {
  if (cfg.victim_count_pmf.empty()) throw ConfigError("victim_count_pmf is empty");
  double u = rng.uniform();
  double acc = 0.0;
  for (auto [count, p] : cfg.victim_count_pmf) {
    acc += p;
    if (u < acc) return count;
  }
  // Rounding slack: fall back to the largest count with positive mass.
  for (auto it = cfg.victim_count_pmf.rbegin(); it != cfg.victim_count_pmf.rend(); ++it)
    if (it->second > 0.0) return it->first;
  throw ConfigError("victim_count_pmf has no positive mass");
}

bool sample_bottom_presence(int victims, const GeneratorConfig& cfg, Rng& rng) {
  return rng.bernoulli(bottom_probability(cfg, victims));
}

namespace {

void partitions_rec(int remaining, int max_part, Partition& current, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions_rec(remaining - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n, int max_part) {
  if (n < 1 || n > 12) throw std::invalid_argument("partition size must lie in 1..12");
  if (max_part < 1) throw std::invalid_argument("max_part must be positive");
  std::vector<Partition> out;
  Partition current;
  partitions_rec(n, max_part, current, out);
  return out;
}

Partition sample_pod_partition(int n, const GeneratorConfig& cfg, Rng& rng) {
  auto all = enumerate_partitions(n);
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& p : all) {
    weights.push_back(std::pow(cfg.partition_pod_decay, static_cast<double>(p.size() - 1)));
    total += weights.back();
  }
  double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    acc += weights[i];
    if (u < acc) return all[i];
  }
  return all.back();
}

std::vector<std::vector<AgeClass>> assign_ages(const Partition& pods, const GeneratorConfig& cfg,
                                               Rng& rng) {
  if (pods.empty()) throw std::invalid_argument("assign_ages needs at least one pod");
  auto draw = [&] { return rng.bernoulli(cfg.minor_prob) ? AgeClass::Minor : AgeClass::Adult; };
  std::vector<std::vector<AgeClass>> ages;
  if (pods.size() == 1) {
    std::vector<AgeClass> each;
    for (int i = 0; i < pods[0]; ++i) each.push_back(draw());
    ages.push_back(std::move(each));
    return ages;
  }
  for (int size : pods) {
    if (size == 2 && rng.bernoulli(cfg.mixed_pair_prob)) {
      bool first_minor = rng.index(2) == 0;
      ages.push_back(first_minor ? std::vector{AgeClass::Minor, AgeClass::Adult}
                                 : std::vector{AgeClass::Adult, AgeClass::Minor});
    } else {
      ages.emplace_back(static_cast<std::size_t>(size), draw());
    }
  }
  return ages;
}

PodWiring wire_pods(const Partition& pods, const std::vector<std::vector<AgeClass>>& ages,
                    bool has_bottom, const GeneratorConfig& cfg, Rng& rng) {
  PodWiring w;
  w.per_victim = pods.size() == 1;
  std::vector<PodClass> classes;
  std::vector<int> sizes;
  if (w.per_victim) {
    for (auto age : ages.at(0)) {
      classes.push_back(age == AgeClass::Minor ? PodClass::Minor : PodClass::Adult);
      sizes.push_back(1);
    }
  } else {
    for (std::size_t i = 0; i < pods.size(); ++i) {
      classes.push_back(class_of(ages.at(i)));
      sizes.push_back(pods[i]);
    }
  }
  const std::size_t units = classes.size();
  w.to_trafficker.assign(units, false);
  w.to_bottom.assign(units, false);
  if (!has_bottom) {
    w.to_trafficker.assign(units, true);
    return w;
  }
  for (std::size_t i = 0; i < units; ++i)
    w.to_trafficker[i] = rng.bernoulli(class_prob(cfg.pod_to_trafficker_prob, classes[i]));
  for (std::size_t i = 0; i < units; ++i)
    w.to_bottom[i] = rng.bernoulli(class_prob(cfg.pod_to_bottom_prob, classes[i]));

  // Largest unit, lowest index on ties.
  std::size_t largest = 0;
  for (std::size_t i = 1; i < units; ++i)
    if (sizes[i] > sizes[largest]) largest = i;
  if (std::none_of(w.to_trafficker.begin(), w.to_trafficker.end(), [](bool b) { return b; }))
    w.to_trafficker[largest] = true;
  if (std::none_of(w.to_bottom.begin(), w.to_bottom.end(), [](bool b) { return b; }))
    w.to_bottom[largest] = true;
  return w;
}

std::vector<std::pair<std::size_t, std::size_t>> add_intra_operation_social(
    const Partition& pods, const std::vector<std::vector<AgeClass>>& ages,
    const GeneratorConfig& cfg, Rng& rng) {
  std::vector<std::size_t> pod_of;
  std::vector<AgeClass> flat;
  for (std::size_t p = 0; p < pods.size(); ++p)
    for (int m = 0; m < pods[p]; ++m) {
      pod_of.push_back(p);
      flat.push_back(ages.at(p).at(static_cast<std::size_t>(m)));
    }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < flat.size(); ++a)
    for (std::size_t b = a + 1; b < flat.size(); ++b) {
      if (pod_of[a] == pod_of[b]) continue;
      if (rng.bernoulli(pair_prob(cfg.intra_op_social_prob, flat[a], flat[b]))) out.emplace_back(a, b);
    }
  return out;
}

GeneratedOperation generate_operation(const GeneratorConfig& cfg, Rng& rng, NodeId first_id,
                                      std::size_t operation_index) {
  const int victims = sample_victim_count(cfg, rng);
  const bool has_bottom = sample_bottom_presence(victims, cfg, rng);
  const Partition partition = sample_pod_partition(victims, cfg, rng);
  const auto ages = assign_ages(partition, cfg, rng);
  PodWiring wiring = wire_pods(partition, ages, has_bottom, cfg, rng);
  // A unit left without a controller stays with the trafficker.
  for (std::size_t i = 0; i < wiring.to_trafficker.size(); ++i)
    if (!wiring.to_trafficker[i] && !wiring.to_bottom[i]) wiring.to_trafficker[i] = true;
  const auto social = add_intra_operation_social(partition, ages, cfg, rng);

  GeneratedOperation g;
  std::uint32_t next = first_id.value;
  Operation& op = g.operation;
  op.trafficker = NodeId{next++};
  g.persons.push_back({op.trafficker, Role::Trafficker, AgeClass::NotApplicable, operation_index});
  if (has_bottom) {
    op.bottom = NodeId{next++};
    // Bottoms are recorded as adults.
    g.persons.push_back({*op.bottom, Role::Bottom, AgeClass::Adult, operation_index});
    g.arcs.push_back({op.trafficker, *op.bottom, ArcKind::Operational, false});
  }
  std::vector<NodeId> flat;
  for (std::size_t p = 0; p < partition.size(); ++p) {
    Pod pod;
    for (int m = 0; m < partition[p]; ++m) {
      NodeId id{next++};
      AgeClass age = ages[p][static_cast<std::size_t>(m)];
      pod.members.push_back(id);
      pod.ages.push_back(age);
      flat.push_back(id);
      g.persons.push_back({id, Role::Victim, age, operation_index});
    }
    for (std::size_t a = 0; a < pod.members.size(); ++a)
      for (std::size_t b = a + 1; b < pod.members.size(); ++b)
        g.arcs.push_back({pod.members[a], pod.members[b], ArcKind::Operational, false});
    op.pods.push_back(std::move(pod));
  }

  // Map wiring units back onto pods and victims.
  std::set<std::size_t> tpods, bpods;
  for (std::size_t unit = 0; unit < wiring.to_trafficker.size(); ++unit) {
    std::vector<NodeId> members;
    std::size_t pod_index = wiring.per_victim ? 0 : unit;
    if (wiring.per_victim) members.push_back(op.pods[0].members[unit]);
    else members = op.pods[unit].members;
    if (wiring.to_trafficker[unit]) {
      tpods.insert(pod_index);
      op.trafficker_victims.insert(op.trafficker_victims.end(), members.begin(), members.end());
    }
    if (wiring.to_bottom[unit]) {
      bpods.insert(pod_index);
      op.bottom_victims.insert(op.bottom_victims.end(), members.begin(), members.end());
    }
  }
  op.trafficker_pods.assign(tpods.begin(), tpods.end());
  op.bottom_pods.assign(bpods.begin(), bpods.end());
  std::sort(op.trafficker_victims.begin(), op.trafficker_victims.end());
  std::sort(op.bottom_victims.begin(), op.bottom_victims.end());
  for (auto v : op.trafficker_victims) g.arcs.push_back({op.trafficker, v, ArcKind::Operational, false});
  if (op.bottom)
    for (auto v : op.bottom_victims) g.arcs.push_back({*op.bottom, v, ArcKind::Operational, false});
  for (auto [a, b] : social) g.arcs.push_back({flat[a], flat[b], ArcKind::Social, false});
  return g;
}

std::vector<std::pair<std::size_t, std::size_t>> generate_trafficker_social(
    std::size_t num_traffickers, const GeneratorConfig& cfg, Rng& rng) {
  const std::size_t n = num_traffickers;
  std::size_t k = static_cast<std::size_t>(std::max(cfg.ws_neighbors, 0));
  if (n == 0) return {};
  if (k >= n) k = n - 1;
  k -= k % 2;
  const std::size_t half = k / 2;

  std::vector<std::set<std::size_t>> adj(n);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= half; ++j) {
      std::size_t t = (i + j) % n;
      edges.emplace_back(i, t);
      adj[i].insert(t);
      adj[t].insert(i);
    }
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      if (!rng.bernoulli(cfg.ws_rewire)) continue;
      auto& edge = edges[i * half + (j - 1)];
      std::vector<std::size_t> candidates;
      for (std::size_t w = 0; w < n; ++w)
        if (w != i && !adj[i].count(w)) candidates.push_back(w);
      if (candidates.empty()) continue;
      std::size_t w = candidates[rng.index(candidates.size())];
      adj[i].erase(edge.second);
      adj[edge.second].erase(i);
      adj[i].insert(w);
      adj[w].insert(i);
      edge.second = w;
    }
  return edges;
}

TraffickingNetwork generate_network(std::size_t num_operations, const GeneratorConfig& cfg) {
  validate_config(cfg);
  if (num_operations < 1) throw std::invalid_argument("need at least one operation");
  Rng rng(cfg.seed);
  TraffickingNetwork net;
  net.generation_seed = cfg.seed;
  net.config_snapshot = cfg;
  std::uint32_t next = 0;
  for (std::size_t k = 0; k < num_operations; ++k) {
    auto g = generate_operation(cfg, rng, NodeId{next}, k);
    next += static_cast<std::uint32_t>(g.persons.size());
    for (auto& p : g.persons) net.persons.emplace(p.id, p);
    net.arcs.insert(net.arcs.end(), g.arcs.begin(), g.arcs.end());
    net.operations.push_back(std::move(g.operation));
  }

  auto ring = generate_trafficker_social(num_operations, cfg, rng);
  for (auto [a, b] : ring) {
    NodeId u = net.operations[a].trafficker, v = net.operations[b].trafficker;
    if (v < u) std::swap(u, v);
    net.trafficker_social.push_back({u, v, ArcKind::Social, false});
  }

  // Victims of different operations, in id order.
  std::vector<const Person*> victims;
  for (const auto& [id, p] : net.persons)
    if (p.role == Role::Victim) victims.push_back(&p);
  for (std::size_t a = 0; a < victims.size(); ++a)
    for (std::size_t b = a + 1; b < victims.size(); ++b) {
      if (victims[a]->operation == victims[b]->operation) continue;
      if (rng.bernoulli(pair_prob(cfg.cross_op_social_prob, victims[a]->age, victims[b]->age)))
        net.arcs.push_back({victims[a]->id, victims[b]->id, ArcKind::Social, false});
    }
  return net;
}

}  // namespace htnet

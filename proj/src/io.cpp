#include "htnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace htnet {

namespace {

/// Object reader that remembers which keys were consumed so leftovers can be
/// reported as unknown fields.
class Obj {
 public:
  Obj(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) throw FormatError(ctx_ + ": expected an object");
  }

  const Json& at(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) throw FormatError(ctx_ + ": missing field '" + key + "'");
    seen_.insert(key);
    return *it;
  }
  const Json* opt(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }
  template <class T>
  T get(const std::string& key) {
    const Json& v = at(key);
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw FormatError(ctx_ + ": field '" + key + "' has the wrong type");
    }
  }
  const Json& array(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) throw FormatError(ctx_ + ": field '" + key + "' must be an array");
    return v;
  }
  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw FormatError(ctx_ + ": unknown field '" + it.key() + "'");
  }
  const std::string& ctx() const { return ctx_; }

 private:
  const Json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

void check_header(Obj& o, const std::string& kind) {
  if (o.get<int>("schema_version") != kSchemaVersion)
    throw FormatError(o.ctx() + ": unsupported schema_version");
  if (o.get<std::string>("kind") != kind)
    throw FormatError(o.ctx() + ": expected kind '" + kind + "'");
}

Json header(const std::string& kind) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

Json pmf_json(const std::map<int, double>& m) {
  Json j = Json::object();
  for (auto [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::map<int, double> pmf_from(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw FormatError(ctx + ": expected an object");
  std::map<int, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int k = 0;
    const std::string& s = it.key();
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc() || p != s.data() + s.size())
      throw FormatError(ctx + ": bad integer key '" + s + "'");
    m[k] = it.value().get<double>();
  }
  return m;
}

Json pod_class_json(const ByPodClass& p) {
  return Json{{"adult", p.adult}, {"minor", p.minor}, {"mixed", p.mixed}};
}

ByPodClass pod_class_from(const Json& j, const std::string& ctx) {
  Obj o(j, ctx);
  ByPodClass p{o.get<double>("adult"), o.get<double>("minor"), o.get<double>("mixed")};
  o.done();
  return p;
}

Json age_pair_json(const ByAgePair& p) {
  return Json{{"minor_minor", p.minor_minor},
              {"minor_adult", p.minor_adult},
              {"adult_adult", p.adult_adult}};
}

ByAgePair age_pair_from(const Json& j, const std::string& ctx) {
  Obj o(j, ctx);
  ByAgePair p{o.get<double>("minor_minor"), o.get<double>("minor_adult"),
              o.get<double>("adult_adult")};
  o.done();
  return p;
}

Json ids_json(const std::vector<NodeId>& ids) {
  Json j = Json::array();
  for (NodeId id : ids) j.push_back(id.value);
  return j;
}

std::vector<NodeId> ids_from(const Json& j) {
  std::vector<NodeId> out;
  for (const Json& v : j) out.push_back(NodeId{v.get<std::uint32_t>()});
  return out;
}

Json arc_json(const Arc& a) {
  return Json{{"from", a.from.value}, {"to", a.to.value}, {"kind", to_string(a.kind)},
              {"directed", a.directed}};
}

Arc arc_from(const Json& j) {
  Obj o(j, "arc");
  Arc a;
  a.from = NodeId{o.get<std::uint32_t>("from")};
  a.to = NodeId{o.get<std::uint32_t>("to")};
  a.kind = arc_kind_from_string(o.get<std::string>("kind"));
  a.directed = o.get<bool>("directed");
  o.done();
  return a;
}

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

const char* mode_name(std::uint8_t mode) { return mode == kIn ? "in" : "out"; }

Json restructuring_json(const InterdictionInstance& inst, const RestructuringPlan& z) {
  Json arr = Json::array();
  auto add = [&](std::size_t a, std::uint8_t mode) {
    const RestructArc& r = inst.restruct_arcs.at(a);
    arr.push_back(Json{{"arc", a},
                       {"mode", mode_name(mode)},
                       {"from", inst.nodes[r.from].id.value},
                       {"to", inst.nodes[r.to].id.value},
                       {"category", to_string(r.category)}});
  };
  // Arc order, so the listing matches the activation vector.
  ActivationState st = to_state(inst, z);
  for (std::size_t a = 0; a < st.size(); ++a)
    if (st[a] != kInactive) add(a, st[a]);
  return arr;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return x;
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

/// "2:0.1, 3:0.9"
std::map<int, double> parse_pmf(const std::string& key, const std::string& v) {
  std::map<int, double> m;
  for (const std::string& item : split(v, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError(key + ": expected count:probability pairs");
    int k = parse_int(key, trim(item.substr(0, colon)));
    if (m.count(k)) throw ConfigError(key + ": duplicate count " + std::to_string(k));
    m[k] = parse_real(key, trim(item.substr(colon + 1)));
  }
  return m;
}

std::string shortest(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string pmf_text(const std::map<int, double>& m) {
  std::string s;
  for (auto [k, v] : m) {
    if (!s.empty()) s += ", ";
    s += std::to_string(k) + ":" + shortest(v);
  }
  return s;
}

/// One binding per key: how to parse it into the config and how to print it.
struct Binding {
  std::string key;
  std::function<void(ToolConfig&, const std::string&)> set;
  std::function<std::string(const ToolConfig&)> show;
};

template <class T>
Binding int_binding(std::string key, T ToolConfig::*part, int T::*field) {
  return {key,
          [=](ToolConfig& c, const std::string& v) { (c.*part).*field = parse_int(key, v); },
          [=](const ToolConfig& c) { return std::to_string((c.*part).*field); }};
}

template <class T>
Binding real_binding(std::string key, T ToolConfig::*part, double T::*field) {
  return {key,
          [=](ToolConfig& c, const std::string& v) { (c.*part).*field = parse_real(key, v); },
          [=](const ToolConfig& c) { return shortest((c.*part).*field); }};
}

template <class S>
Binding nested_real(std::string key, S GeneratorConfig::*group, double S::*field) {
  return {key,
          [=](ToolConfig& c, const std::string& v) {
            (c.generator.*group).*field = parse_real(key, v);
          },
          [=](const ToolConfig& c) { return shortest((c.generator.*group).*field); }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> all = [] {
    using G = GeneratorConfig;
    using S = CostSchedule;
    auto gen = &ToolConfig::generator;
    auto sch = &ToolConfig::schedule;
    std::vector<Binding> b;
    b.push_back({"victim_count_pmf",
                 [](ToolConfig& c, const std::string& v) {
                   c.generator.victim_count_pmf = parse_pmf("victim_count_pmf", v);
                 },
                 [](const ToolConfig& c) { return pmf_text(c.generator.victim_count_pmf); }});
    b.push_back({"bottom_prob",
                 [](ToolConfig& c, const std::string& v) {
                   c.generator.bottom_prob = parse_pmf("bottom_prob", v);
                 },
                 [](const ToolConfig& c) { return pmf_text(c.generator.bottom_prob); }});
    b.push_back(real_binding("partition_pod_decay", gen, &G::partition_pod_decay));
    b.push_back(real_binding("minor_prob", gen, &G::minor_prob));
    b.push_back(real_binding("mixed_pair_prob", gen, &G::mixed_pair_prob));
    for (auto [name, group] : {std::pair{"pod_to_trafficker_prob", &G::pod_to_trafficker_prob},
                               std::pair{"pod_to_bottom_prob", &G::pod_to_bottom_prob}}) {
      std::string n = name;
      b.push_back(nested_real(n + ".adult", group, &ByPodClass::adult));
      b.push_back(nested_real(n + ".minor", group, &ByPodClass::minor));
      b.push_back(nested_real(n + ".mixed", group, &ByPodClass::mixed));
    }
    for (auto [name, group] : {std::pair{"intra_op_social_prob", &G::intra_op_social_prob},
                               std::pair{"cross_op_social_prob", &G::cross_op_social_prob}}) {
      std::string n = name;
      b.push_back(nested_real(n + ".minor_minor", group, &ByAgePair::minor_minor));
      b.push_back(nested_real(n + ".minor_adult", group, &ByAgePair::minor_adult));
      b.push_back(nested_real(n + ".adult_adult", group, &ByAgePair::adult_adult));
    }
    b.push_back(int_binding("ws_neighbors", gen, &G::ws_neighbors));
    b.push_back(real_binding("ws_rewire", gen, &G::ws_rewire));
    b.push_back({"seed",
                 [](ToolConfig& c, const std::string& v) { c.generator.seed = parse_u64("seed", v); },
                 [](const ToolConfig& c) { return std::to_string(c.generator.seed); }});

    b.push_back(int_binding("schedule.r_trafficker", sch, &S::r_trafficker));
    b.push_back(int_binding("schedule.r_bottom", sch, &S::r_bottom));
    b.push_back(int_binding("schedule.r_victim", sch, &S::r_victim));
    b.push_back(int_binding("schedule.d_bottom", sch, &S::d_bottom));
    b.push_back(int_binding("schedule.d_victim", sch, &S::d_victim));
    b.push_back(int_binding("schedule.r_min", sch, &S::r_min));
    b.push_back(int_binding("schedule.b_restructure", sch, &S::b_restructure));
    b.push_back(int_binding("schedule.c_known_victim", sch, &S::c_known_victim));
    b.push_back(int_binding("schedule.c_bottom_transfer", sch, &S::c_bottom_transfer));
    b.push_back(int_binding("schedule.c_recruit", sch, &S::c_recruit));
    b.push_back(int_binding("schedule.c_backup", sch, &S::c_backup));
    b.push_back(int_binding("schedule.c_promote", sch, &S::c_promote));
    b.push_back(int_binding("schedule.c_assign_promoted", sch, &S::c_assign_promoted));
    b.push_back(real_binding("schedule.recruitable_fraction", sch, &S::recruitable_fraction));
    b.push_back(int_binding("schedule.backup_threshold", sch, &S::backup_threshold));
    b.push_back(real_binding("schedule.promotable_fraction", sch, &S::promotable_fraction));
    b.push_back(real_binding("schedule.trafficker_capacity_slack", sch,
                             &S::trafficker_capacity_slack));
    b.push_back(real_binding("schedule.recruit_eligibility_prob", sch,
                             &S::recruit_eligibility_prob));
    b.push_back({"schedule.latent_interdictable",
                 [](ToolConfig& c, const std::string& v) {
                   c.schedule.latent_interdictable = parse_bool("schedule.latent_interdictable", v);
                 },
                 [](const ToolConfig& c) {
                   return std::string(c.schedule.latent_interdictable ? "true" : "false");
                 }});
    return b;
  }();
  return all;
}

std::string csv_real(double x) { return format_real(x); }

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// ---------------------------------------------------------------- configs

Json to_json(const GeneratorConfig& cfg) {
  Json j = Json::object();
  j["victim_count_pmf"] = pmf_json(cfg.victim_count_pmf);
  j["bottom_prob"] = pmf_json(cfg.bottom_prob);
  j["partition_pod_decay"] = cfg.partition_pod_decay;
  j["minor_prob"] = cfg.minor_prob;
  j["mixed_pair_prob"] = cfg.mixed_pair_prob;
  j["pod_to_trafficker_prob"] = pod_class_json(cfg.pod_to_trafficker_prob);
  j["pod_to_bottom_prob"] = pod_class_json(cfg.pod_to_bottom_prob);
  j["intra_op_social_prob"] = age_pair_json(cfg.intra_op_social_prob);
  j["cross_op_social_prob"] = age_pair_json(cfg.cross_op_social_prob);
  j["ws_neighbors"] = cfg.ws_neighbors;
  j["ws_rewire"] = cfg.ws_rewire;
  j["seed"] = cfg.seed;
  return j;
}

GeneratorConfig generator_config_from_json(const Json& j) {
  return guarded("generator config", [&] {
    Obj o(j, "generator config");
    GeneratorConfig c;
    c.victim_count_pmf = pmf_from(o.at("victim_count_pmf"), "victim_count_pmf");
    c.bottom_prob = pmf_from(o.at("bottom_prob"), "bottom_prob");
    c.partition_pod_decay = o.get<double>("partition_pod_decay");
    c.minor_prob = o.get<double>("minor_prob");
    c.mixed_pair_prob = o.get<double>("mixed_pair_prob");
    c.pod_to_trafficker_prob = pod_class_from(o.at("pod_to_trafficker_prob"), "pod_to_trafficker_prob");
    c.pod_to_bottom_prob = pod_class_from(o.at("pod_to_bottom_prob"), "pod_to_bottom_prob");
    c.intra_op_social_prob = age_pair_from(o.at("intra_op_social_prob"), "intra_op_social_prob");
    c.cross_op_social_prob = age_pair_from(o.at("cross_op_social_prob"), "cross_op_social_prob");
    c.ws_neighbors = o.get<int>("ws_neighbors");
    c.ws_rewire = o.get<double>("ws_rewire");
    c.seed = o.get<std::uint64_t>("seed");
    o.done();
    return c;
  });
}

Json to_json(const CostSchedule& s) {
  Json j = Json::object();
  j["r_trafficker"] = s.r_trafficker;
  j["r_bottom"] = s.r_bottom;
  j["r_victim"] = s.r_victim;
  j["d_bottom"] = s.d_bottom;
  j["d_victim"] = s.d_victim;
  j["r_min"] = s.r_min;
  j["b_restructure"] = s.b_restructure;
  j["c_known_victim"] = s.c_known_victim;
  j["c_bottom_transfer"] = s.c_bottom_transfer;
  j["c_recruit"] = s.c_recruit;
  j["c_backup"] = s.c_backup;
  j["c_promote"] = s.c_promote;
  j["c_assign_promoted"] = s.c_assign_promoted;
  j["recruitable_fraction"] = s.recruitable_fraction;
  j["backup_threshold"] = s.backup_threshold;
  j["promotable_fraction"] = s.promotable_fraction;
  j["trafficker_capacity_slack"] = s.trafficker_capacity_slack;
  j["recruit_eligibility_prob"] = s.recruit_eligibility_prob;
  j["latent_interdictable"] = s.latent_interdictable;
  return j;
}

CostSchedule schedule_from_json(const Json& j) {
  return guarded("schedule", [&] {
    Obj o(j, "schedule");
    CostSchedule s;
    s.r_trafficker = o.get<int>("r_trafficker");
    s.r_bottom = o.get<int>("r_bottom");
    s.r_victim = o.get<int>("r_victim");
    s.d_bottom = o.get<int>("d_bottom");
    s.d_victim = o.get<int>("d_victim");
    s.r_min = o.get<int>("r_min");
    s.b_restructure = o.get<int>("b_restructure");
    s.c_known_victim = o.get<int>("c_known_victim");
    s.c_bottom_transfer = o.get<int>("c_bottom_transfer");
    s.c_recruit = o.get<int>("c_recruit");
    s.c_backup = o.get<int>("c_backup");
    s.c_promote = o.get<int>("c_promote");
    s.c_assign_promoted = o.get<int>("c_assign_promoted");
    s.recruitable_fraction = o.get<double>("recruitable_fraction");
    s.backup_threshold = o.get<int>("backup_threshold");
    s.promotable_fraction = o.get<double>("promotable_fraction");
    s.trafficker_capacity_slack = o.get<double>("trafficker_capacity_slack");
    s.recruit_eligibility_prob = o.get<double>("recruit_eligibility_prob");
    s.latent_interdictable = o.get<bool>("latent_interdictable");
    o.done();
    return s;
  });
}

// ---------------------------------------------------------------- network

Json to_json(const TraffickingNetwork& net) {
  Json j = header("network");
  j["generation_seed"] = net.generation_seed;
  j["config"] = to_json(net.config_snapshot);
  Json persons = Json::array();
  for (const auto& [id, p] : net.persons)
    persons.push_back(Json{{"id", id.value},
                           {"role", to_string(p.role)},
                           {"age", to_string(p.age)},
                           {"operation", opt_json(p.operation)}});
  j["persons"] = std::move(persons);
  Json ops = Json::array();
  for (const Operation& op : net.operations) {
    Json pods = Json::array();
    for (const Pod& pod : op.pods) {
      Json ages = Json::array();
      for (AgeClass a : pod.ages) ages.push_back(to_string(a));
      pods.push_back(Json{{"members", ids_json(pod.members)}, {"ages", std::move(ages)}});
    }
    ops.push_back(Json{{"trafficker", op.trafficker.value},
                       {"bottom", op.bottom ? Json(op.bottom->value) : Json(nullptr)},
                       {"pods", std::move(pods)},
                       {"trafficker_pods", op.trafficker_pods},
                       {"bottom_pods", op.bottom_pods},
                       {"trafficker_victims", ids_json(op.trafficker_victims)},
                       {"bottom_victims", ids_json(op.bottom_victims)}});
  }
  j["operations"] = std::move(ops);
  Json arcs = Json::array();
  for (const Arc& a : net.arcs) arcs.push_back(arc_json(a));
  j["arcs"] = std::move(arcs);
  Json social = Json::array();
  for (const Arc& a : net.trafficker_social) social.push_back(arc_json(a));
  j["trafficker_social"] = std::move(social);
  return j;
}

TraffickingNetwork network_from_json(const Json& j) {
  return guarded("network", [&] {
    Obj o(j, "network");
    check_header(o, "network");
    TraffickingNetwork net;
    net.generation_seed = o.get<std::uint64_t>("generation_seed");
    net.config_snapshot = generator_config_from_json(o.at("config"));
    for (const Json& pj : o.array("persons")) {
      Obj p(pj, "person");
      Person person;
      person.id = NodeId{p.get<std::uint32_t>("id")};
      person.role = role_from_string(p.get<std::string>("role"));
      person.age = age_from_string(p.get<std::string>("age"));
      const Json& op = p.at("operation");
      if (!op.is_null()) person.operation = op.get<std::size_t>();
      p.done();
      if (!net.persons.emplace(person.id, person).second)
        throw FormatError("network: duplicate person id " + std::to_string(person.id.value));
    }
    for (const Json& oj : o.array("operations")) {
      Obj p(oj, "operation");
      Operation op;
      op.trafficker = NodeId{p.get<std::uint32_t>("trafficker")};
      const Json& b = p.at("bottom");
      if (!b.is_null()) op.bottom = NodeId{b.get<std::uint32_t>()};
      for (const Json& podj : p.array("pods")) {
        Obj q(podj, "pod");
        Pod pod;
        pod.members = ids_from(q.array("members"));
        for (const Json& a : q.array("ages")) pod.ages.push_back(age_from_string(a.get<std::string>()));
        q.done();
        if (pod.members.size() != pod.ages.size())
          throw FormatError("pod: members and ages differ in length");
        op.pods.push_back(std::move(pod));
      }
      op.trafficker_pods = p.array("trafficker_pods").get<std::vector<std::size_t>>();
      op.bottom_pods = p.array("bottom_pods").get<std::vector<std::size_t>>();
      op.trafficker_victims = ids_from(p.array("trafficker_victims"));
      op.bottom_victims = ids_from(p.array("bottom_victims"));
      p.done();
      net.operations.push_back(std::move(op));
    }
    for (const Json& a : o.array("arcs")) net.arcs.push_back(arc_from(a));
    for (const Json& a : o.array("trafficker_social")) net.trafficker_social.push_back(arc_from(a));
    o.done();
    return net;
  });
}

// ---------------------------------------------------------------- instance

Json to_json(const InterdictionInstance& inst) {
  auto id = [&](std::size_t i) { return inst.nodes.at(i).id.value; };
  Json j = header("instance");
  j["schedule"] = to_json(inst.schedule);
  j["big_m"] = inst.big_m;
  j["source"] = id(inst.source);
  j["sink"] = id(inst.sink);
  Json nodes = Json::array();
  for (const InstanceNode& n : inst.nodes)
    nodes.push_back(Json{{"id", n.id.value},
                         {"role", to_string(n.role)},
                         {"capacity", n.capacity},
                         {"cost", n.cost},
                         {"operation", opt_json(n.operation)}});
  j["nodes"] = std::move(nodes);
  Json arcs = Json::array();
  for (const FlowArc& a : inst.arcs)
    arcs.push_back(Json{{"from", id(a.from)}, {"to", id(a.to)}, {"capacity", a.capacity}});
  j["arcs"] = std::move(arcs);
  Json rs = Json::array();
  for (const RestructArc& r : inst.restruct_arcs)
    rs.push_back(Json{{"from", id(r.from)},
                      {"to", id(r.to)},
                      {"owner", id(r.owner)},
                      {"cost", r.cost},
                      {"allows_in", r.allows_in},
                      {"category", to_string(r.category)},
                      {"gate", opt_json(r.gate)}});
  j["restruct_arcs"] = std::move(rs);
  Json rec = Json::array();
  for (const RecruitableNode& r : inst.recruitables) {
    Json el = Json::array();
    for (std::size_t t : r.eligible) el.push_back(id(t));
    rec.push_back(Json{{"node", id(r.node)}, {"eligible", std::move(el)}});
  }
  j["recruitables"] = std::move(rec);
  Json bk = Json::array();
  for (const BackupPair& b : inst.backups)
    bk.push_back(Json{{"trafficker", id(b.trafficker)},
                      {"backup", id(b.backup)},
                      {"activation", b.activation}});
  j["backups"] = std::move(bk);
  Json pr = Json::array();
  for (const PromotablePair& p : inst.promotables)
    pr.push_back(Json{{"bottom", id(p.bottom)},
                      {"victim", id(p.victim)},
                      {"gain", p.gain},
                      {"activation", p.activation}});
  j["promotables"] = std::move(pr);
  Json red = Json::array();
  for (std::size_t t = 0; t < inst.reductions.size(); ++t)
    for (const Reduction& r : inst.reductions[t])
      red.push_back(Json{{"trafficker", id(t)}, {"node", id(r.node)}, {"amount", r.amount}});
  j["reductions"] = std::move(red);
  Json ops = Json::array();
  for (const OperationGroup& g : inst.operations) {
    Json vs = Json::array();
    for (std::size_t v : g.victims) vs.push_back(id(v));
    ops.push_back(Json{{"trafficker", id(g.trafficker)},
                       {"bottom", g.bottom ? Json(id(*g.bottom)) : Json(nullptr)},
                       {"victims", std::move(vs)},
                       {"backup", g.backup ? Json(id(*g.backup)) : Json(nullptr)}});
  }
  j["operations"] = std::move(ops);
  return j;
}

InterdictionInstance instance_from_json(const Json& j) {
  return guarded("instance", [&] {
    Obj o(j, "instance");
    check_header(o, "instance");
    InterdictionInstance inst;
    inst.schedule = schedule_from_json(o.at("schedule"));
    inst.big_m = o.get<int>("big_m");
    std::map<std::uint32_t, std::size_t> index;
    for (const Json& nj : o.array("nodes")) {
      Obj n(nj, "node");
      InstanceNode node;
      node.id = NodeId{n.get<std::uint32_t>("id")};
      node.role = node_role_from_string(n.get<std::string>("role"));
      node.capacity = n.get<int>("capacity");
      node.cost = n.get<int>("cost");
      const Json& op = n.at("operation");
      if (!op.is_null()) node.operation = op.get<std::size_t>();
      n.done();
      if (!index.emplace(node.id.value, inst.nodes.size()).second)
        throw FormatError("instance: duplicate node id " + std::to_string(node.id.value));
      inst.nodes.push_back(node);
    }
    auto idx = [&](const Json& v) {
      auto it = index.find(v.get<std::uint32_t>());
      if (it == index.end()) throw FormatError("instance: unknown node id " + v.dump());
      return it->second;
    };
    inst.source = idx(o.at("source"));
    inst.sink = idx(o.at("sink"));
    for (const Json& aj : o.array("arcs")) {
      Obj a(aj, "arc");
      inst.arcs.push_back(FlowArc{idx(a.at("from")), idx(a.at("to")), a.get<int>("capacity")});
      a.done();
    }
    for (const Json& rj : o.array("restruct_arcs")) {
      Obj a(rj, "restruct arc");
      RestructArc r;
      r.from = idx(a.at("from"));
      r.to = idx(a.at("to"));
      r.owner = idx(a.at("owner"));
      r.cost = a.get<int>("cost");
      r.allows_in = a.get<bool>("allows_in");
      r.category = restruct_category_from_string(a.get<std::string>("category"));
      const Json& g = a.at("gate");
      if (!g.is_null()) r.gate = g.get<std::size_t>();
      a.done();
      inst.restruct_arcs.push_back(r);
    }
    const std::size_t nr = inst.restruct_arcs.size();
    for (const RestructArc& r : inst.restruct_arcs)
      if (r.gate && *r.gate >= nr) throw FormatError("instance: gate index out of range");
    for (const Json& rj : o.array("recruitables")) {
      Obj a(rj, "recruitable");
      RecruitableNode r;
      r.node = idx(a.at("node"));
      for (const Json& t : a.array("eligible")) r.eligible.push_back(idx(t));
      a.done();
      inst.recruitables.push_back(std::move(r));
    }
    for (const Json& bj : o.array("backups")) {
      Obj a(bj, "backup");
      BackupPair b{idx(a.at("trafficker")), idx(a.at("backup")), a.get<std::size_t>("activation")};
      a.done();
      if (b.activation >= nr) throw FormatError("instance: activation index out of range");
      inst.backups.push_back(b);
    }
    for (const Json& pj : o.array("promotables")) {
      Obj a(pj, "promotable");
      PromotablePair p{idx(a.at("bottom")), idx(a.at("victim")), a.get<int>("gain"),
                       a.get<std::size_t>("activation")};
      a.done();
      if (p.activation >= nr) throw FormatError("instance: activation index out of range");
      inst.promotables.push_back(p);
    }
    inst.reductions.assign(inst.nodes.size(), {});
    for (const Json& rj : o.array("reductions")) {
      Obj a(rj, "reduction");
      std::size_t t = idx(a.at("trafficker"));
      inst.reductions[t].push_back(Reduction{idx(a.at("node")), a.get<int>("amount")});
      a.done();
    }
    for (const Json& gj : o.array("operations")) {
      Obj a(gj, "operation");
      OperationGroup g;
      g.trafficker = idx(a.at("trafficker"));
      const Json& b = a.at("bottom");
      if (!b.is_null()) g.bottom = idx(b);
      for (const Json& v : a.array("victims")) g.victims.push_back(idx(v));
      const Json& k = a.at("backup");
      if (!k.is_null()) g.backup = idx(k);
      a.done();
      inst.operations.push_back(std::move(g));
    }
    o.done();
    validate_schedule(inst.schedule);
    inst.finalize();
    return inst;
  });
}

// ---------------------------------------------------------------- results

Json plan_to_json(const InterdictionInstance& inst, const NodeMask& y, const RestructuringPlan& z) {
  Json j = header("plan");
  j["interdicted"] = ids_json(inst.ids_of(y));
  j["restructuring"] = restructuring_json(inst, z);
  return j;
}

NodeMask interdiction_from_json(const InterdictionInstance& inst, const Json& j) {
  return guarded("plan", [&] {
    Obj o(j, "plan");
    check_header(o, "plan");
    std::vector<NodeId> ids = ids_from(o.array("interdicted"));
    o.opt("restructuring");
    o.done();
    for (NodeId id : ids)
      if (!inst.id_index.count(id))
        throw FormatError("plan: unknown node id " + std::to_string(id.value));
    return inst.mask_of(ids);
  });
}

namespace {

Json defender_json(const InterdictionInstance& inst, const DefenderResult& r) {
  return Json{{"value", r.value()},
              {"optimal", r.optimal},
              {"restructuring", restructuring_json(inst, r.plan)},
              {"nodes_explored", r.explored.nodes}};
}

Json counts_json(const RoleCounts& c) {
  return Json{{"traffickers", c.traffickers},
              {"bottoms", c.bottoms},
              {"victims", c.victims},
              {"recruitables", c.recruitables},
              {"backups", c.backups}};
}

}  // namespace

Json to_json(const InterdictionInstance& inst, const SolveReport& report) {
  Json j = header("solve_report");
  j["objective"] = report.objective;
  Json plan = Json::object();
  plan["interdicted"] = ids_json(report.plan.interdicted);
  Json adj = Json::array();
  for (auto [id, c] : report.plan.adjusted_costs)
    adj.push_back(Json{{"trafficker", id.value}, {"cost", c}});
  plan["adjusted_costs"] = std::move(adj);
  plan["spent"] = report.plan.spent;
  plan["counts"] = counts_json(count_roles(inst, report.plan.mask));
  j["plan"] = std::move(plan);
  j["defender_response"] = defender_json(inst, report.defender_response);
  Json trace = Json::array();
  for (const BoundsPoint& b : report.bounds_trace)
    trace.push_back(Json{{"lower", b.lower}, {"upper", b.upper}});
  j["bounds_trace"] = std::move(trace);
  j["iterations"] = report.iterations;
  return j;
}

Json to_json(const InterdictionInstance& inst, const NodeMask& y, const DefenderResult& result) {
  Json j = header("defender_report");
  j["interdicted"] = ids_json(inst.ids_of(y));
  j["defender_response"] = defender_json(inst, result);
  return j;
}

Json to_json(const InterdictionInstance& inst, const OracleResult& result) {
  Json j = header("oracle_report");
  j["optimum"] = result.optimum;
  j["enumerated"] = result.enumerated;
  Json plans = Json::array();
  for (const OraclePair& p : result.optimal_plans)
    plans.push_back(Json{{"interdicted", ids_json(inst.ids_of(p.y))},
                         {"restructuring", restructuring_json(inst, to_plan(p.z))}});
  j["optimal_plans"] = std::move(plans);
  return j;
}

// ---------------------------------------------------------------- files

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

ToolConfig tool_config_from_key_values(const KeyValues& kv) {
  ToolConfig c{default_generator_config(), default_schedule()};
  for (const auto& [key, value] : kv) {
    auto& all = bindings();
    auto it = std::find_if(all.begin(), all.end(), [&](const Binding& b) { return b.key == key; });
    if (it == all.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(c, value);
  }
  validate_config(c.generator);
  validate_schedule(c.schedule);
  return c;
}

std::string to_key_values(const ToolConfig& cfg) {
  std::string out;
  for (const Binding& b : bindings()) out += b.key + " = " + b.show(cfg) + "\n";
  return out;
}

ToolConfig load_tool_config(const std::optional<std::filesystem::path>& path) {
  if (path) return tool_config_from_key_values(read_key_values(*path));
  if (const char* env = std::getenv(kConfigEnv); env && *env)
    return tool_config_from_key_values(read_key_values(env));
  return ToolConfig{default_generator_config(), default_schedule()};
}

ExperimentSpec experiment_spec_from_key_values(const KeyValues& kv,
                                               const std::filesystem::path& base) {
  ExperimentSpec s;
  bool seeds_given = false;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
  };
  for (const auto& [key, v] : kv) {
    if (key == "num_networks") {
      s.num_networks = parse_int(key, v);
    } else if (key == "num_operations") {
      s.num_operations = parse_int(key, v);
    } else if (key == "config") {
      s.config = resolve(v);
    } else if (key == "budgets") {
      s.budgets.clear();
      for (const std::string& b : split(v, ',')) s.budgets.push_back(parse_int(key, b));
    } else if (key == "seeds") {
      s.seeds.clear();
      for (const std::string& b : split(v, ',')) s.seeds.push_back(parse_u64(key, b));
      seeds_given = true;
    } else if (key == "output_dir") {
      s.output_dir = resolve(v);
    } else if (key == "cell_time_limit") {
      s.cell_time_limit = parse_real(key, v);
    } else if (key == "workers") {
      s.workers = parse_int(key, v);
    } else {
      throw ConfigError("unknown experiment key '" + key + "'");
    }
  }
  if (!seeds_given) {
    s.seeds.clear();
    for (int i = 1; i <= s.num_networks; ++i) s.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  validate_experiment_spec(s);
  return s;
}

void validate_experiment_spec(const ExperimentSpec& s) {
  if (s.num_networks < 1) throw ConfigError("num_networks must be at least 1");
  if (s.num_operations < 1) throw ConfigError("num_operations must be at least 1");
  if (s.budgets.empty()) throw ConfigError("budgets must be nonempty");
  for (int b : s.budgets)
    if (b < 0) throw ConfigError("budgets must be non-negative");
  if (s.seeds.size() != static_cast<std::size_t>(s.num_networks))
    throw ConfigError("seeds must list one seed per network");
  std::set<std::uint64_t> distinct(s.seeds.begin(), s.seeds.end());
  if (distinct.size() != s.seeds.size()) throw ConfigError("seeds must be distinct");
  if (!(s.cell_time_limit > 0)) throw ConfigError("cell_time_limit must be positive");
  if (s.workers < 1) throw ConfigError("workers must be at least 1");
}

std::string metrics_csv(const TraffickingNetwork& net, bool include_bottom) {
  std::string out = "operation,nodes,arc_density,degree_centralization,betweenness_centralization\n";
  for (std::size_t i = 0; i < net.operations.size(); ++i) {
    UndirectedGraph g = victim_social_subgraph(net, i, include_bottom);
    out += std::to_string(i) + "," + std::to_string(g.size()) + ",";
    if (g.size() < 2) {
      out += ",,\n";
      continue;
    }
    CentralityReport r = centrality_report(g);
    out += csv_real(r.arc_density) + ",";
    if (r.centralization_defined)
      out += csv_real(r.degree_centralization) + "," + csv_real(r.betweenness_centralization);
    else
      out += ",";
    out += "\n";
  }
  return out;
}

}  // namespace htnet

// Acceptance run: prints one PASS/FAIL line per criterion, details indented.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "htnet/attacker.hpp"
#include "htnet/experiment.hpp"
#include "htnet/generator.hpp"
#include "htnet/io.hpp"
#include "htnet/metrics.hpp"
#include "htnet/oracle.hpp"
#include "../support/micro.hpp"

#ifndef HTNET_CLI_PATH
#define HTNET_CLI_PATH ""
#endif

using namespace htnet;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    pass = false;
    notes.push_back("FAIL: " + why);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

int failures = 0;

void report(int n, const std::string& title, const Verdict& v) {
  std::cout << "criterion " << n << " " << (v.pass ? "PASS" : "FAIL") << " " << title << "\n";
  for (const auto& s : v.notes) std::cout << "    " << s << "\n";
  std::cout.flush();
  failures += !v.pass;
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

TraffickingNetwork network_for(std::uint64_t seed, std::size_t ops) {
  GeneratorConfig cfg = default_generator_config();
  cfg.seed = seed;
  return generate_network(ops, cfg);
}

bool trace_ok(const std::vector<BoundsPoint>& t) {
  if (t.empty()) return false;
  for (std::size_t k = 1; k < t.size(); ++k)
    if (t[k].lower < t[k - 1].lower || t[k].upper > t[k - 1].upper) return false;
  return t.back().lower == t.back().upper;
}

// Traces gathered by criteria 5 and 6 for criterion 10.
std::vector<std::vector<BoundsPoint>> all_traces;

Verdict max_flow_identity() {
  Verdict v;
  const auto start = Clock::now();
  int bad = 0;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    TraffickingNetwork net = network_for(s, 5);
    Rng rng(mix_seed(s));
    InterdictionInstance inst = build_instance(net, default_schedule(), rng);
    const int f = max_flow(inst, inst.empty_mask(), {}).value;
    const int expect = static_cast<int>(net.count(Role::Victim) + net.count(Role::Bottom));
    if (f != expect) {
      ++bad;
      v.fail("seed " + std::to_string(s) + ": flow " + std::to_string(f) + " vs " + std::to_string(expect));
    }
  }
  const double t = since(start);
  v.note("100 networks, " + std::to_string(bad) + " mismatches, " + fmt(t, 2) + " s");
  if (t >= 60) v.fail("took " + fmt(t, 2) + " s");
  return v;
}

Verdict node_counts() {
  Verdict v;
  int in_band = 0, identity_bad = 0, in_narrow = 0;
  for (std::uint64_t s = 1; s <= 100; ++s) {
    for (std::size_t ops : {1u, 5u, 25u}) {
      TraffickingNetwork net = network_for(s, ops);
      if (net.persons.size() != net.count(Role::Trafficker) + net.count(Role::Bottom) + net.count(Role::Victim))
        ++identity_bad;
      if (ops == 5) {
        in_band += net.persons.size() >= 24 && net.persons.size() <= 40;
        in_narrow += net.persons.size() >= 27 && net.persons.size() <= 35;
      }
    }
  }
  v.note("identity violations: " + std::to_string(identity_bad) + " of 300 networks");
  v.note("5-operation networks in [24, 40]: " + std::to_string(in_band) + " of 100");
  v.note("in [27, 35] (reported only): " + std::to_string(in_narrow) + " of 100");
  if (identity_bad) v.fail("node-count identity broken");
  if (in_band < 80) v.fail("band count below 80");
  return v;
}

Verdict metric_table() {
  Verdict v;
  auto check = [&](const std::string& name, const UndirectedGraph& g, double d, double dc, double bc,
                   double tol) {
    CentralityReport r = centrality_report(g);
    v.note(name + ": " + fmt(r.arc_density) + " " + fmt(r.degree_centralization) + " " +
           fmt(r.betweenness_centralization));
    if (std::abs(r.arc_density - d) > tol || std::abs(r.degree_centralization - dc) > tol ||
        std::abs(r.betweenness_centralization - bc) > tol)
      v.fail(name + " out of tolerance");
  };
  UndirectedGraph p3(3);
  p3.add_edge(0, 1);
  p3.add_edge(1, 2);
  check("path of 3", p3, 0.6667, 0.3333, 1.0, 1e-4);
  UndirectedGraph k5(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (!(i == 0 && j == 1)) k5.add_edge(i, j);
  check("K5 minus an edge", k5, 0.9, 0.1, 0.0278, 1e-4);
  UndirectedGraph k3(3);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  check("K3", k3, 1.0, 0.0, 0.0, 0.0);
  return v;
}

Verdict generator_statistics() {
  Verdict v;
  GeneratorConfig cfg = default_generator_config();
  Rng rng(4);
  const int n = 10000;
  std::map<int, int> hist;
  int six_plus = 0, six_plus_bottom = 0, four = 0, four_bottom = 0;
  std::size_t largest_pod = 0;
  for (int i = 0; i < n; ++i) {
    GeneratedOperation g = generate_operation(cfg, rng, NodeId{0}, 0);
    const int k = static_cast<int>(g.operation.victim_count());
    ++hist[k];
    const bool b = g.operation.bottom.has_value();
    if (k >= 6) six_plus += 1, six_plus_bottom += b;
    if (k == 4) four += 1, four_bottom += b;
    for (const Pod& p : g.operation.pods) largest_pod = std::max(largest_pod, p.members.size());
  }
  double stat = 0;
  for (auto [k, p] : cfg.victim_count_pmf) {
    const double e = p * n;
    stat += (hist[k] - e) * (hist[k] - e) / e;
  }
  bool off_support = false;
  for (auto [k, c] : hist) off_support |= !cfg.victim_count_pmf.count(k);
  boost::math::chi_squared dist(static_cast<double>(cfg.victim_count_pmf.size() - 1));
  const double crit = boost::math::quantile(dist, 0.99);
  const double p4 = four ? double(four_bottom) / four : 0.0;
  v.note("P(bottom | victims >= 6) = " + std::to_string(six_plus_bottom) + "/" + std::to_string(six_plus));
  v.note("P(bottom | victims = 4) = " + fmt(p4));
  v.note("largest pod: " + std::to_string(largest_pod));
  v.note("chi-square " + fmt(stat, 3) + " vs critical " + fmt(crit, 3));
  if (six_plus == 0 || six_plus_bottom != six_plus) v.fail("bottomless operation with six or more victims");
  if (!(p4 >= 0.75 && p4 <= 0.95)) v.fail("P(bottom | 4) outside [0.75, 0.95]");
  if (largest_pod > 6) v.fail("pod larger than six");
  if (off_support || stat >= crit) v.fail("victim counts do not fit the pmf");
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const auto start = Clock::now();
  const OracleLimits lim;
  int used = 0, mismatches = 0, two_op = 0;
  for (std::uint64_t s = 1; used < 50; ++s) {
    const std::size_t ops = 1 + s % 2;
    TraffickingNetwork net = network_for(s, ops);
    Rng rng(mix_seed(s));
    InterdictionInstance inst = build_instance(net, default_schedule(), rng);
    if (net.persons.size() > lim.max_person_nodes || inst.restruct_arcs.size() > lim.max_restruct_arcs)
      continue;
    ++used;
    two_op += ops == 2;
    AttackerSolver solver(inst, 12);
    for (int b : {2, 4, 8, 12}) {
      SolveReport m = solver.solve_mfnip(b), r = solver.solve_mfnip_r(b);
      all_traces.push_back(r.bounds_trace);
      const int om = oracle_mfnip(inst, b).optimum, orr = oracle_mfnip_r(inst, b).optimum;
      if (m.objective != om || r.objective != orr) {
        ++mismatches;
        v.fail("seed " + std::to_string(s) + " budget " + std::to_string(b) + ": solver (" +
               std::to_string(m.objective) + ", " + std::to_string(r.objective) + ") oracle (" +
               std::to_string(om) + ", " + std::to_string(orr) + ")");
      }
    }
  }
  const double t = since(start);
  v.note(std::to_string(used) + " instances (" + std::to_string(two_op) + " with two operations), " +
         std::to_string(mismatches) + " mismatches, " + fmt(t, 2) + " s");
  if (t >= 600) v.fail("took " + fmt(t, 2) + " s");
  return v;
}

std::vector<NetworkResult> sweep;

Verdict dominance_and_monotonicity() {
  Verdict v;
  ExperimentSpec spec;  // 5 networks, 5 operations, budgets 8..40
  spec.cell_time_limit = 600;
  const auto start = Clock::now();
  sweep = run_experiment(spec, ToolConfig{default_generator_config(), default_schedule()},
                         [&](const NetworkResult& r) {
                           std::cout << "    network " << r.index << " seed " << r.seed << " done at "
                                     << fmt(since(start), 1) << " s\n";
                           std::cout.flush();
                         });
  const double total = since(start);
  double worst = 0;
  int restructured_rises = 0;
  for (const NetworkResult& r : sweep) {
    std::ostringstream row;
    row << "seed " << r.seed << " (|V|+|B| = " << r.instance.victims_and_bottoms() << "):";
    for (std::size_t k = 0; k < r.cells.size(); ++k) {
      const CellResult& c = r.cells[k];
      const std::string where = "seed " + std::to_string(r.seed) + " budget " + std::to_string(c.budget);
      if (c.status != CellStatus::Ok) {
        v.fail(where + ": " + to_string(c.status) + " " + c.message);
        continue;
      }
      all_traces.push_back(c.trace);
      worst = std::max(worst, c.mfnip_seconds + c.mfnip_r_seconds);
      row << " " << c.budget << ":" << c.mfnip << "/" << c.mfnip_r << "/" << c.restructured;
      if (!(c.mfnip <= c.mfnip_r && c.mfnip_r <= c.restructured && c.restructured <= c.total))
        v.fail(where + ": ordering broken");
      if (k > 0 && r.cells[k - 1].status == CellStatus::Ok) {
        const CellResult& p = r.cells[k - 1];
        if (c.mfnip > p.mfnip) v.fail(where + ": MFNIP rose");
        if (c.mfnip_r > p.mfnip_r) v.fail(where + ": MFNIP-R rose");
        restructured_rises += c.restructured > p.restructured;
      }
    }
    v.note(row.str());
  }
  v.note("cells as budget:mfnip/mfnip_r/restructured");
  v.note("slowest cell " + fmt(worst, 1) + " s, sweep " + fmt(total, 1) + " s");
  v.note("restructured-after-MFNIP rises between budgets (reported only): " +
         std::to_string(restructured_rises));
  if (worst >= 600) v.fail("a cell took 10 minutes or more");
  if (total >= 7200) v.fail("sweep took 2 hours or more");
  return v;
}

Verdict bottom_tendency_check() {
  Verdict v;
  if (sweep.empty()) {
    v.fail("no sweep results");
    return v;
  }
  BottomTendency t = bottom_tendency(sweep);
  v.note("bottoms interdicted: MFNIP " + std::to_string(t.mfnip_bottoms) + ", MFNIP-R " +
         std::to_string(t.mfnip_r_bottoms));
  v.note("cells where MFNIP took at least as many: " + std::to_string(t.cells_holding) + " of " +
         std::to_string(t.cells));
  if (!t.holds()) v.fail("MFNIP interdicted fewer bottoms in aggregate");
  return v;
}

Verdict cost_adjustment() {
  Verdict v;
  test::MicroNet m = test::micro_network({test::MicroOp{true, {{AgeClass::Adult}, {AgeClass::Adult}}, {0}, {1}}});
  InterdictionInstance inst = test::build(m);
  const std::size_t t = inst.index_of(m.traffickers[0]);
  NodeMask y = inst.mask_of({*m.bottoms[0], m.victims[0][0], m.victims[0][1]});
  const int c = adjusted_cost(inst, y, t);
  y[t] = 1;
  // Enumeration prices the whole plan; strip the bottom and victim costs.
  const int o = oracle_cost(inst, y) - inst.nodes[inst.index_of(*m.bottoms[0])].cost -
                inst.nodes[inst.index_of(m.victims[0][0])].cost - inst.nodes[inst.index_of(m.victims[0][1])].cost;
  v.note("adjusted trafficker cost " + std::to_string(c) + ", enumeration " + std::to_string(o));
  if (c != 3 || o != 3) v.fail("expected 3");
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism(const std::string& cli) {
  Verdict v;
  if (cli.empty() || !fs::exists(cli)) {
    v.fail("command-line tool not found at '" + cli + "'");
    return v;
  }
  const fs::path root = fs::temp_directory_path() / "htnet_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::string> commands = {
      "config",
      "generate -n 5 -s 7 -o net.json",
      "metrics net.json -o metrics.csv",
      "build-instance net.json -o inst.json",
      "solve mfnip inst.json -b 16 -o mfnip.json",
      "solve mfnip-r inst.json -b 16 -o mfnip_r.json",
      "solve defender inst.json -p mfnip.json -o defender.json",
      "generate -n 1 -s 8 -o small.json",
      "build-instance small.json -o small_inst.json",
      "oracle small_inst.json -m mfnip-r -b 4 -o oracle.json",
      "experiment spec.txt -o exp",
  };
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    write_text_file(dir / "spec.txt", "num_networks = 2\nnum_operations = 2\nbudgets = 4, 8\n");
    for (const auto& c : commands) {
      const std::string line = "cd '" + dir.string() + "' && '" + cli + "' " + c + " >>stdout.txt 2>>stderr.txt";
      if (std::system(line.c_str()) != 0) v.fail("command failed: " + c);
    }
  }
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), root / "a");
    const fs::path other = root / "b" / rel;
    ++files;
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) v.fail(rel.string() + " differs");
  }
  v.note(std::to_string(commands.size()) + " commands run twice, " + std::to_string(files) +
         " files compared byte for byte");
  if (v.pass) fs::remove_all(root);
  return v;
}

Verdict traces() {
  Verdict v;
  int bad = 0;
  std::size_t longest = 0;
  for (const auto& t : all_traces) {
    bad += !trace_ok(t);
    longest = std::max(longest, t.size());
  }
  v.note(std::to_string(all_traces.size()) + " traces, longest " + std::to_string(longest) +
         " iterations, " + std::to_string(bad) + " malformed");
  if (all_traces.empty()) v.fail("no traces recorded");
  if (bad) v.fail("trace bounds misbehave");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = HTNET_CLI_PATH;
  if (argc > 1) cli = argv[1];
  report(1, "max-flow identity", max_flow_identity());
  report(2, "node counts", node_counts());
  report(3, "centrality metrics", metric_table());
  report(4, "generator statistics", generator_statistics());
  report(5, "oracle equivalence", oracle_equivalence());
  report(6, "dominance and monotonicity", dominance_and_monotonicity());
  report(7, "bottom-interdiction tendency", bottom_tendency_check());
  report(8, "cost adjustment", cost_adjustment());
  report(9, "determinism", determinism(cli));
  report(10, "bound traces", traces());
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << "\n";
  return failures ? 1 : 0;
}

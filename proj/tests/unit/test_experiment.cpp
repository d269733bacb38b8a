#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "htnet/experiment.hpp"
#include "htnet/generator.hpp"
#include "htnet/oracle.hpp"

using namespace htnet;
namespace fs = std::filesystem;

namespace {

ToolConfig defaults() { return ToolConfig{default_generator_config(), default_schedule()}; }

ExperimentSpec small_spec(int networks, std::vector<int> budgets) {
  ExperimentSpec s;
  s.num_networks = networks;
  s.num_operations = 1;
  s.seeds.clear();
  for (int k = 1; k <= networks; ++k) s.seeds.push_back(static_cast<std::uint64_t>(k));
  s.budgets = std::move(budgets);
  s.cell_time_limit = 600;
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("experiment networks follow the seed") {
  ToolConfig cfg = defaults();
  GeneratorConfig g = cfg.generator;
  g.seed = 9;
  CHECK(experiment_network(cfg, 3, 9) == generate_network(3, g));
  CHECK_FALSE(experiment_network(cfg, 3, 9) == experiment_network(cfg, 3, 10));
}

TEST_CASE("zero budget leaves everything in place") {
  auto res = run_experiment(small_spec(3, {0}), defaults());
  REQUIRE(res.size() == 3);
  for (const NetworkResult& r : res) {
    REQUIRE(r.cells.size() == 1);
    const CellResult& c = r.cells[0];
    CHECK(c.status == CellStatus::Ok);
    CHECK(c.mfnip == c.total);
    CHECK(c.mfnip_r == c.total);
    CHECK(c.restructured == c.total);
    CHECK(c.total == r.instance.victims_and_bottoms());
  }
}

TEST_CASE("cells agree with enumeration where it is affordable") {
  ExperimentSpec spec = small_spec(8, {2, 4, 8});
  int compared = 0;
  for (const NetworkResult& r : run_experiment(spec, defaults())) {
    for (const CellResult& c : r.cells) {
      REQUIRE(c.status == CellStatus::Ok);
      try {
        CHECK(c.mfnip == oracle_mfnip(r.instance, c.budget).optimum);
        CHECK(c.mfnip_r == oracle_mfnip_r(r.instance, c.budget).optimum);
        ++compared;
      } catch (const OracleRefusal&) {
      }
    }
  }
  CHECK(compared >= 6);
}

TEST_CASE("worker count does not change results or their order") {
  ExperimentSpec spec = small_spec(4, {0, 4, 8});
  spec.num_operations = 2;
  std::vector<std::size_t> order;
  auto one = run_experiment(spec, defaults());
  spec.workers = 2;
  auto two = run_experiment(spec, defaults(), [&](const NetworkResult& r) { order.push_back(r.index); });
  CHECK(order == std::vector<std::size_t>{0, 1, 2, 3});
  REQUIRE(one.size() == two.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(results_csv_rows(one[k], false) == results_csv_rows(two[k], false));
    CHECK(traces_csv_rows(one[k]) == traces_csv_rows(two[k]));
    CHECK(plot_csv(one[k]) == plot_csv(two[k]));
  }
}

TEST_CASE("bottom tendency sums the cells") {
  auto res = run_experiment(small_spec(3, {4, 8}), defaults());
  int m = 0, r = 0, holding = 0, cells = 0;
  for (const NetworkResult& n : res)
    for (const CellResult& c : n.cells) {
      m += c.mfnip_counts.bottoms;
      r += c.mfnip_r_counts.bottoms;
      holding += c.mfnip_counts.bottoms >= c.mfnip_r_counts.bottoms;
      ++cells;
    }
  BottomTendency t = bottom_tendency(res);
  CHECK(t.mfnip_bottoms == m);
  CHECK(t.mfnip_r_bottoms == r);
  CHECK(t.cells_holding == holding);
  CHECK(t.cells == cells);
}

TEST_CASE("an exhausted time limit is recorded and the sweep continues") {
  ExperimentSpec spec = small_spec(1, {16, 20});
  spec.num_operations = 5;
  spec.seeds = {2};
  spec.cell_time_limit = 1e-9;
  auto res = run_experiment(spec, defaults());
  REQUIRE(res[0].cells.size() == 2);
  for (const CellResult& c : res[0].cells) {
    CHECK(c.status == CellStatus::Timeout);
    CHECK_FALSE(c.message.empty());
  }
  std::string rows = results_csv_rows(res[0], false);
  CHECK(rows.find("timeout") != std::string::npos);
}

TEST_CASE("written outputs") {
  fs::path dir = fs::temp_directory_path() / "htnet_experiment_out";
  fs::remove_all(dir);
  ExperimentSpec spec = small_spec(2, {0, 4});
  spec.output_dir = dir;
  auto res = run_experiment(spec, defaults());
  write_experiment(spec, res, false);
  for (const char* f : {"results.csv", "traces.csv", "summary.txt", "network_0.json", "network_1.json",
                        "instance_0.json", "plot_1.csv"})
    CHECK(fs::exists(dir / f));
  std::string results = slurp(dir / "results.csv");
  CHECK(results.rfind(results_csv_header(false), 0) == 0);
  CHECK(results_csv_header(false).find("seconds") == std::string::npos);
  CHECK(results_csv_header(true).find("seconds") != std::string::npos);
  CHECK(slurp(dir / "plot_0.csv").rfind("budget,total,mfnip,restructured,mfnip_r\n", 0) == 0);
  fs::remove_all(dir);
}

// Drives the command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "htnet/attacker.hpp"
#include "htnet/io.hpp"
#include "htnet/oracle.hpp"

using namespace htnet;
namespace fs = std::filesystem;

namespace {

const fs::path kTool = HTNET_CLI_PATH;

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("htnet_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string cmd =
        "cd '" + dir.string() + "' && '" + kTool.string() + "' " + args + " >>stdout.txt 2>>stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("pipeline from generation to solving") {
  Sandbox s("pipeline");
  REQUIRE(s.run("generate -n 3 -s 5 -o net.json") == 0);
  CHECK(s.read("net.validation.txt") == "ok\n");
  CHECK(fs::exists(s.dir / "net.metrics.csv"));
  TraffickingNetwork net = network_from_json(read_json_file(s.dir / "net.json"));
  CHECK(net.operations.size() == 3);
  CHECK(net.generation_seed == 5);

  REQUIRE(s.run("metrics net.json --exclude-bottom -o m.csv") == 0);
  CHECK(s.read("m.csv") == metrics_csv(net, false));

  REQUIRE(s.run("build-instance net.json -o inst.json") == 0);
  InterdictionInstance inst = instance_from_json(read_json_file(s.dir / "inst.json"));

  REQUIRE(s.run("solve mfnip inst.json -b 6 -o m.json") == 0);
  REQUIRE(s.run("solve mfnip-r inst.json -b 6 -o r.json") == 0);
  Json m = read_json_file(s.dir / "m.json"), r = read_json_file(s.dir / "r.json");
  CHECK(m["objective"].get<int>() <= r["objective"].get<int>());
  CHECK(m["plan"]["spent"].get<int>() <= 6);

  REQUIRE(s.run("solve defender inst.json -p m.json -o d.json") == 0);
  Json d = read_json_file(s.dir / "d.json");
  CHECK(d["interdicted"] == m["plan"]["interdicted"]);
  CHECK(m["defender_response"]["value"] == m["objective"]);
  NodeMask y = interdiction_from_json(
      inst, Json{{"schema_version", kSchemaVersion}, {"kind", "plan"}, {"interdicted", m["plan"]["interdicted"]}});
  CHECK(d["defender_response"]["value"].get<int>() == evaluate_plan(inst, y).value());
  CHECK(d["defender_response"]["value"].get<int>() >= m["objective"].get<int>());
}

TEST_CASE("oracle agrees with the solver on a one-operation network") {
  Sandbox s("oracle");
  REQUIRE(s.run("generate -n 1 -s 8 -o net.json") == 0);
  REQUIRE(s.run("build-instance net.json -o inst.json") == 0);
  for (int b : {2, 4}) {
    const std::string bs = std::to_string(b);
    REQUIRE(s.run("solve mfnip-r inst.json -b " + bs + " -o s" + bs + ".json") == 0);
    REQUIRE(s.run("oracle inst.json -m mfnip-r -b " + bs + " -o o" + bs + ".json") == 0);
    CHECK(read_json_file(s.dir / ("s" + bs + ".json"))["objective"] ==
          read_json_file(s.dir / ("o" + bs + ".json"))["optimum"]);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  Sandbox a("det_a"), b("det_b");
  for (const Sandbox* s : {&a, &b}) {
    REQUIRE(s->run("generate -n 4 -s 21 -o net.json") == 0);
    REQUIRE(s->run("build-instance net.json") == 0);
    REQUIRE(s->run("build-instance net.json -o inst.json") == 0);
    REQUIRE(s->run("solve mfnip-r inst.json -b 10") == 0);
    REQUIRE(s->run("config") == 0);
  }
  CHECK(a.read("net.json") == b.read("net.json"));
  CHECK(a.read("stdout.txt") == b.read("stdout.txt"));
  CHECK(a.read("stderr.txt") == b.read("stderr.txt"));
  CHECK(a.read("stderr.txt").find("wall_time") == std::string::npos);
}

TEST_CASE("timing goes to stderr only when asked") {
  Sandbox s("timing");
  REQUIRE(s.run("--timing generate -n 1 -s 1 -o net.json") == 0);
  CHECK(s.read("stderr.txt").find("wall_time_seconds") != std::string::npos);
}

TEST_CASE("exit codes") {
  Sandbox s("exit");
  CHECK(s.run("") == 1);
  CHECK(s.run("frobnicate") == 1);
  CHECK(s.run("solve heuristic x.json") == 1);
  CHECK(s.run("metrics missing.json") == 1);
  s.run("config");
  std::ofstream(s.dir / "bad.cfg") << "colour = red\n";
  CHECK(s.run("config -c bad.cfg") == 1);
  CHECK(s.run("generate -n 0") == 1);

  REQUIRE(s.run("generate -n 2 -s 3 -o net.json") == 0);
  Json j = read_json_file(s.dir / "net.json");
  for (Json& p : j["persons"])
    if (p["role"] == "trafficker") p["age"] = "adult";
  write_json_file(s.dir / "broken.json", j);
  CHECK(s.run("build-instance broken.json -o inst.json") == 2);
  CHECK(s.read("stderr.txt").find("validation failed") != std::string::npos);

  REQUIRE(s.run("build-instance net.json -o inst.json") == 0);
  CHECK(s.run("solve defender inst.json") == 1);
  CHECK(s.run("solve mfnip inst.json -b -3") == 1);

  REQUIRE(s.run("generate -n 12 -s 1 -o big.json") == 0);
  REQUIRE(s.run("build-instance big.json -o big_inst.json") == 0);
  CHECK(s.run("oracle big_inst.json -b 4") == 3);
  CHECK(s.read("stderr.txt").find("oracle refused") != std::string::npos);
}

TEST_CASE("experiment outputs") {
  Sandbox s("experiment");
  std::ofstream(s.dir / "spec.txt") << "num_networks = 2\nnum_operations = 1\nbudgets = 0, 4\n";
  REQUIRE(s.run("experiment spec.txt -o out") == 0);
  for (const char* f : {"results.csv", "traces.csv", "summary.txt", "plot_0.csv", "instance_1.json"})
    CHECK(fs::exists(s.dir / "out" / f));
  CHECK(s.read("stdout.txt").rfind("bottoms interdicted: mfnip ", 0) == 0);
}

// Python bindings. Documents cross the boundary as JSON text; the package
// wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "htnet/attacker.hpp"
#include "htnet/generator.hpp"
#include "htnet/io.hpp"
#include "htnet/metrics.hpp"
#include "htnet/oracle.hpp"

namespace py = pybind11;
using namespace htnet;

namespace {

ToolConfig config_from(const std::map<std::string, std::string>& kv) {
  return tool_config_from_key_values(KeyValues(kv.begin(), kv.end()));
}

InterdictionInstance instance_of(const std::string& text) { return instance_from_json(Json::parse(text)); }

NodeMask mask_of(const InterdictionInstance& inst, const std::vector<std::uint64_t>& ids) {
  Json p{{"schema_version", kSchemaVersion}, {"kind", "plan"}, {"interdicted", ids}};
  return interdiction_from_json(inst, p);
}

}  // namespace

PYBIND11_MODULE(_htnet, m) {
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OracleRefusal>(m, "OracleRefusal", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.attr("SCHEMA_VERSION") = kSchemaVersion;

  m.def("default_config", [] { return to_key_values(ToolConfig{default_generator_config(), default_schedule()}); });

  m.def(
      "generate_network",
      [](std::size_t operations, std::optional<std::uint64_t> seed, const std::map<std::string, std::string>& config) {
        ToolConfig cfg = config_from(config);
        if (seed) cfg.generator.seed = *seed;
        return to_json(generate_network(operations, cfg.generator)).dump();
      },
      py::arg("operations"), py::arg("seed") = py::none(), py::arg("config") = std::map<std::string, std::string>{});

  m.def("validate_network", [](const std::string& net) { return validate_network(network_from_json(Json::parse(net))); });

  m.def(
      "metrics_csv",
      [](const std::string& net, bool include_bottom) {
        return metrics_csv(network_from_json(Json::parse(net)), include_bottom);
      },
      py::arg("network"), py::arg("include_bottom") = true);

  m.def(
      "centrality",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
        UndirectedGraph g(n);
        for (auto [a, b] : edges) {
          if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
          g.add_edge(a, b);
        }
        CentralityReport r = centrality_report(g);
        py::dict d;
        d["n"] = r.n;
        d["arc_density"] = r.arc_density;
        if (r.centralization_defined) {
          d["degree_centralization"] = r.degree_centralization;
          d["betweenness_centralization"] = r.betweenness_centralization;
        } else {
          d["degree_centralization"] = py::none();
          d["betweenness_centralization"] = py::none();
        }
        return d;
      },
      py::arg("n"), py::arg("edges"));

  m.def(
      "build_instance",
      [](const std::string& net_text, std::optional<std::uint64_t> seed, const std::map<std::string, std::string>& config) {
        ToolConfig cfg = config_from(config);
        TraffickingNetwork net = network_from_json(Json::parse(net_text));
        Rng rng(mix_seed(seed.value_or(net.generation_seed)));
        return to_json(build_instance(net, cfg.schedule, rng)).dump();
      },
      py::arg("network"), py::arg("seed") = py::none(), py::arg("config") = std::map<std::string, std::string>{});

  m.def(
      "max_flow",
      [](const std::string& inst_text, const std::vector<std::uint64_t>& interdicted) {
        InterdictionInstance inst = instance_of(inst_text);
        return max_flow(inst, mask_of(inst, interdicted), {}).value;
      },
      py::arg("instance"), py::arg("interdicted") = std::vector<std::uint64_t>{});

  m.def(
      "solve",
      [](const std::string& inst_text, const std::string& model, int budget) {
        InterdictionInstance inst = instance_of(inst_text);
        if (budget < 0) throw ConfigError("budget must be non-negative");
        py::gil_scoped_release release;
        if (model == "mfnip") return to_json(inst, solve_mfnip(inst, budget)).dump();
        if (model == "mfnip-r") return to_json(inst, solve_mfnip_r(inst, budget)).dump();
        throw ConfigError("unknown model '" + model + "'");
      },
      py::arg("instance"), py::arg("model"), py::arg("budget"));

  m.def(
      "solve_defender",
      [](const std::string& inst_text, const std::vector<std::uint64_t>& interdicted) {
        InterdictionInstance inst = instance_of(inst_text);
        NodeMask y = mask_of(inst, interdicted);
        return to_json(inst, y, solve_defender(inst, y)).dump();
      },
      py::arg("instance"), py::arg("interdicted"));

  m.def(
      "oracle",
      [](const std::string& inst_text, const std::string& model, int budget,
         const std::vector<std::uint64_t>& interdicted) {
        InterdictionInstance inst = instance_of(inst_text);
        if (model == "defender") return to_json(inst, oracle_defender(inst, mask_of(inst, interdicted))).dump();
        if (budget < 0) throw ConfigError("budget must be non-negative");
        if (model == "mfnip") return to_json(inst, oracle_mfnip(inst, budget)).dump();
        if (model == "mfnip-r") return to_json(inst, oracle_mfnip_r(inst, budget)).dump();
        throw ConfigError("unknown model '" + model + "'");
      },
      py::arg("instance"), py::arg("model"), py::arg("budget") = 0,
      py::arg("interdicted") = std::vector<std::uint64_t>{});
}

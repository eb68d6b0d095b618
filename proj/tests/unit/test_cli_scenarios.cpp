#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adaptsplit/config_loader.hpp"
#include "adaptsplit/errors.hpp"
#include "adaptsplit/placement_solver.hpp"
#include "adaptsplit/report.hpp"
#include "adaptsplit/simulator.hpp"
#include "oracles.hpp"

using namespace adaptsplit;
using nlohmann::json;

namespace {

json minimal_doc() {
  return json::parse(R"({
    "model": {"name": "m", "layers": [
      {"compute_flops": 1e9, "weight_bytes": 1e6, "activation_bits": 1e5, "privacy_critical": true},
      {"compute_flops": 1e9, "weight_bytes": 1e6, "activation_bits": 1e5}]},
    "topology": {
      "nodes": [{"id": "e", "trusted": true, "compute_flops_per_s": 1e12, "mem_bytes": 1e9},
                {"id": "c", "cloud": true, "compute_flops_per_s": 1e13, "mem_bytes": 1e10}],
      "links": [{"endpoints": ["e", "c"], "bandwidth_mbps": 100, "propagation_ms": 2, "backhaul": true}]},
    "baseline": {"boundaries": [1], "placement": ["e", "c"]}
  })");
}

std::string config_error_path(const json& doc) {
  try {
    parse_config(doc.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "adaptsplit_tests" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("urban scenario loads with three access-side nodes and a cloud") {
  const ScenarioConfig cfg = oracle::load_scenario("urban_5g_mec.json");
  CHECK(cfg.model.size() == 32);
  std::size_t edges = 0, clouds = 0;
  for (const Node& n : cfg.topology.nodes()) (n.is_cloud ? clouds : edges) += 1;
  CHECK(edges == 3);
  CHECK(clouds == 1);
  CHECK(cfg.baseline_boundaries.size() + 1 == 3);
  CHECK(cfg.weights.gamma == 1e6);
  for (std::size_t l : {std::size_t{0}, std::size_t{31}}) CHECK(cfg.model[l].privacy_critical);
}

TEST_CASE("omitted sections take their defaults") {
  const ScenarioConfig cfg = parse_config(minimal_doc().dump());
  CHECK(cfg.thresholds.l_max_ms == 150.0);
  CHECK(cfg.thresholds.u_max == 0.85);
  CHECK(cfg.thresholds.b_min_mbps == 50.0);
  CHECK(cfg.thresholds.t_cool_s == 30.0);
  CHECK(cfg.sim.monitor_interval_s == 2.0);
  CHECK(cfg.sim.ewma_smoothing == 0.2);
  CHECK(cfg.mode == Mode::adaptive);
  CHECK_FALSE(cfg.sim.weight_transfer_mbps.has_value());
}

TEST_CASE("config errors name the offending field") {
  json doc = minimal_doc();
  doc["baseline"]["placement"][1] = "nowhere";
  CHECK(config_error_path(doc) == "baseline.placement[1]");

  doc = minimal_doc();
  doc["thresholds"] = {{"u_max", 1.5}};
  CHECK(config_error_path(doc) == "thresholds.u_max");

  doc = minimal_doc();
  doc["baseline"]["boundaries"] = {2};
  CHECK(config_error_path(doc).rfind("baseline", 0) == 0);

  doc = minimal_doc();
  doc["calibration"] = {{"weight_transfer_mbps", -1}};
  CHECK(config_error_path(doc) == "calibration.weight_transfer_mbps");

  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("csv layouts") {
  RequestRecord r;
  r.id = 3;
  r.arrival_s = 1.5;
  r.completed = true;
  r.latency_ms = 12.25;
  r.epoch = 2;
  CHECK(requests_csv({r}) ==
        "request_id,arrival_s,workload,completed,latency_ms,epoch,penalized_by_migration\n"
        "3,1.500000,1.000000,1,12.250000,2,0\n");

  KpiWindow k;
  k.end_s = 10;
  k.arrivals = 4;
  k.completed = 3;
  k.throughput_rps = 0.3;
  CHECK(kpi_csv({k}) ==
        "window_start_s,window_end_s,arrivals,completed,mean_latency_ms,p95_latency_ms,ewma_latency_ms,"
        "throughput_rps,throughput_ratio,max_utilization,mean_utilization,reconfig_count\n"
        "0.000000,10.000000,4,3,0.000000,0.000000,,0.300000,,0.000000,0.000000,0\n");

  ComparisonRow row{20, 500, 123, -75.4, 1.69, 0.68, 1};
  CHECK(summary_csv({row}) ==
        "bandwidth_mbps,static_latency_ms,adaptive_latency_ms,delta_pct,throughput_ratio,max_gpu_util,"
        "reconfig_count\n"
        "20.000000,500.000000,123.000000,-75.400000,1.690000,0.680000,1\n");
}

TEST_CASE("summary csv round-trips and rejects malformed text") {
  std::vector<ComparisonRow> rows{{20, 500.5, 120.25, -75.97, 1.5, 0.7, 2}, {200, 180, 120, -33.3, 1, 0.6, 0}};
  const std::vector<ComparisonRow> back = parse_summary_csv(summary_csv(rows));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].bandwidth_mbps == rows[i].bandwidth_mbps);
    CHECK(back[i].static_latency_ms == rows[i].static_latency_ms);
    CHECK(back[i].reconfig_count == rows[i].reconfig_count);
  }
  CHECK_THROWS_AS(parse_summary_csv("a,b\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_summary_csv(summary_csv(rows) + "1,2,3\n"), ConfigError);
}

TEST_CASE("sweep outputs: summary, chart and per-cell runs") {
  const ScenarioConfig cfg = oracle::load_scenario("urban_5g_mec.json");
  const SweepResult sw = compare_static_adaptive(cfg, {20, 100});
  const auto dir = scratch_dir("sweep");
  write_sweep_outputs(sw, cfg.topology, dir);

  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary == summary_csv(sw.rows));
  const std::string svg = slurp(dir / "latency_vs_bandwidth.svg");
  CHECK(svg == latency_svg(parse_summary_csv(summary)));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  for (const char* mode : {"static", "adaptive"}) {
    for (const char* cell : {"bw_20", "bw_100"}) {
      for (const char* file : {"requests.csv", "kpi.csv", "events.jsonl"}) {
        CAPTURE(cell);
        CAPTURE(mode);
        CAPTURE(file);
        CHECK(std::filesystem::exists(dir / cell / mode / file));
      }
    }
  }
}

TEST_CASE("events.jsonl lines are self-contained JSON records") {
  const ScenarioConfig cfg = oracle::load_scenario("privacy_soak.json");
  const ScenarioResult r = run_scenario(cfg);
  const auto dir = scratch_dir("run");
  write_run_outputs(r, cfg.topology, dir);
  CHECK(slurp(dir / "requests.csv") == requests_csv(r.requests));
  CHECK(slurp(dir / "kpi.csv") == kpi_csv(r.windows));

  std::istringstream lines(slurp(dir / "events.jsonl"));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const json e = json::parse(line);
    for (const char* key : {"t", "kind", "applied", "causes", "old_boundaries", "new_boundaries",
                            "old_placement", "new_placement", "migration_bytes", "migration_delay_ms"}) {
      CHECK(e.contains(key));
    }
    CHECK(e["new_placement"].size() == e["new_boundaries"].size() + 1);
    ++count;
  }
  CHECK(count == r.events.size());
  CHECK(count > 0);
}

TEST_CASE("solve on a single node keeps the model whole") {
  const ScenarioConfig cfg = oracle::load_scenario("single_node.json");
  const SystemState st = system_state(cfg.topology, 0.0, cfg.arrival_rate_per_s, 1.0, cfg.cost);
  const JointSolution sol = split_revision(cfg.model, cfg.max_segments, st, cfg.weights, cfg.topology.trusted_set());
  const json j = to_json(sol, cfg.topology);
  CHECK(j["scheme"]["boundaries"] == json::array());
  CHECK(j["placement"] == json::array({"edge"}));
  REQUIRE(j["scheme"]["segments"].size() == 1);
  CHECK(j["scheme"]["segments"][0]["layers"] == json::array({0, 6}));
  CHECK(j["cost"]["privacy_violations"] == 0.0);
}

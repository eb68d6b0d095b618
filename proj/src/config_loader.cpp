#include "adaptsplit/config_loader.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(at(path, key), "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, at(path, key));
}

bool bool_or(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(at(path, key), "expected true or false");
  return it->get<bool>();
}

std::string string_of(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

const json& object_or_empty(const json& obj, const std::string& key, const std::string& path) {
  static const json empty = json::object();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_object()) throw ConfigError(at(path, key), "expected an object");
  return *it;
}

Trace trace_of(const json& v, const std::string& path) {
  if (v.is_number()) return Trace(v.get<double>());
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a number or a list of [t, value] pairs");
  std::vector<Trace::Breakpoint> points;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& p = v[i];
    if (!p.is_array() || p.size() != 2) throw ConfigError(at(path, i), "expected [t, value]");
    points.push_back({number(p[0], at(path, i)), number(p[1], at(path, i))});
  }
  try {
    return Trace(std::move(points));
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
}

ModelProfile model_of(const json& m, const std::string& path) {
  const json& layers = require(m, "layers", path);
  if (!layers.is_array() || layers.empty()) throw ConfigError(at(path, "layers"), "expected a non-empty list");
  std::vector<LayerProfile> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string p = at(at(path, "layers"), i);
    const json& l = layers[i];
    if (!l.is_object()) throw ConfigError(p, "expected an object");
    LayerProfile layer;
    layer.compute_flops = number(require(l, "compute_flops", p), at(p, "compute_flops"));
    layer.weight_bytes = number(require(l, "weight_bytes", p), at(p, "weight_bytes"));
    layer.activation_out_bits = number(require(l, "activation_bits", p), at(p, "activation_bits"));
    layer.privacy_critical = bool_or(l, "privacy_critical", p, false);
    if (layer.compute_flops < 0 || layer.weight_bytes < 0 || layer.activation_out_bits < 0) {
      throw ConfigError(p, "loads must be non-negative");
    }
    const double repeat = number_or(l, "repeat", p, 1.0);
    if (repeat < 1 || repeat != static_cast<double>(static_cast<std::size_t>(repeat))) {
      throw ConfigError(at(p, "repeat"), "expected a positive integer");
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(repeat); ++r) {
      layer.layer_index = out.size();
      out.push_back(layer);
    }
  }
  std::string name = m.contains("name") ? string_of(m["name"], at(path, "name")) : "model";
  return ModelProfile(std::move(name), std::move(out));
}

Topology topology_of(const json& t, const std::string& path) {
  const json& nodes = require(t, "nodes", path);
  if (!nodes.is_array() || nodes.empty()) throw ConfigError(at(path, "nodes"), "expected a non-empty list");
  std::vector<Node> out_nodes;
  std::unordered_map<std::string, NodeIndex> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = at(at(path, "nodes"), i);
    const json& n = nodes[i];
    Node node;
    node.id = string_of(require(n, "id", p), at(p, "id"));
    if (!ids.emplace(node.id, i).second) throw ConfigError(at(p, "id"), "duplicate node id '" + node.id + "'");
    node.is_cloud = bool_or(n, "cloud", p, false);
    node.trusted = bool_or(n, "trusted", p, false);
    node.compute_rate = number(require(n, "compute_flops_per_s", p), at(p, "compute_flops_per_s"));
    if (!(node.compute_rate > 0)) throw ConfigError(at(p, "compute_flops_per_s"), "must be > 0");
    node.mem_capacity = number(require(n, "mem_bytes", p), at(p, "mem_bytes"));
    if (!(node.mem_capacity > 0)) throw ConfigError(at(p, "mem_bytes"), "must be > 0");
    if (n.contains("utilization")) {
      node.utilization = trace_of(n["utilization"], at(p, "utilization"));
      if (node.utilization.min_value() < 0 || !(node.utilization.max_value() < 1)) {
        throw ConfigError(at(p, "utilization"), "samples must lie in [0, 1)");
      }
    }
    out_nodes.push_back(std::move(node));
  }

  std::vector<Link> out_links;
  if (t.contains("links")) {
    const json& links = t["links"];
    if (!links.is_array()) throw ConfigError(at(path, "links"), "expected a list");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string p = at(at(path, "links"), i);
      const json& l = links[i];
      const json& ends = require(l, "endpoints", p);
      if (!ends.is_array() || ends.size() != 2) throw ConfigError(at(p, "endpoints"), "expected two node ids");
      Link link;
      for (std::size_t e = 0; e < 2; ++e) {
        const std::string id = string_of(ends[e], at(at(p, "endpoints"), e));
        auto it = ids.find(id);
        if (it == ids.end()) throw ConfigError(at(at(p, "endpoints"), e), "unknown node '" + id + "'");
        (e == 0 ? link.a : link.b) = it->second;
      }
      if (link.a == link.b) throw ConfigError(at(p, "endpoints"), "self-links are not allowed");
      link.bandwidth_mbps = trace_of(require(l, "bandwidth_mbps", p), at(p, "bandwidth_mbps"));
      if (!(link.bandwidth_mbps.min_value() > 0)) throw ConfigError(at(p, "bandwidth_mbps"), "samples must be > 0");
      link.propagation_ms = number_or(l, "propagation_ms", p, 0.0);
      if (link.propagation_ms < 0) throw ConfigError(at(p, "propagation_ms"), "must be >= 0");
      link.backhaul = bool_or(l, "backhaul", p, false);
      out_links.push_back(std::move(link));
    }
  }
  try {
    return Topology(std::move(out_nodes), std::move(out_links));
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

void validate(const ScenarioConfig& c) {
  auto positive = [](double v, const char* path) {
    if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
  };
  auto non_negative = [](double v, const char* path) {
    if (!(v >= 0.0)) throw ConfigError(path, "must be >= 0");
  };
  non_negative(c.weights.alpha, "weights.alpha");
  non_negative(c.weights.beta, "weights.beta");
  non_negative(c.weights.gamma, "weights.gamma");
  positive(c.thresholds.l_max_ms, "thresholds.l_max_ms");
  if (!(c.thresholds.u_max > 0.0 && c.thresholds.u_max <= 1.0)) {
    throw ConfigError("thresholds.u_max", "must lie in (0, 1]");
  }
  positive(c.thresholds.b_min_mbps, "thresholds.b_min_mbps");
  positive(c.thresholds.t_cool_s, "thresholds.t_cool_s");
  positive(c.cost.q_scale_ms, "calibration.q_scale_ms");
  if (!(c.cost.rho_cap > 0.0 && c.cost.rho_cap < 1.0)) throw ConfigError("calibration.rho_cap", "must lie in (0, 1)");
  non_negative(c.cost.overload_penalty, "calibration.overload_penalty");
  if (!(c.sim.ewma_smoothing > 0.0 && c.sim.ewma_smoothing <= 1.0)) {
    throw ConfigError("calibration.ewma_smoothing", "must lie in (0, 1]");
  }
  positive(c.sim.tick_s, "calibration.tick_s");
  if (!(c.sim.monitor_interval_s >= c.sim.tick_s)) {
    throw ConfigError("calibration.monitor_interval_s", "must be at least one tick");
  }
  positive(c.sim.kpi_window_s, "calibration.kpi_window_s");
  non_negative(c.sim.warmup_s, "calibration.warmup_s");
  non_negative(c.sim.admission_backlog_s, "calibration.admission_backlog_s");
  non_negative(c.sim.orchestration_overhead_ms, "calibration.orchestration_overhead_ms");
  non_negative(c.sim.monitoring_overhead_ms, "calibration.monitoring_overhead_ms");
  if (c.sim.weight_transfer_mbps) positive(*c.sim.weight_transfer_mbps, "calibration.weight_transfer_mbps");
  non_negative(c.arrival_rate_per_s, "workload.arrival_rate_per_s");
  if (!(c.workload_jitter >= 0.0 && c.workload_jitter < 1.0)) throw ConfigError("workload.jitter", "must lie in [0, 1)");
  if (!(c.duration_s > c.sim.warmup_s)) throw ConfigError("duration_s", "must exceed calibration.warmup_s");
  if (c.max_segments < 1 || c.max_segments > c.model.size()) {
    throw ConfigError("max_segments", "must lie in [1, " + std::to_string(c.model.size()) + "]");
  }
  std::size_t k = 0;
  try {
    k = make_split(c.model, c.baseline_boundaries).size();
  } catch (const InvalidBoundary& e) {
    throw ConfigError("baseline.boundaries", e.what());
  }
  if (c.baseline_placement.size() != k) {
    throw ConfigError("baseline.placement", "expected " + std::to_string(k) + " hosts, got " +
                                                std::to_string(c.baseline_placement.size()));
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (c.baseline_placement[j] >= c.topology.size()) {
      throw ConfigError("baseline.placement[" + std::to_string(j) + "]", "unknown node");
    }
  }
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");

  ModelProfile model = model_of(require(doc, "model", ""), "model");
  Topology topology = topology_of(require(doc, "topology", ""), "topology");
  ScenarioConfig c{.name = doc.contains("name") ? string_of(doc["name"], "name") : "scenario",
                   .model = std::move(model),
                   .topology = std::move(topology)};

  const json& w = object_or_empty(doc, "weights", "");
  c.weights.alpha = number_or(w, "alpha", "weights", c.weights.alpha);
  c.weights.beta = number_or(w, "beta", "weights", c.weights.beta);
  c.weights.gamma = number_or(w, "gamma", "weights", c.weights.gamma);

  const json& th = object_or_empty(doc, "thresholds", "");
  c.thresholds.l_max_ms = number_or(th, "l_max_ms", "thresholds", c.thresholds.l_max_ms);
  c.thresholds.u_max = number_or(th, "u_max", "thresholds", c.thresholds.u_max);
  c.thresholds.b_min_mbps = number_or(th, "b_min_mbps", "thresholds", c.thresholds.b_min_mbps);
  c.thresholds.t_cool_s = number_or(th, "t_cool_s", "thresholds", c.thresholds.t_cool_s);

  const json& cal = object_or_empty(doc, "calibration", "");
  const std::string cp = "calibration";
  c.cost.q_scale_ms = number_or(cal, "q_scale_ms", cp, c.cost.q_scale_ms);
  c.cost.rho_cap = number_or(cal, "rho_cap", cp, c.cost.rho_cap);
  c.cost.overload_penalty = number_or(cal, "overload_penalty", cp, c.cost.overload_penalty);
  c.sim.ewma_smoothing = number_or(cal, "ewma_smoothing", cp, c.sim.ewma_smoothing);
  c.sim.monitor_interval_s = number_or(cal, "monitor_interval_s", cp, c.sim.monitor_interval_s);
  c.sim.tick_s = number_or(cal, "tick_s", cp, c.sim.tick_s);
  c.sim.orchestration_overhead_ms = number_or(cal, "orchestration_overhead_ms", cp, c.sim.orchestration_overhead_ms);
  c.sim.monitoring_overhead_ms = number_or(cal, "monitoring_overhead_ms", cp, c.sim.monitoring_overhead_ms);
  c.sim.admission_backlog_s = number_or(cal, "admission_backlog_s", cp, c.sim.admission_backlog_s);
  c.sim.kpi_window_s = number_or(cal, "kpi_window_s", cp, c.sim.kpi_window_s);
  c.sim.warmup_s = number_or(cal, "warmup_s", cp, c.sim.warmup_s);
  if (cal.contains("weight_transfer_mbps")) {
    c.sim.weight_transfer_mbps = number(cal["weight_transfer_mbps"], at(cp, "weight_transfer_mbps"));
  }

  const json& wl = object_or_empty(doc, "workload", "");
  c.arrival_rate_per_s = number_or(wl, "arrival_rate_per_s", "workload", c.arrival_rate_per_s);
  c.workload_jitter = number_or(wl, "jitter", "workload", c.workload_jitter);

  c.duration_s = number_or(doc, "duration_s", "", c.duration_s);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("mode")) {
    const std::string mode = string_of(doc["mode"], "mode");
    if (mode == "adaptive") c.mode = Mode::adaptive;
    else if (mode == "static") c.mode = Mode::static_split;
    else throw ConfigError("mode", "expected \"static\" or \"adaptive\"");
  }
  if (doc.contains("max_segments")) {
    if (!doc["max_segments"].is_number_unsigned()) throw ConfigError("max_segments", "expected a positive integer");
    c.max_segments = doc["max_segments"].get<std::size_t>();
  } else {
    c.max_segments = std::min(c.max_segments, c.model.size());
  }

  const json& base = require(doc, "baseline", "");
  if (base.contains("boundaries")) {
    const json& b = base["boundaries"];
    if (!b.is_array()) throw ConfigError("baseline.boundaries", "expected a list");
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!b[i].is_number_unsigned()) throw ConfigError(at("baseline.boundaries", i), "expected a layer index");
      c.baseline_boundaries.push_back(b[i].get<std::size_t>());
    }
  }
  const json& hosts = require(base, "placement", "baseline");
  if (!hosts.is_array()) throw ConfigError("baseline.placement", "expected a list of node ids");
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const std::string id = string_of(hosts[i], at("baseline.placement", i));
    if (!c.topology.contains(id)) throw ConfigError(at("baseline.placement", i), "unknown node '" + id + "'");
    c.baseline_placement.assignment.push_back(c.topology.index_of(id));
  }

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace adaptsplit

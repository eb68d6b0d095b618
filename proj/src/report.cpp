#include "adaptsplit/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

using nlohmann::json;

namespace {

constexpr std::string_view kSummaryHeader =
    "bandwidth_mbps,static_latency_ms,adaptive_latency_ms,delta_pct,throughput_ratio,max_gpu_util,"
    "reconfig_count";

std::string real(double v) { return fmt::format("{:.6f}", v); }

std::string real(const std::optional<double>& v) { return v ? real(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

json candidate_json(const std::optional<CandidateEvaluation>& c, const Topology& topology) {
  if (!c) return nullptr;
  return {{"boundaries", c->boundaries},
          {"placement", node_ids(c->placement, topology)},
          {"latency_ms", c->cost.latency_ms},
          {"utilization_term", c->cost.utilization_term},
          {"privacy_violations", c->cost.privacy_violations},
          {"total", c->cost.total},
          {"predicted_max_utilization", c->predicted_max_utilization},
          {"cleared", c->cleared}};
}

}  // namespace

std::string requests_csv(const std::vector<RequestRecord>& records) {
  std::string out = "request_id,arrival_s,workload,completed,latency_ms,epoch,penalized_by_migration\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.id, real(r.arrival_s), real(r.workload),
                       r.completed ? 1 : 0, real(r.latency_ms), r.epoch,
                       r.penalized_by_migration ? 1 : 0);
  }
  return out;
}

std::string kpi_csv(const std::vector<KpiWindow>& windows) {
  std::string out =
      "window_start_s,window_end_s,arrivals,completed,mean_latency_ms,p95_latency_ms,ewma_latency_ms,"
      "throughput_rps,throughput_ratio,max_utilization,mean_utilization,reconfig_count\n";
  for (const auto& k : windows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", real(k.start_s), real(k.end_s),
                       k.arrivals, k.completed, real(k.mean_latency_ms), real(k.p95_latency_ms),
                       real(k.ewma_latency_ms), real(k.throughput_rps), real(k.throughput_ratio),
                       real(k.max_utilization), real(k.mean_utilization), k.reconfig_count);
  }
  return out;
}

json to_json(const ReconfigEvent& e, const Topology& topology) {
  std::vector<std::string> causes;
  for (TriggerCause c : e.causes) causes.emplace_back(to_string(c));
  return {{"t", e.t},
          {"kind", to_string(e.kind)},
          {"applied", e.applied},
          {"causes", causes},
          {"old_boundaries", e.old_boundaries},
          {"new_boundaries", e.new_boundaries},
          {"old_placement", node_ids(e.old_placement, topology)},
          {"new_placement", node_ids(e.new_placement, topology)},
          {"migration_bytes", e.migration_bytes},
          {"migration_delay_ms", e.migration_delay_ms},
          {"migration_candidate", candidate_json(e.migration_candidate, topology)},
          {"resplit_candidate", candidate_json(e.resplit_candidate, topology)},
          {"detail", e.detail}};
}

std::string events_jsonl(const std::vector<ReconfigEvent>& events, const Topology& topology) {
  std::string out;
  for (const auto& e : events) {
    out += to_json(e, topology).dump();
    out += '\n';
  }
  return out;
}

json to_json(const JointSolution& s, const Topology& topology) {
  json segments = json::array();
  for (std::size_t j = 0; j < s.scheme.size(); ++j) {
    const Segment& seg = s.scheme[j];
    segments.push_back({{"index", j},
                        {"layers", {seg.layers.begin, seg.layers.end}},
                        {"host", topology.node(s.placement[j]).id},
                        {"privacy_critical", seg.privacy_critical},
                        {"load_compute", seg.load_compute},
                        {"load_mem", seg.load_mem}});
  }
  return {{"scheme", {{"boundaries", s.scheme.boundaries()}, {"segments", segments}}},
          {"placement", node_ids(s.placement, topology)},
          {"cost",
           {{"latency_ms", s.cost.latency_ms},
            {"utilization_term", s.cost.utilization_term},
            {"privacy_violations", s.cost.privacy_violations},
            {"total", s.cost.total}}}};
}

std::string summary_csv(const std::vector<ComparisonRow>& rows) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", real(r.bandwidth_mbps), real(r.static_latency_ms),
                       real(r.adaptive_latency_ms), real(r.delta_pct), real(r.throughput_ratio),
                       real(r.max_gpu_util), r.reconfig_count);
  }
  return out;
}

std::vector<ComparisonRow> parse_summary_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw ConfigError("summary.csv", "unexpected header");
  }
  std::vector<ComparisonRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError("summary.csv:" + std::to_string(lineno), "expected 7 columns");
    try {
      ComparisonRow r;
      r.bandwidth_mbps = std::stod(cells[0]);
      r.static_latency_ms = std::stod(cells[1]);
      r.adaptive_latency_ms = std::stod(cells[2]);
      r.delta_pct = std::stod(cells[3]);
      r.throughput_ratio = std::stod(cells[4]);
      r.max_gpu_util = std::stod(cells[5]);
      r.reconfig_count = std::stoul(cells[6]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigError("summary.csv:" + std::to_string(lineno), "malformed number");
    }
  }
  return rows;
}

std::string latency_svg(const std::vector<ComparisonRow>& rows) {
  constexpr double width = 640, height = 400;
  constexpr double left = 70, right = 30, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::vector<ComparisonRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.bandwidth_mbps < b.bandwidth_mbps; });

  double y_max = 100.0;
  for (const auto& r : sorted) y_max = std::max({y_max, r.static_latency_ms, r.adaptive_latency_ms});
  y_max = std::ceil(y_max / 100.0) * 100.0;

  // Log-scaled x axis when the sweep spans more than one value.
  const double lo = sorted.empty() ? 1.0 : std::log10(std::max(sorted.front().bandwidth_mbps, 1e-9));
  const double hi = sorted.empty() ? 1.0 : std::log10(std::max(sorted.back().bandwidth_mbps, 1e-9));
  auto x_of = [&](double bw) {
    if (hi <= lo) return left + plot_w / 2;
    return left + (std::log10(bw) - lo) / (hi - lo) * plot_w;
  };
  auto y_of = [&](double ms) { return top + plot_h - ms / y_max * plot_h; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">"
      "End-to-end latency vs backhaul bandwidth</text>\n",
      width, height, width / 2);
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"black\"/>\n",
      left, top, top + plot_h, left + plot_w);
  for (int i = 0; i <= 5; ++i) {
    const double ms = y_max * i / 5.0;
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#dddddd\"/>\n"
        "<text x=\"{3}\" y=\"{4:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"end\">{5:g}</text>\n",
        left, y_of(ms), left + plot_w, left - 6, y_of(ms) + 4, ms);
  }
  for (const auto& r : sorted) {
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{:g}</text>\n",
        x_of(r.bandwidth_mbps), top + plot_h + 16, r.bandwidth_mbps);
  }
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      "Backhaul bandwidth (Mb/s)</text>\n"
      "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {})\">Latency (ms)</text>\n",
      left + plot_w / 2, height - 18, top + plot_h / 2, top + plot_h / 2);

  auto series = [&](auto value, const char* color, const char* label, int legend_row) {
    std::string points;
    for (const auto& r : sorted) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", x_of(r.bandwidth_mbps), y_of(value(r)));
    }
    std::string s = fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
    for (const auto& r : sorted) {
      s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3.5\" fill=\"{}\"/>\n",
                       x_of(r.bandwidth_mbps), y_of(value(r)), color);
    }
    const double ly = top + 12 + 18 * legend_row;
    s += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n"
        "<text x=\"{4}\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"12\">{6}</text>\n",
        left + plot_w - 150, ly, left + plot_w - 125, color, left + plot_w - 118, ly + 4, label);
    return s;
  };
  svg += series([](const ComparisonRow& r) { return r.static_latency_ms; }, "#c0392b", "Static split", 0);
  svg += series([](const ComparisonRow& r) { return r.adaptive_latency_ms; }, "#2471a3", "Adaptive", 1);
  svg += "</svg>\n";
  return svg;
}

void write_run_outputs(const ScenarioResult& result, const Topology& topology,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "requests.csv", requests_csv(result.requests));
  write_file(dir / "kpi.csv", kpi_csv(result.windows));
  write_file(dir / "events.jsonl", events_jsonl(result.events, topology));
}

void write_sweep_outputs(const SweepResult& sweep, const Topology& topology,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& cell : sweep.cells) {
    const auto cell_dir = dir / fmt::format("bw_{:g}", cell.bandwidth_mbps);
    write_run_outputs(cell.static_run, topology, cell_dir / "static");
    write_run_outputs(cell.adaptive_run, topology, cell_dir / "adaptive");
  }
  const std::string summary = summary_csv(sweep.rows);
  write_file(dir / "summary.csv", summary);

  std::ifstream in(dir / "summary.csv", std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  write_file(dir / "latency_vs_bandwidth.svg", latency_svg(parse_summary_csv(ss.str())));
}

}  // namespace adaptsplit

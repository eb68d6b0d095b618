#include "adaptsplit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>

#include "adaptsplit/errors.hpp"

namespace adaptsplit {

namespace {

/// Portable draws on top of mt19937_64 (the standard distributions are not
/// reproducible across standard libraries).
class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 gen_;
};

class Engine {
 public:
  explicit Engine(const ScenarioConfig& config)
      : cfg_(config),
        topo_(config.topology),
        trusted_(topo_.trusted_set()),
        rng_(config.seed),
        state_(initial_deployment(config.model, config.baseline_boundaries,
                                  config.baseline_placement,
                                  system_state(topo_, 0.0, config.arrival_rate_per_s, 1.0, config.cost),
                                  trusted_, config.mode)),
        free_at_(topo_.size() + topo_.size() * topo_.size(), 0.0) {
    settings_.weights = cfg_.weights;
    settings_.thresholds = cfg_.thresholds;
    settings_.max_segments = cfg_.max_segments;
    settings_.orchestration_overhead_ms = cfg_.sim.orchestration_overhead_ms;
    settings_.weight_transfer_mbps = cfg_.sim.weight_transfer_mbps;
    result_.epochs.push_back({0, 0.0, state_.scheme.boundaries(), state_.placement});
  }

  ScenarioResult run() {
    const SimulationSettings& sim = cfg_.sim;
    const auto ticks = static_cast<std::int64_t>(std::llround(cfg_.duration_s / sim.tick_s));
    const auto cycle_every =
        std::max<std::int64_t>(1, std::llround(sim.monitor_interval_s / sim.tick_s));
    const double rate = cfg_.arrival_rate_per_s;
    double next_arrival =
        rate > 0.0 ? rng_.exponential(rate) : std::numeric_limits<double>::infinity();

    for (std::int64_t i = 0; i < ticks; ++i) {
      if (i % cycle_every == 0) {
        monitor_cycle(static_cast<double>(i / cycle_every) * sim.monitor_interval_s, true);
      }
      const double tick_end =
          i + 1 == ticks ? cfg_.duration_s : static_cast<double>(i + 1) * sim.tick_s;
      while (next_arrival < tick_end) {
        admit(next_arrival);
        next_arrival += rng_.exponential(rate);
      }
    }
    // Close the last monitoring window so KPI windows see its EWMA.
    if (ticks % cycle_every == 0) {
      monitor_cycle(static_cast<double>(ticks / cycle_every) * sim.monitor_interval_s, false);
    }

    result_.events = state_.log;
    result_.windows = aggregate_windows(result_.requests, result_.samples, result_.events,
                                        cfg_.duration_s, sim.kpi_window_s);
    result_.steady = steady_state(result_.requests, result_.samples, sim.warmup_s, cfg_.duration_s);
    return std::move(result_);
  }

 private:
  void monitor_cycle(double t, bool orchestrate) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = cycle_begin_; r < result_.requests.size(); ++r) {
      if (result_.requests[r].completed) {
        sum += result_.requests[r].latency_ms;
        ++n;
      }
    }
    cycle_begin_ = result_.requests.size();
    if (n > 0) ewma_ = update_ewma(ewma_, sum / static_cast<double>(n), cfg_.sim.ewma_smoothing);

    const SystemState world = system_state(topo_, t, cfg_.arrival_rate_per_s, 1.0, cfg_.cost);
    EnvironmentState env;
    env.t = t;
    env.ewma_latency_ms = ewma_;
    env.window_s = cfg_.sim.monitor_interval_s;
    const std::vector<double> rho = node_utilization(state_.scheme, state_.placement, world);
    for (NodeIndex i = 0; i < world.size(); ++i) {
      if (!world.is_cloud[i]) env.node_utilization.push_back(std::min(rho[i], cfg_.cost.rho_cap));
    }
    for (const Link& l : topo_.links()) env.link_bandwidth_mbps.push_back(l.bandwidth_mbps.value_at(t));

    MonitorSample sample{t, ewma_, 0.0, 0.0};
    if (!env.node_utilization.empty()) {
      sample.max_utilization = *std::max_element(env.node_utilization.begin(), env.node_utilization.end());
      for (double r : env.node_utilization) sample.mean_utilization += r;
      sample.mean_utilization /= static_cast<double>(env.node_utilization.size());
    }
    result_.samples.push_back(sample);

    if (!orchestrate || cfg_.mode != Mode::adaptive) return;
    result_.orchestration_overhead_ms += cfg_.sim.monitoring_overhead_ms;
    StepOutcome out = orchestration_step(std::move(state_), env, world, trusted_, settings_);
    state_ = std::move(out.state);
    if (out.event.applied) {
      ++result_.applied_reconfigurations;
      result_.epochs.push_back(
          {result_.epochs.size(), t, state_.scheme.boundaries(), state_.placement});
      migration_end_s_ = t + out.event.migration_delay_ms / 1e3;
      migration_delay_ms_ = out.event.migration_delay_ms;
    }
  }

  void admit(double t) {
    RequestRecord rec;
    rec.id = result_.requests.size();
    rec.arrival_s = t;
    rec.epoch = result_.epochs.back().id;
    if (cfg_.workload_jitter > 0.0) {
      rec.workload = 1.0 + cfg_.workload_jitter * (2.0 * rng_.uniform() - 1.0);
    }
    const SystemState world =
        system_state(topo_, t, cfg_.arrival_rate_per_s, rec.workload, cfg_.cost);
    const LatencyBreakdown lat = latency(state_.scheme, state_.placement, world);

    // Busy time this request puts on each node and each link direction.
    const std::size_t n = world.size();
    std::vector<std::pair<std::size_t, double>> demand;
    for (std::size_t j = 0; j < state_.scheme.size(); ++j) {
      demand.emplace_back(state_.placement[j], lat.segment_proc_ms[j] / 1e3);
      if (j + 1 < state_.scheme.size() && state_.placement[j] != state_.placement[j + 1]) {
        const NodeIndex a = state_.placement[j], b = state_.placement[j + 1];
        demand.emplace_back(n + a * n + b,
                            state_.scheme[j].boundary_activation_bits / (world.bandwidth(a, b) * 1e6));
      }
    }
    bool ok = true;
    for (const auto& [resource, busy] : demand) {
      if (free_at_[resource] - t > cfg_.sim.admission_backlog_s) ok = false;
    }
    if (ok) {
      for (const auto& [resource, busy] : demand) {
        free_at_[resource] = std::max(free_at_[resource], t) + busy;
      }
      rec.completed = true;
      rec.latency_ms = lat.total_ms;
      if (t < migration_end_s_) {
        rec.latency_ms += migration_delay_ms_;
        rec.penalized_by_migration = true;
      }
    }
    result_.requests.push_back(rec);
  }

  const ScenarioConfig& cfg_;
  const Topology& topo_;
  TrustedSet trusted_;
  Random rng_;
  OrchestratorState state_;
  OrchestratorSettings settings_;
  std::vector<double> free_at_;
  std::optional<double> ewma_;
  std::size_t cycle_begin_ = 0;
  double migration_end_s_ = -std::numeric_limits<double>::infinity();
  double migration_delay_ms_ = 0.0;
  ScenarioResult result_;
};

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

std::vector<KpiWindow> aggregate_windows(const std::vector<RequestRecord>& requests,
                                         const std::vector<MonitorSample>& samples,
                                         const std::vector<ReconfigEvent>& events,
                                         double duration_s, double window_s) {
  std::vector<KpiWindow> out;
  const auto count = static_cast<std::size_t>(std::ceil(duration_s / window_s - 1e-9));
  for (std::size_t w = 0; w < count; ++w) {
    KpiWindow k;
    k.start_s = static_cast<double>(w) * window_s;
    k.end_s = std::min(static_cast<double>(w + 1) * window_s, duration_s);
    std::vector<double> lat;
    for (const auto& r : requests) {
      if (r.arrival_s < k.start_s || r.arrival_s >= k.end_s) continue;
      ++k.arrivals;
      if (r.completed) lat.push_back(r.latency_ms);
    }
    k.completed = lat.size();
    if (!lat.empty()) {
      double sum = 0.0;
      for (double v : lat) sum += v;
      k.mean_latency_ms = sum / static_cast<double>(lat.size());
      k.p95_latency_ms = percentile(lat, 0.95);
    }
    k.throughput_rps = static_cast<double>(k.completed) / (k.end_s - k.start_s);

    std::size_t cycles = 0;
    for (const auto& s : samples) {
      if (s.t <= k.end_s) k.ewma_latency_ms = s.ewma_latency_ms;
      if (s.t < k.start_s || s.t >= k.end_s) continue;
      k.max_utilization = std::max(k.max_utilization, s.max_utilization);
      k.mean_utilization += s.mean_utilization;
      ++cycles;
    }
    if (cycles > 0) k.mean_utilization /= static_cast<double>(cycles);
    for (const auto& e : events) {
      if (e.applied && e.t >= k.start_s && e.t < k.end_s) ++k.reconfig_count;
    }
    out.push_back(k);
  }
  return out;
}

SteadyState steady_state(const std::vector<RequestRecord>& requests,
                         const std::vector<MonitorSample>& samples, double warmup_s,
                         double duration_s) {
  SteadyState s;
  double sum = 0.0;
  for (const auto& r : requests) {
    if (r.arrival_s < warmup_s) continue;
    ++s.arrivals;
    if (!r.completed) continue;
    ++s.completed;
    sum += r.latency_ms;
  }
  if (s.completed > 0) s.mean_latency_ms = sum / static_cast<double>(s.completed);
  if (duration_s > warmup_s) s.throughput_rps = static_cast<double>(s.completed) / (duration_s - warmup_s);
  std::size_t cycles = 0;
  for (const auto& m : samples) {
    if (m.t < warmup_s || m.t >= duration_s) continue;
    s.max_utilization += m.max_utilization;
    ++cycles;
  }
  if (cycles > 0) s.max_utilization /= static_cast<double>(cycles);
  return s;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate(config);
  return Engine(config).run();
}

SweepResult compare_static_adaptive(const ScenarioConfig& config, const std::vector<double>& sweep) {
  if (sweep.empty()) throw PreconditionError("bandwidth sweep is empty");
  validate(config);

  auto run_cell = [&config](double bw) {
    SweepCell cell;
    cell.bandwidth_mbps = bw;
    ScenarioConfig cfg = config;
    cfg.topology = config.topology.with_backhaul_bandwidth(bw);
    cfg.mode = Mode::static_split;
    cell.static_run = run_scenario(cfg);
    cfg.mode = Mode::adaptive;
    cell.adaptive_run = run_scenario(cfg);
    return cell;
  };

  std::vector<std::future<SweepCell>> pending;
  pending.reserve(sweep.size());
  for (double bw : sweep) pending.push_back(std::async(std::launch::async, run_cell, bw));

  SweepResult out;
  for (auto& f : pending) out.cells.push_back(f.get());

  for (SweepCell& cell : out.cells) {
    const SteadyState& s = cell.static_run.steady;
    const SteadyState& a = cell.adaptive_run.steady;
    ComparisonRow row;
    row.bandwidth_mbps = cell.bandwidth_mbps;
    row.static_latency_ms = s.mean_latency_ms;
    row.adaptive_latency_ms = a.mean_latency_ms;
    row.delta_pct = s.mean_latency_ms > 0.0
                        ? (a.mean_latency_ms - s.mean_latency_ms) / s.mean_latency_ms * 100.0
                        : 0.0;
    if (s.throughput_rps > 0.0) {
      row.throughput_ratio = a.throughput_rps / s.throughput_rps;
    } else {
      row.throughput_ratio = a.throughput_rps > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    row.max_gpu_util = a.max_utilization;
    row.reconfig_count = cell.adaptive_run.applied_reconfigurations;
    out.rows.push_back(row);

    auto& sw = cell.static_run.windows;
    auto& aw = cell.adaptive_run.windows;
    for (std::size_t w = 0; w < aw.size() && w < sw.size(); ++w) {
      sw[w].throughput_ratio = 1.0;
      if (sw[w].throughput_rps > 0.0) aw[w].throughput_ratio = aw[w].throughput_rps / sw[w].throughput_rps;
    }
  }
  return out;
}

}  // namespace adaptsplit

#pragma once

// Independent reference computations used by the test suites.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "adaptsplit/cost_model.hpp"
#include "adaptsplit/model_graph.hpp"
#include "adaptsplit/placement_solver.hpp"
#include "adaptsplit/scenario_config.hpp"

namespace oracle {

/// Raw, library-free description of one node for the reference latency.
struct RefNode {
  double rate = 0.0;  // FLOP/s
  double rho_ext = 0.0;
};

/// Straight transcription of the latency formula: processing per segment,
/// one queue term per distinct host, transfer per cross-host boundary.
/// bandwidth/propagation are n*n row-major.
double reference_latency_ms(const std::vector<double>& segment_flops,
                            const std::vector<double>& boundary_bits,
                            const std::vector<std::size_t>& hosts, const std::vector<RefNode>& nodes,
                            const std::vector<double>& bandwidth_mbps,
                            const std::vector<double>& propagation_ms, double request_rate,
                            double q_scale_ms, double rho_cap);

/// Population standard deviation.
double population_stddev(const std::vector<double>& values);

/// Solves l1 = T0 + A / b1 and l2 = T0 + A / b2 for (A in Mb*ms/s, T0 in ms).
struct TwoPoint {
  double a_mbit_ms = 0.0;  // A expressed so that A / bandwidth_mbps is in ms
  double t0_ms = 0.0;
};
TwoPoint calibrate(double l1_ms, double b1_mbps, double l2_ms, double b2_mbps);

/// Joint minimum over every cut set (bitmask enumeration) with at most
/// max_segments segments and every assignment (odometer). Visiting order is
/// fewest segments, then boundary list, then assignment; ties within the
/// library's relative tolerance keep the earlier candidate.
std::optional<adaptsplit::JointSolution> joint_brute_force(const adaptsplit::ModelProfile& profile,
                                                           std::size_t max_segments,
                                                           const adaptsplit::SystemState& state,
                                                           const adaptsplit::CostWeights& weights,
                                                           const adaptsplit::TrustedSet& trusted);

/// Binomial coefficient by the multiplicative formula.
std::uint64_t choose(std::uint64_t n, std::uint64_t k);

/// Small random instance: up to three edge nodes plus a cloud, up to six
/// layers, a random scheme of up to four segments.
struct Instance {
  adaptsplit::ModelProfile profile;
  adaptsplit::Topology topology;
  adaptsplit::SystemState state;
  adaptsplit::TrustedSet trusted;
  adaptsplit::CostWeights weights;
  std::vector<std::size_t> boundaries;
};
Instance random_instance(std::uint64_t seed, std::size_t max_layers = 6, std::size_t max_segments = 4);

/// A bundled scenario document.
std::filesystem::path scenario_path(const char* file);
adaptsplit::ScenarioConfig load_scenario(const char* file);

}  // namespace oracle

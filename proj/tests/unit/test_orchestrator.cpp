#include <doctest.h>

#include "adaptsplit/errors.hpp"
#include "adaptsplit/orchestrator.hpp"
#include "adaptsplit/placement_solver.hpp"
#include "oracles.hpp"

using namespace adaptsplit;

namespace {

ModelProfile six_layers(double flops_per_layer, double bits) {
  std::vector<LayerProfile> layers;
  for (std::size_t l = 0; l < 6; ++l) layers.push_back({l, flops_per_layer, 1e9, bits, l == 0 || l == 5});
  return ModelProfile("six", layers);
}

/// access (busy, trusted), peer (trusted), cloud (untrusted). The access-cloud
/// backhaul drops from 100 to 20 Mb/s at t = 10.
Topology metro(double peer_rho = 0.0) {
  std::vector<Node> nodes{{"access", false, true, 1e13, 2e10, Trace(0.5)},
                          {"peer", false, true, 1e13, 2e10, Trace(peer_rho)},
                          {"cloud", true, false, 1e14, 1e11, Trace(0.2)}};
  std::vector<Link> links{{0, 1, Trace(1000), 1, false},
                          {0, 2, Trace({{0, 100}, {10, 20}}), 5, true},
                          {1, 2, Trace(1000), 2, false}};
  return Topology(nodes, links);
}

/// Environment as the simulator would build it against `world`.
EnvironmentState observe(const OrchestratorState& s, const Topology& topo, const SystemState& world,
                         std::optional<double> ewma) {
  EnvironmentState e;
  e.t = world.t;
  e.ewma_latency_ms = ewma;
  const auto rho = node_utilization(s.scheme, s.placement, world);
  for (NodeIndex i = 0; i < world.size(); ++i) {
    if (!world.is_cloud[i]) e.node_utilization.push_back(std::min(rho[i], world.params.rho_cap));
  }
  for (const Link& l : topo.links()) e.link_bandwidth_mbps.push_back(l.bandwidth_mbps.value_at(world.t));
  return e;
}

OrchestratorSettings defaults(double gamma = 1e6) {
  OrchestratorSettings s;
  s.weights = {1, 0, gamma};
  return s;
}

}  // namespace

TEST_CASE("canonical baseline deploys; infeasible baseline is rejected") {
  const Topology topo = metro();
  const ModelProfile p = six_layers(2e10, 2e6);
  const SystemState st = system_state(topo, 0.0, 2.0);
  const OrchestratorState s = initial_deployment(p, {1, 5}, Placement{{0, 2, 0}}, st, topo.trusted_set(), Mode::adaptive);
  CHECK(s.scheme.size() == 3);
  CHECK(s.t_last == kNever);
  CHECK(s.log.empty());
  CHECK_THROWS_AS(initial_deployment(p, {1, 5}, Placement{{2, 2, 0}}, st, topo.trusted_set(), Mode::adaptive),
                  NoFeasiblePlacement);
  CHECK_THROWS_AS(initial_deployment(p, {1, 5}, Placement{{0, 2}}, st, topo.trusted_set(), Mode::adaptive),
                  NoFeasiblePlacement);
}

TEST_CASE("no trigger leaves the state alone and logs nothing") {
  const Topology topo = metro();
  const SystemState st = system_state(topo, 4.0, 2.0);
  OrchestratorState s = initial_deployment(six_layers(2e10, 2e6), {1, 5}, Placement{{0, 2, 0}},
                                           system_state(topo, 0.0, 2.0), topo.trusted_set(), Mode::adaptive);
  const EnvironmentState env = observe(s, topo, st, 60.0);
  const StepOutcome out = orchestration_step(s, env, st, topo.trusted_set(), defaults());
  CHECK(out.event.kind == EventKind::no_op);
  CHECK_FALSE(out.event.applied);
  CHECK(out.state.placement == s.placement);
  CHECK(out.state.log.empty());
}

TEST_CASE("bandwidth drop triggers a migration to the optimal placement") {
  const Topology topo = metro();
  const ModelProfile p = six_layers(2e10, 2e6);
  OrchestratorState s = initial_deployment(p, {1, 5}, Placement{{0, 2, 0}}, system_state(topo, 0.0, 2.0),
                                           topo.trusted_set(), Mode::adaptive);
  const SystemState world = system_state(topo, 12.0, 2.0);
  const double now_ms = latency(s.scheme, s.placement, world).total_ms;
  REQUIRE(now_ms > 150.0);
  const StepOutcome out = orchestration_step(s, observe(s, topo, world, now_ms), world, topo.trusted_set(), defaults());
  CHECK(out.event.kind == EventKind::migration);
  CHECK(out.event.applied);
  CHECK(out.state.t_last == 12.0);
  CHECK(out.state.scheme.boundaries() == s.scheme.boundaries());

  const PlacementSolution best = brute_force_oracle(s.scheme, world, defaults().weights, topo.trusted_set());
  CHECK(out.state.placement == best.placement);
  REQUIRE(out.event.migration_candidate);
  CHECK(out.event.migration_candidate->cleared);
  CHECK(out.event.migration_candidate->predicted_latency_ms < 150.0);
  CHECK_FALSE(out.event.resplit_candidate);
  CHECK(check_feasible(out.state.scheme, out.state.placement, world, topo.trusted_set()).feasible);
  // The heavy middle segment left the cloud.
  CHECK(out.state.placement[1] != 2);
}

TEST_CASE("a finer split is used when no placement of the current scheme clears") {
  // Whole model on either trusted node saturates it; the untrusted cloud may
  // not host privacy-critical layers.
  std::vector<Node> nodes{{"a", false, true, 1e13, 2e10, Trace(0.3)},
                          {"b", false, true, 1e13, 2e10, Trace(0.3)},
                          {"cloud", true, false, 1e14, 1e11, Trace(0.3)}};
  const Topology topo(nodes, {{0, 1, Trace(1000), 1, false}, {0, 2, Trace(100), 5, true}, {1, 2, Trace(100), 5, true}});
  std::vector<LayerProfile> layers;
  for (std::size_t l = 0; l < 6; ++l) layers.push_back({l, 1e11 / 6.0, 1e9, 1e6, l == 0 || l == 5});
  const ModelProfile p("six", layers);
  const double lambda = 60.0;
  const SystemState world = system_state(topo, 40.0, lambda);
  OrchestratorState s = initial_deployment(p, {}, Placement{{0}}, system_state(topo, 0.0, lambda),
                                           topo.trusted_set(), Mode::adaptive);
  for (NodeIndex host : {0u, 1u}) {
    REQUIRE(latency(s.scheme, Placement{{host}}, world).total_ms > 150.0);
  }
  const double now_ms = latency(s.scheme, s.placement, world).total_ms;
  const OrchestratorSettings settings = defaults();
  const StepOutcome out = orchestration_step(s, observe(s, topo, world, now_ms), world, topo.trusted_set(), settings);
  CHECK(out.event.kind == EventKind::resplit);
  REQUIRE(out.event.migration_candidate);
  CHECK_FALSE(out.event.migration_candidate->cleared);
  REQUIRE(out.event.resplit_candidate);
  CHECK(out.event.resplit_candidate->cleared);

  const auto joint = oracle::joint_brute_force(p, settings.max_segments, world, settings.weights, topo.trusted_set());
  REQUIRE(joint);
  CHECK(out.state.scheme.boundaries() == joint->scheme.boundaries());
  CHECK(out.state.placement == joint->placement);
  CHECK(privacy_violations(out.state.scheme, out.state.placement, topo.trusted_set()) == 0);
  // Every segment changed boundaries, so all weights are re-staged.
  CHECK(out.event.migration_bytes == p.total_weight_bytes());
}

TEST_CASE("reconfiguration inside the cool-down is suppressed") {
  const Topology topo = metro();
  OrchestratorState s = initial_deployment(six_layers(2e10, 2e6), {1, 5}, Placement{{0, 2, 0}},
                                           system_state(topo, 0.0, 2.0), topo.trusted_set(), Mode::adaptive);
  s.t_last = 20.0;
  const SystemState world = system_state(topo, 35.0, 2.0);
  const StepOutcome out = orchestration_step(s, observe(s, topo, world, 900.0), world, topo.trusted_set(), defaults());
  CHECK(out.event.kind == EventKind::suppressed);
  CHECK_FALSE(out.event.applied);
  CHECK(out.state.placement == s.placement);
  CHECK(out.state.t_last == 20.0);
  REQUIRE(out.state.log.size() == 1);
  CHECK(out.state.log[0].kind == EventKind::suppressed);
}

TEST_CASE("static mode never reconfigures") {
  const Topology topo = metro();
  OrchestratorState s = initial_deployment(six_layers(2e10, 2e6), {1, 5}, Placement{{0, 2, 0}},
                                           system_state(topo, 0.0, 2.0), topo.trusted_set(), Mode::static_split);
  for (double t = 0.0; t < 200.0; t += 2.0) {
    const SystemState world = system_state(topo, t, 2.0);
    const EnvironmentState env = observe(s, topo, world, 1e4);
    StepOutcome out = orchestration_step(std::move(s), env, world, topo.trusted_set(), defaults());
    s = std::move(out.state);
    CHECK_FALSE(out.event.applied);
  }
  CHECK(s.log.empty());
  CHECK(s.placement == Placement{{0, 2, 0}});
}

TEST_CASE("infeasible world logs a failed event and keeps the configuration") {
  const Topology topo = metro();
  OrchestratorState s = initial_deployment(six_layers(2e10, 2e6), {1, 5}, Placement{{0, 2, 0}},
                                           system_state(topo, 0.0, 2.0), topo.trusted_set(), Mode::adaptive);
  // Demand far above every trusted node's capacity.
  const SystemState world = system_state(topo, 50.0, 400.0);
  const StepOutcome out = orchestration_step(s, observe(s, topo, world, 900.0), world, topo.trusted_set(), defaults());
  CHECK(out.event.kind == EventKind::failed);
  CHECK_FALSE(out.event.applied);
  CHECK(out.state.placement == s.placement);
  CHECK(out.state.t_last == kNever);
  CHECK_FALSE(out.event.detail.empty());
}

TEST_CASE("migration cost accounting") {
  const Topology topo = metro();
  const ModelProfile p = six_layers(2e10, 2e6);
  const SystemState world = system_state(topo, 12.0, 2.0);
  const SplitScheme base = make_split(p, {1, 5});

  // Only the middle segment (4 GB) moves cloud -> peer over the 1 Gb/s link.
  MigrationCost c = migration_cost(base, Placement{{0, 2, 0}}, base, Placement{{0, 1, 0}}, world, 10.0);
  CHECK(c.bytes == 4e9);
  CHECK(c.delay_ms == doctest::Approx(4e9 * 8 / 1e9 * 1e3 + 10.0));

  // Same configuration: nothing to move, overhead only.
  c = migration_cost(base, Placement{{0, 2, 0}}, base, Placement{{0, 2, 0}}, world, 10.0);
  CHECK(c.bytes == 0.0);
  CHECK(c.delay_ms == 10.0);

  // Changed boundaries re-stage every affected segment, even one that stays
  // on the same host.
  const SplitScheme finer = make_split(p, {1, 3, 5});
  c = migration_cost(base, Placement{{0, 2, 0}}, finer, Placement{{0, 2, 1, 0}}, world, 10.0);
  CHECK(c.bytes == 4e9);
  CHECK(c.delay_ms == doctest::Approx(4e9 * 8 / 1e9 * 1e3 + 10.0));
  // Layer 5 travels access -> cloud over the 20 Mb/s backhaul, the slowest link involved.
  c = migration_cost(base, Placement{{0, 1, 0}}, make_split(p, {3}), Placement{{0, 2}}, world, 10.0);
  CHECK(c.bytes == 6e9);
  CHECK(c.delay_ms == doctest::Approx(6e9 * 8 / 20e6 * 1e3 + 10.0));

  // A registry rate replaces the link rate.
  c = migration_cost(base, Placement{{0, 1, 0}}, make_split(p, {3}), Placement{{0, 2}}, world, 10.0, 1e4);
  CHECK(c.delay_ms == doctest::Approx(6e9 * 8 / 1e10 * 1e3 + 10.0));
}

#include <doctest.h>

#include "adaptsplit/errors.hpp"
#include "adaptsplit/infrastructure.hpp"

using namespace adaptsplit;

namespace {

Topology pair_topology(double rho_ext = 0.0) {
  std::vector<Node> nodes{{"a", false, true, 1e13, 8e9, Trace(rho_ext)},
                          {"b", true, false, 4e13, 3e10, Trace(0.2)},
                          {"c", false, true, 1e13, 8e9, Trace(0.0)}};
  std::vector<Link> links{{0, 1, Trace({{0, 20}, {5, 100}}), 3, true}, {1, 2, Trace(1000), 1, false}};
  return Topology(nodes, links);
}

}  // namespace

TEST_CASE("capacity scales with exogenous load") {
  CHECK(pair_topology(0.0).capacity_at(0, 1.0).compute_rate_free == doctest::Approx(1e13));
  const CapacitySnapshot half = pair_topology(0.5).capacity_at(0, 1.0);
  CHECK(half.compute_rate_free == doctest::Approx(5e12));
  CHECK(half.mem_free == 8e9);
  CHECK(half.utilization == 0.5);
  CHECK_THROWS_AS(pair_topology().capacity_at(0, -0.1), PreconditionError);
  CHECK_THROWS_AS(pair_topology().capacity_at(7, 0.0), UnknownNode);
}

TEST_CASE("capacity is non-increasing in exogenous load") {
  double last = 1e300;
  for (double rho = 0.0; rho < 0.99; rho += 0.05) {
    const double free = pair_topology(rho).capacity_at(0, 0.0).compute_rate_free;
    CHECK(free <= last);
    last = free;
  }
}

TEST_CASE("bandwidth traces are right-continuous step functions") {
  const Topology t = pair_topology();
  CHECK(t.bandwidth_at(0, 1, 4.9) == 20);
  CHECK(t.bandwidth_at(0, 1, 5.0) == 100);
  CHECK(t.bandwidth_at(0, 1, 4.9999) == 20);
  CHECK_THROWS_AS(t.bandwidth_at(0, 0, 1.0), NoLink);
  CHECK_THROWS_AS(t.bandwidth_at(0, 2, 1.0), NoLink);
}

TEST_CASE("bandwidth is symmetric") {
  const Topology t = pair_topology();
  for (double s = 0.0; s < 10.0; s += 0.25) {
    CHECK(t.bandwidth_at(0, 1, s) == t.bandwidth_at(1, 0, s));
    CHECK(t.bandwidth_at(1, 2, s) == t.bandwidth_at(2, 1, s));
  }
}

TEST_CASE("trace validation") {
  CHECK_THROWS_AS(Trace(std::vector<Trace::Breakpoint>{}), PreconditionError);
  CHECK_THROWS_AS(Trace({{1, 5}}), PreconditionError);
  CHECK_THROWS_AS(Trace({{0, 5}, {2, 1}, {2, 3}}), PreconditionError);
  const Trace tr({{0, 5}, {2, 1}, {4, 9}});
  CHECK(tr.min_value() == 1);
  CHECK(tr.max_value() == 9);
  CHECK(tr.value_at(100) == 9);
}

TEST_CASE("topology validation") {
  const Node good{"a", false, true, 1e13, 1e9, Trace(0.1)};
  CHECK_THROWS_AS(Topology({good, good}, {{0, 1, Trace(10), 0, false}}), PreconditionError);
  Node bad_rate = good;
  bad_rate.id = "b";
  bad_rate.compute_rate = 0;
  CHECK_THROWS_AS(Topology({good, bad_rate}, {{0, 1, Trace(10), 0, false}}), PreconditionError);
  Node second = good;
  second.id = "b";
  CHECK_THROWS_AS(Topology({good, second}, {}), PreconditionError);  // disconnected
  CHECK_THROWS_AS(Topology({good, second}, {{0, 1, Trace(0), 0, false}}), PreconditionError);
  Node c1{"c1", true, false, 1e14, 1e10, Trace(0.0)};
  Node c2{"c2", true, false, 1e14, 1e10, Trace(0.0)};
  CHECK_THROWS_AS(Topology({c1, c2}, {{0, 1, Trace(10), 0, false}}), PreconditionError);
}

TEST_CASE("lookups, trusted set and backhaul pinning") {
  const Topology t = pair_topology();
  CHECK(t.index_of("c") == 2);
  CHECK_THROWS_AS(t.index_of("zz"), UnknownNode);
  CHECK(t.trusted_set() == TrustedSet{true, false, true});
  CHECK(t.find_link(2, 1) != nullptr);
  CHECK(t.find_link(0, 2) == nullptr);
  const Topology pinned = t.with_backhaul_bandwidth(50);
  CHECK(pinned.bandwidth_at(0, 1, 0.0) == 50);
  CHECK(pinned.bandwidth_at(0, 1, 9.0) == 50);
  CHECK(pinned.bandwidth_at(1, 2, 0.0) == 1000);
}

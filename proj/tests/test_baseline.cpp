#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dqcp/baseline.hpp"
#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/errors.hpp"
#include "dqcp/network.hpp"
#include "dqcp/rng.hpp"
#include "helpers.hpp"

using namespace dqcp;

namespace {

// Exhaustive minimum cut over all capacity-feasible two-block partitions.
std::int64_t brute_force_min_cut(const AggregatedGraph& graph, const QpuNetwork& network) {
  const std::int32_t n = graph.num_qubits;
  REQUIRE(network.num_qpus == 2);
  REQUIRE(n <= 20);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::int32_t> blocks(static_cast<std::size_t>(n));
    for (std::int32_t q = 0; q < n; ++q) blocks[static_cast<std::size_t>(q)] = (mask >> q) & 1;
    if (!validate_capacity(blocks, network)) continue;
    best = std::min(best, compute_cut_weight(graph, blocks));
  }
  return best;
}

AggregatedGraph graph_from_edges(std::int32_t n,
                                 std::vector<std::pair<Edge, std::int64_t>> edges) {
  std::sort(edges.begin(), edges.end());
  return AggregatedGraph{n, std::move(edges)};
}

bool locally_optimal(const AggregatedGraph& graph, const QpuNetwork& network,
                     const StaticPartition& partition) {
  const std::int32_t n = graph.num_qubits;
  const std::int64_t cut = compute_cut_weight(graph, partition.qpu_of);
  std::vector<std::int32_t> counts(static_cast<std::size_t>(network.num_qpus), 0);
  for (std::int32_t b : partition.qpu_of) ++counts[static_cast<std::size_t>(b)];
  // Single relocations.
  for (std::int32_t v = 0; v < n; ++v) {
    for (std::int32_t b = 0; b < network.num_qpus; ++b) {
      if (b == partition.qpu_of[static_cast<std::size_t>(v)]) continue;
      if (counts[static_cast<std::size_t>(b)] + 1 >
          network.capacities[static_cast<std::size_t>(b)])
        continue;
      std::vector<std::int32_t> moved = partition.qpu_of;
      moved[static_cast<std::size_t>(v)] = b;
      if (compute_cut_weight(graph, moved) < cut) return false;
    }
  }
  // Pairwise swaps.
  for (std::int32_t v = 0; v < n; ++v)
    for (std::int32_t u = v + 1; u < n; ++u) {
      if (partition.qpu_of[static_cast<std::size_t>(v)] ==
          partition.qpu_of[static_cast<std::size_t>(u)])
        continue;
      std::vector<std::int32_t> swapped = partition.qpu_of;
      std::swap(swapped[static_cast<std::size_t>(v)], swapped[static_cast<std::size_t>(u)]);
      if (compute_cut_weight(graph, swapped) < cut) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("separates two cliques joined by a bridge") {
  // Two 4-cliques with unit weights plus one bridge edge.
  std::vector<std::pair<Edge, std::int64_t>> edges;
  for (std::int32_t i = 0; i < 4; ++i)
    for (std::int32_t j = i + 1; j < 4; ++j) edges.push_back({{i, j}, 1});
  for (std::int32_t i = 4; i < 8; ++i)
    for (std::int32_t j = i + 1; j < 8; ++j) edges.push_back({{i, j}, 1});
  edges.push_back({{3, 4}, 1});
  const AggregatedGraph graph = graph_from_edges(8, std::move(edges));
  const QpuNetwork network = testutil::two_qpus(4);

  CHECK(brute_force_min_cut(graph, network) == 1);
  const StaticPartition partition = static_partition(graph, network, 5);
  CHECK(partition.cut_weight == 1);
  // The cliques end up in distinct blocks.
  for (std::int32_t q : {1, 2, 3}) CHECK(partition.qpu_of[static_cast<std::size_t>(q)] == partition.qpu_of[0]);
  for (std::int32_t q : {5, 6, 7}) CHECK(partition.qpu_of[static_cast<std::size_t>(q)] == partition.qpu_of[4]);
  CHECK(partition.qpu_of[0] != partition.qpu_of[4]);
}

TEST_CASE("edgeless graphs cut nothing") {
  const AggregatedGraph graph{6, {}};
  const QpuNetwork network = testutil::two_qpus(3);
  const StaticPartition partition = static_partition(graph, network, 1);
  CHECK(partition.cut_weight == 0);
  CHECK(validate_capacity(partition.qpu_of, network));
}

TEST_CASE("balanced split of a star cuts half its edges") {
  const AggregatedGraph graph = graph_from_edges(
      4, {{{0, 1}, 1}, {{0, 2}, 1}, {{0, 3}, 1}});
  const QpuNetwork network = testutil::two_qpus(2);
  CHECK(brute_force_min_cut(graph, network) == 2);
  const StaticPartition partition = static_partition(graph, network, 2);
  CHECK(partition.cut_weight == 2);
}

TEST_CASE("partitions are deterministic and internally consistent") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TemporalCircuit circuit = generate_random_circuit(12, 16, 0.5, rng.next());
    const AggregatedGraph graph = aggregate(circuit);
    const QpuNetwork network = testutil::two_qpus(6);
    const StaticPartition a = static_partition(graph, network, 99);
    const StaticPartition b = static_partition(graph, network, 99);
    CHECK(a.qpu_of == b.qpu_of);
    CHECK(a.cut_weight == compute_cut_weight(graph, a.qpu_of));
    CHECK(validate_capacity(a.qpu_of, network));
    const StaticPartition threaded = static_partition(graph, network, 99, 4);
    CHECK(threaded.qpu_of == a.qpu_of);
  }
}

TEST_CASE("outputs are move-and-swap locally optimal") {
  Rng rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto n = static_cast<std::int32_t>(8 + rng.bounded(57));  // up to 64
    const auto k = static_cast<std::int32_t>(2 + rng.bounded(3));
    const std::int32_t cap = (n + k - 1) / k;
    const QpuNetwork network = build_topology(
        TopologyKind::complete, k, std::vector<std::int32_t>(static_cast<std::size_t>(k), cap));
    const TemporalCircuit circuit =
        generate_random_circuit(n, 16, 0.5, rng.next());
    const AggregatedGraph graph = aggregate(circuit);
    const StaticPartition partition = static_partition(graph, network, rng.next());
    CHECK(validate_capacity(partition.qpu_of, network));
    CHECK(locally_optimal(graph, network, partition));
  }
}

TEST_CASE("cut quality stays within 1.2x of the balanced optimum") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::int32_t>(6 + rng.bounded(5));  // 6..10
    const std::int32_t cap = (n + 1) / 2;
    const QpuNetwork network = testutil::two_qpus(cap);
    const TemporalCircuit circuit = generate_random_circuit(n, 10, 0.5, rng.next());
    const AggregatedGraph graph = aggregate(circuit);
    const std::int64_t optimum = brute_force_min_cut(graph, network);
    const StaticPartition partition = static_partition(graph, network, rng.next());
    CHECK(partition.cut_weight >= optimum);
    CHECK(static_cast<double>(partition.cut_weight) <= 1.2 * static_cast<double>(optimum) + 1e-9);
  }
}

TEST_CASE("partitioning ignores the topology") {
  const TemporalCircuit circuit = generate_random_circuit(16, 32, 0.5, 1234);
  const AggregatedGraph graph = aggregate(circuit);
  const auto caps = std::vector<std::int32_t>(4, 4);
  std::vector<StaticPartition> results;
  for (const TopologyKind kind :
       {TopologyKind::complete, TopologyKind::cycle, TopologyKind::star, TopologyKind::path}) {
    results.push_back(static_partition(graph, build_topology(kind, 4, caps), 77));
  }
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK(results[i].qpu_of == results[0].qpu_of);
    CHECK(results[i].cut_weight == results[0].cut_weight);
  }
}

TEST_CASE("lifting a partition yields a constant schedule") {
  const TemporalCircuit circuit = testutil::example_circuit();
  const AggregatedGraph graph = aggregate(circuit);
  const QpuNetwork network = testutil::two_qpus(4);
  const StaticPartition partition = static_partition(graph, network, 3);

  Schedule one = lift_to_schedule(partition, 1);
  CHECK(one.depth() == 1);
  CHECK(one.assignments[0] == partition.qpu_of);

  Schedule lifted = lift_to_schedule(partition, circuit.depth());
  CHECK(state_cost(lifted, network) == 0);
  // For k=2 with unit distances and unit weights, the lifted schedule's cost
  // equals the cut weight: each cut pair contributes once per occurrence.
  CHECK(evaluate_total(lifted, circuit, network, {1.0, 1.0}) ==
        static_cast<double>(partition.cut_weight));
}

TEST_CASE("partition files import and export") {
  const TemporalCircuit circuit = testutil::example_circuit();
  const AggregatedGraph graph = aggregate(circuit);
  const QpuNetwork network = testutil::two_qpus(4);

  const StaticPartition imported = import_partition("0 0 0 0 1 1 1 1", graph, network);
  CHECK(imported.qpu_of == std::vector<std::int32_t>{0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(imported.cut_weight == compute_cut_weight(graph, imported.qpu_of));

  CHECK_THROWS_AS(import_partition("0 0 0 0 0 1 1 1", graph, network), InfeasibleError);
  CHECK_THROWS_AS(import_partition("", graph, network), ParseError);
  CHECK_THROWS_AS(import_partition("0 0 0 0 1 1 1 7", graph, network), ParseError);
  CHECK_THROWS_AS(import_partition("0 0 1 1", graph, network), ParseError);
  CHECK_THROWS_AS(import_partition("0 0 x 0 1 1 1 1", graph, network), ParseError);

  const StaticPartition reimported =
      import_partition(partition_to_text(imported), graph, network);
  CHECK(reimported.qpu_of == imported.qpu_of);
}

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/network.hpp"

namespace dqcp {

/// A single, time-independent qubit-to-block assignment of the aggregated
/// interaction graph. Blocks are identified with QPUs (block j = QPU j).
struct StaticPartition {
  std::vector<std::int32_t> qpu_of;
  std::int64_t cut_weight = 0;
};

/// Total aggregated weight of edges whose endpoints lie in different blocks.
std::int64_t compute_cut_weight(const AggregatedGraph& graph,
                                std::span<const std::int32_t> blocks);

/// Capacity-respecting k-way partition minimizing cut weight: recursive
/// bisection, each bisection refined by pass-based move sequences with
/// rollback (best of 8 seeded starts, run on the worker pool), followed by
/// a k-way move-and-swap descent to a local optimum. Topology-agnostic:
/// only k and the capacities are read from the network; the result does not
/// depend on the thread count.
StaticPartition static_partition(const AggregatedGraph& graph, const QpuNetwork& network,
                                 std::uint64_t seed, int threads = 1);

/// Constant schedule repeating the partition for `depth` steps.
Schedule lift_to_schedule(const StaticPartition& partition, std::int32_t depth);

/// Parses whitespace-separated block indices (one per qubit), validates
/// against the graph size and network capacities, and recomputes the cut.
StaticPartition import_partition(std::string_view text, const AggregatedGraph& graph,
                                 const QpuNetwork& network);

std::string partition_to_text(const StaticPartition& partition);

}  // namespace dqcp

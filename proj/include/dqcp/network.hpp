#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqcp/circuit.hpp"  // Edge

namespace dqcp {

enum class TopologyKind { complete, cycle, star, path, custom };

const char* to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(std::string_view name);

/// A network of QPUs: per-node qubit capacities, unit-length physical links,
/// and the derived all-pairs hop-count distance matrix.
struct QpuNetwork {
  std::int32_t num_qpus = 0;
  std::vector<std::int32_t> capacities;
  std::vector<Edge> links;                          // canonical, sorted
  std::vector<std::vector<std::int32_t>> distance;  // symmetric graph metric

  std::int64_t total_capacity() const;
  std::int32_t dist(std::int32_t a, std::int32_t b) const {
    return distance[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
};

/// Builds one of the standard topologies, or a custom one from explicit
/// edges. The star hub is node 0. Distances are BFS hop counts; a
/// disconnected topology is rejected.
QpuNetwork build_topology(TopologyKind kind, std::int32_t num_qpus,
                          std::vector<std::int32_t> capacities,
                          const std::vector<Edge>* custom_edges = nullptr);

/// Topology file format:
///   { "num_qpus": k, "capacities": [c0, ...], "edges": [[i,j], ...] }
QpuNetwork parse_network_json(std::string_view text);
std::string network_to_json(const QpuNetwork& network);

/// True iff every QPU holds at most its capacity under this assignment.
/// Throws on QPU indices outside [0, k).
bool validate_capacity(std::span<const std::int32_t> assignment, const QpuNetwork& network);

/// First QPU whose capacity the assignment exceeds, if any.
std::optional<std::int32_t> first_overfull_qpu(std::span<const std::int32_t> assignment,
                                               const QpuNetwork& network);

/// Number of capacity-feasible assignments of num_qubits qubits, saturating
/// at `cap` to avoid overflow.
std::uint64_t count_feasible_assignments(const QpuNetwork& network, std::int32_t num_qubits,
                                         std::uint64_t cap = UINT64_MAX);

}  // namespace dqcp

#pragma once

#include <cstdint>
#include <vector>

#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/network.hpp"

namespace dqcp {

/// All capacity-feasible assignments in lexicographic order. Throws
/// LimitError when there are more than `limit`.
std::vector<Assignment> enumerate_feasible_assignments(const QpuNetwork& network,
                                                       std::int32_t num_qubits,
                                                       std::int64_t limit);

struct OracleResult {
  Schedule schedule;
  double optimum = 0.0;
};

/// Globally optimal schedule by dynamic programming over the layered graph
/// whose nodes are feasible assignments: node weight is the layer's gate
/// term, edge weight the state term between consecutive assignments. Exact
/// but exponential in instance size; refuses instances whose feasible
/// assignment count exceeds state_limit. Ties broken towards the
/// lexicographically smaller assignment during backtracking. Transition
/// evaluation is parallelized by rows; the result does not depend on the
/// thread count.
OracleResult exact_optimum(const TemporalCircuit& circuit, const QpuNetwork& network,
                           const CostWeights& weights, std::int64_t state_limit,
                           int threads = 1);

}  // namespace dqcp

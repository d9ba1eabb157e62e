#include "dqcp/oracle.hpp"

#include <algorithm>
#include <limits>

#include "dqcp/errors.hpp"
#include "dqcp/parallel.hpp"

namespace dqcp {

std::vector<Assignment> enumerate_feasible_assignments(const QpuNetwork& network,
                                                       std::int32_t num_qubits,
                                                       std::int64_t limit) {
  if (limit <= 0) throw Error("state limit must be positive");
  const std::uint64_t count =
      count_feasible_assignments(network, num_qubits, static_cast<std::uint64_t>(limit) + 1);
  if (count > static_cast<std::uint64_t>(limit))
    throw LimitError("instance has more than " + std::to_string(limit) +
                     " feasible assignments; out of oracle range");
  if (count == 0)
    throw InfeasibleError("no feasible assignment: " + std::to_string(num_qubits) +
                          " qubits exceed total capacity " +
                          std::to_string(network.total_capacity()));

  std::vector<Assignment> all;
  all.reserve(count);
  Assignment current(static_cast<std::size_t>(num_qubits), 0);
  std::vector<std::int32_t> remaining = network.capacities;
  // Depth-first over qubits, QPUs in ascending order: lexicographic output.
  auto recurse = [&](auto&& self, std::int32_t qubit) -> void {
    if (qubit == num_qubits) {
      all.push_back(current);
      return;
    }
    for (std::int32_t j = 0; j < network.num_qpus; ++j) {
      if (remaining[static_cast<std::size_t>(j)] == 0) continue;
      --remaining[static_cast<std::size_t>(j)];
      current[static_cast<std::size_t>(qubit)] = j;
      self(self, qubit + 1);
      ++remaining[static_cast<std::size_t>(j)];
    }
  };
  recurse(recurse, 0);
  return all;
}

OracleResult exact_optimum(const TemporalCircuit& circuit, const QpuNetwork& network,
                           const CostWeights& weights, std::int64_t state_limit,
                           int threads) {
  validate_weights(weights);
  const std::vector<Assignment> states =
      enumerate_feasible_assignments(network, circuit.num_qubits, state_limit);
  const std::size_t m = states.size();
  const std::size_t depth = circuit.layers.size();

  auto gate_units = [&](const Assignment& assignment, const Layer& layer) {
    std::int64_t units = 0;
    for (const auto& [a, b] : layer)
      units += network.dist(assignment[static_cast<std::size_t>(a)],
                            assignment[static_cast<std::size_t>(b)]);
    return units;
  };
  auto move_units = [&](const Assignment& from, const Assignment& to) {
    std::int64_t units = 0;
    for (std::size_t i = 0; i < from.size(); ++i) units += network.dist(from[i], to[i]);
    return units;
  };

  std::vector<double> best(m);
  std::vector<std::vector<std::int32_t>> parent(depth, std::vector<std::int32_t>(m, -1));
  for (std::size_t s = 0; s < m; ++s)
    best[s] = weights.gate * static_cast<double>(gate_units(states[s], circuit.layers[0]));

  std::vector<double> next(m);
  for (std::size_t t = 1; t < depth; ++t) {
    // Rows are independent given the previous layer; safe to parallelize.
    parallel_for(static_cast<int>(m), threads, [&](int row) {
      const auto s = static_cast<std::size_t>(row);
      double incoming = std::numeric_limits<double>::infinity();
      std::int32_t arg = -1;
      for (std::size_t p = 0; p < m; ++p) {
        const double c =
            best[p] + weights.state * static_cast<double>(move_units(states[p], states[s]));
        if (c < incoming) {  // strict: keeps the lexicographically smallest p
          incoming = c;
          arg = static_cast<std::int32_t>(p);
        }
      }
      next[s] = incoming +
                weights.gate * static_cast<double>(gate_units(states[s], circuit.layers[t]));
      parent[t][s] = arg;
    });
    best.swap(next);
  }

  std::size_t final_state = 0;
  for (std::size_t s = 1; s < m; ++s)
    if (best[s] < best[final_state]) final_state = s;

  Schedule schedule;
  schedule.assignments.resize(depth);
  std::size_t s = final_state;
  for (std::size_t t = depth; t-- > 0;) {
    schedule.assignments[t] = states[s];
    if (t > 0) s = static_cast<std::size_t>(parent[t][s]);
  }
  schedule.total_cost = best[final_state];
  return OracleResult{std::move(schedule), best[final_state]};
}

}  // namespace dqcp

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/network.hpp"
#include "dqcp/rng.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(DQCP_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline dqcp::TemporalCircuit example_circuit() {
  return dqcp::parse_circuit_json(read_file(data_path("example_circuit_n8.json")));
}

inline dqcp::Schedule example_schedule() {
  return dqcp::parse_schedule_json(read_file(data_path("example_schedule_n8.json")));
}

inline dqcp::QpuNetwork two_qpus(std::int32_t capacity) {
  return dqcp::build_topology(dqcp::TopologyKind::complete, 2, {capacity, capacity});
}

/// Capacity-respecting random schedule for property tests (not necessarily
/// related to any circuit).
inline dqcp::Schedule random_schedule(dqcp::Rng& rng, const dqcp::QpuNetwork& network,
                                      std::int32_t num_qubits, std::int32_t depth) {
  std::vector<std::int32_t> slots;
  for (std::int32_t j = 0; j < network.num_qpus; ++j) {
    const std::int32_t c = std::min(network.capacities[static_cast<std::size_t>(j)], num_qubits);
    for (std::int32_t s = 0; s < c; ++s) slots.push_back(j);
  }
  dqcp::Schedule schedule;
  for (std::int32_t t = 0; t < depth; ++t) {
    rng.shuffle(slots);
    schedule.assignments.emplace_back(slots.begin(), slots.begin() + num_qubits);
  }
  return schedule;
}

}  // namespace testutil

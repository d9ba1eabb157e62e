#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqcp/circuit.hpp"
#include "dqcp/network.hpp"

namespace dqcp {

/// One time slice: qpu_of[i] is the QPU index holding qubit i.
using Assignment = std::vector<std::int32_t>;

/// Relative weights of the two teleportation mechanisms. Distances are
/// integers, so weighted totals are exact whenever the weights are.
struct CostWeights {
  double state = 1.0;
  double gate = 1.0;
};

/// Throws unless both weights are non-negative and at least one is positive.
void validate_weights(const CostWeights& weights);

/// A per-time-step assignment sequence plus a cached total cost once
/// evaluated.
struct Schedule {
  std::vector<Assignment> assignments;
  std::optional<double> total_cost;

  std::int32_t depth() const { return static_cast<std::int32_t>(assignments.size()); }
  std::int32_t num_qubits() const {
    return assignments.empty() ? 0 : static_cast<std::int32_t>(assignments.front().size());
  }

  bool operator==(const Schedule& other) const { return assignments == other.assignments; }
};

/// Unweighted state-teleportation distance: sum over consecutive steps of
/// D(previous QPU, next QPU) for every qubit. Zero for a single slice.
std::int64_t state_cost(const Schedule& schedule, const QpuNetwork& network);

/// Unweighted gate-teleportation distance: sum over every layer (including
/// the first) of D between the endpoints of each two-qubit gate.
std::int64_t gate_cost(const Schedule& schedule, const TemporalCircuit& circuit,
                       const QpuNetwork& network);

/// Weighted total; caches the value on the schedule.
double evaluate_total(Schedule& schedule, const TemporalCircuit& circuit,
                      const QpuNetwork& network, const CostWeights& weights);

/// Cost contributed by one step: the state term for the prev->current move
/// (absent when prev is null, i.e. the first step) plus the gate term of the
/// step's layer under `current`. Summing over all steps reproduces
/// evaluate_total.
double step_cost(const Assignment* prev, const Assignment& current, const Layer& layer,
                 const QpuNetwork& network, const CostWeights& weights);

/// Schedule file format: { "depth": T, "assignments": [[...], ... T rows] }.
Schedule parse_schedule_json(std::string_view text);
std::string schedule_to_json(const Schedule& schedule);

}  // namespace dqcp

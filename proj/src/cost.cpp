#include "dqcp/cost.hpp"

#include "dqcp/errors.hpp"
#include "json.hpp"

namespace dqcp {

void validate_weights(const CostWeights& weights) {
  if (weights.state < 0.0 || weights.gate < 0.0)
    throw Error("cost weights must be non-negative");
  if (weights.state == 0.0 && weights.gate == 0.0)
    throw Error("cost weights must not both be zero");
}

namespace {

void check_uniform_rows(const Schedule& schedule) {
  for (std::size_t t = 1; t < schedule.assignments.size(); ++t)
    if (schedule.assignments[t].size() != schedule.assignments[0].size())
      throw Error("schedule row " + std::to_string(t) + " has length " +
                  std::to_string(schedule.assignments[t].size()) + ", expected " +
                  std::to_string(schedule.assignments[0].size()));
}

std::int64_t layer_gate_units(const Assignment& assignment, const Layer& layer,
                              const QpuNetwork& network) {
  std::int64_t units = 0;
  const auto n = static_cast<std::int32_t>(assignment.size());
  for (const auto& [a, b] : layer) {
    if (a < 0 || b >= n)
      throw Error("gate (" + std::to_string(a) + ", " + std::to_string(b) +
                  ") references a qubit outside the assignment of length " + std::to_string(n));
    units += network.dist(assignment[static_cast<std::size_t>(a)],
                          assignment[static_cast<std::size_t>(b)]);
  }
  return units;
}

std::int64_t move_units(const Assignment& prev, const Assignment& current,
                        const QpuNetwork& network) {
  if (prev.size() != current.size())
    throw Error("assignment length mismatch: " + std::to_string(prev.size()) + " vs " +
                std::to_string(current.size()));
  std::int64_t units = 0;
  for (std::size_t i = 0; i < prev.size(); ++i) units += network.dist(prev[i], current[i]);
  return units;
}

}  // namespace

std::int64_t state_cost(const Schedule& schedule, const QpuNetwork& network) {
  if (schedule.assignments.empty()) throw Error("state_cost: empty schedule");
  check_uniform_rows(schedule);
  std::int64_t units = 0;
  for (std::size_t t = 1; t < schedule.assignments.size(); ++t)
    units += move_units(schedule.assignments[t - 1], schedule.assignments[t], network);
  return units;
}

std::int64_t gate_cost(const Schedule& schedule, const TemporalCircuit& circuit,
                       const QpuNetwork& network) {
  if (schedule.depth() != circuit.depth())
    throw Error("schedule depth " + std::to_string(schedule.depth()) +
                " != circuit depth " + std::to_string(circuit.depth()));
  std::int64_t units = 0;
  for (std::size_t t = 0; t < circuit.layers.size(); ++t)
    units += layer_gate_units(schedule.assignments[t], circuit.layers[t], network);
  return units;
}

double evaluate_total(Schedule& schedule, const TemporalCircuit& circuit,
                      const QpuNetwork& network, const CostWeights& weights) {
  validate_weights(weights);
  const double total = weights.state * static_cast<double>(state_cost(schedule, network)) +
                       weights.gate * static_cast<double>(gate_cost(schedule, circuit, network));
  schedule.total_cost = total;
  return total;
}

double step_cost(const Assignment* prev, const Assignment& current, const Layer& layer,
                 const QpuNetwork& network, const CostWeights& weights) {
  std::int64_t state_units = 0;
  if (prev != nullptr) state_units = move_units(*prev, current, network);
  const std::int64_t gate_units = layer_gate_units(current, layer, network);
  return weights.state * static_cast<double>(state_units) +
         weights.gate * static_cast<double>(gate_units);
}

Schedule parse_schedule_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("schedule file: ") + e.what());
  }
  try {
    const std::int64_t depth = doc.at("depth").get<std::int64_t>();
    const auto& rows = doc.at("assignments");
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != depth)
      throw ParseError("schedule file: depth mismatch, declared " + std::to_string(depth) +
                       " but found " + std::to_string(rows.size()) + " assignment rows");
    if (depth <= 0) throw ParseError("schedule file: depth must be positive");
    Schedule schedule;
    schedule.assignments.reserve(rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const auto& row = rows[t];
      if (!row.is_array())
        throw ParseError("schedule file: row " + std::to_string(t) + " must be an array");
      Assignment assignment = row.get<Assignment>();
      if (t > 0 && assignment.size() != schedule.assignments[0].size())
        throw ParseError("schedule file: row " + std::to_string(t) + " has length " +
                         std::to_string(assignment.size()) + ", expected " +
                         std::to_string(schedule.assignments[0].size()));
      for (std::int32_t qpu : assignment)
        if (qpu < 0)
          throw ParseError("schedule file: negative QPU index in row " + std::to_string(t));
      schedule.assignments.push_back(std::move(assignment));
    }
    if (schedule.assignments[0].empty())
      throw ParseError("schedule file: rows must be non-empty");
    return schedule;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule file: ") + e.what());
  }
}

std::string schedule_to_json(const Schedule& schedule) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Assignment& assignment : schedule.assignments) rows.push_back(assignment);
  nlohmann::json doc{{"depth", schedule.depth()}, {"assignments", std::move(rows)}};
  return doc.dump();
}

}  // namespace dqcp

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dqcp {

/// Unordered qubit pair, stored canonically with first < second.
using Edge = std::pair<std::int32_t, std::int32_t>;

/// Two-qubit interactions of one time step. Sorted lexicographically;
/// no qubit appears in more than one edge.
using Layer = std::vector<Edge>;

/// A quantum circuit reduced to its interaction structure: one undirected
/// graph per time step over a fixed vertex set of logical qubits.
/// Immutable by convention after construction through the factory
/// functions below, which canonicalize and validate.
struct TemporalCircuit {
  std::int32_t num_qubits = 0;
  std::vector<Layer> layers;

  std::int32_t depth() const { return static_cast<std::int32_t>(layers.size()); }
  std::int64_t num_two_qubit_gates() const;

  bool operator==(const TemporalCircuit&) const = default;
};

/// Static view of a circuit: edge weights count how many layers contain
/// the pair. Zero-weight pairs are absent.
struct AggregatedGraph {
  std::int32_t num_qubits = 0;
  std::vector<std::pair<Edge, std::int64_t>> weighted_edges;  // sorted by edge

  std::int64_t total_weight() const;
};

/// Canonicalizes layers (orders each pair, sorts each layer) and checks all
/// circuit invariants. Throws ParseError with the offending layer/edge
/// position on violation.
TemporalCircuit make_circuit(std::int32_t num_qubits, std::vector<Layer> layers);

/// Parses the circuit file format:
///   { "num_qubits": N, "depth": T, "layers": [ [[i,j], ...], ... ] }
TemporalCircuit parse_circuit_json(std::string_view text);

/// Serializes in canonical form: layers in time order, edges sorted.
/// parse(serialize(c)) == c for every valid circuit.
std::string circuit_to_json(const TemporalCircuit& circuit);

/// Generates a random circuit. Per layer, qubits are shuffled and grouped
/// into floor(N/2) disjoint candidate pairs; each pair independently becomes
/// a two-qubit gate with probability gate_probability. Deterministic in seed.
TemporalCircuit generate_random_circuit(std::int32_t num_qubits, std::int32_t depth,
                                        double gate_probability, std::uint64_t seed);

/// Counts pair occurrences across all layers.
AggregatedGraph aggregate(const TemporalCircuit& circuit);

}  // namespace dqcp

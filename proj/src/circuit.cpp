#include "dqcp/circuit.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "dqcp/errors.hpp"
#include "dqcp/rng.hpp"
#include "json.hpp"

namespace dqcp {

namespace {

std::string edge_pos(std::size_t layer, std::size_t index) {
  return "layer " + std::to_string(layer) + ", edge " + std::to_string(index);
}

}  // namespace

std::int64_t TemporalCircuit::num_two_qubit_gates() const {
  std::int64_t n = 0;
  for (const Layer& layer : layers) n += static_cast<std::int64_t>(layer.size());
  return n;
}

std::int64_t AggregatedGraph::total_weight() const {
  std::int64_t w = 0;
  for (const auto& [edge, weight] : weighted_edges) w += weight;
  return w;
}

TemporalCircuit make_circuit(std::int32_t num_qubits, std::vector<Layer> layers) {
  if (num_qubits <= 0) throw ParseError("num_qubits must be positive");
  if (layers.empty()) throw ParseError("depth must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(num_qubits));
  for (std::size_t t = 0; t < layers.size(); ++t) {
    Layer& layer = layers[t];
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t e = 0; e < layer.size(); ++e) {
      auto& [a, b] = layer[e];
      if (a == b)
        throw ParseError("self-loop at " + edge_pos(t, e) + ": qubit " + std::to_string(a));
      if (a > b) std::swap(a, b);
      if (a < 0 || b >= num_qubits)
        throw ParseError("qubit index out of range [0, " + std::to_string(num_qubits) +
                         ") at " + edge_pos(t, e));
      for (std::int32_t q : {a, b}) {
        if (seen[static_cast<std::size_t>(q)])
          throw ParseError("qubit " + std::to_string(q) + " used twice at " + edge_pos(t, e));
        seen[static_cast<std::size_t>(q)] = true;
      }
    }
    std::sort(layer.begin(), layer.end());
  }
  return TemporalCircuit{num_qubits, std::move(layers)};
}

TemporalCircuit parse_circuit_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("circuit file: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("circuit file: expected a JSON object");
    const std::int64_t n = doc.at("num_qubits").get<std::int64_t>();
    const std::int64_t depth = doc.at("depth").get<std::int64_t>();
    if (n <= 0 || n > (1 << 24)) throw ParseError("circuit file: invalid num_qubits");
    if (depth <= 0 || depth > (1 << 24)) throw ParseError("circuit file: invalid depth");
    const auto& layers_json = doc.at("layers");
    if (!layers_json.is_array())
      throw ParseError("circuit file: \"layers\" must be an array");
    if (static_cast<std::int64_t>(layers_json.size()) != depth)
      throw ParseError("circuit file: depth mismatch, declared " + std::to_string(depth) +
                       " but found " + std::to_string(layers_json.size()) + " layers");
    std::vector<Layer> layers;
    layers.reserve(layers_json.size());
    for (std::size_t t = 0; t < layers_json.size(); ++t) {
      const auto& layer_json = layers_json[t];
      if (!layer_json.is_array())
        throw ParseError("circuit file: layer " + std::to_string(t) + " must be an array");
      Layer layer;
      layer.reserve(layer_json.size());
      for (std::size_t e = 0; e < layer_json.size(); ++e) {
        const auto& pair = layer_json[e];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer())
          throw ParseError("circuit file: " + edge_pos(t, e) +
                           " must be a 2-element integer array");
        layer.emplace_back(pair[0].get<std::int32_t>(), pair[1].get<std::int32_t>());
      }
      layers.push_back(std::move(layer));
    }
    return make_circuit(static_cast<std::int32_t>(n), std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("circuit file: ") + e.what());
  }
}

std::string circuit_to_json(const TemporalCircuit& circuit) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : circuit.layers) {
    nlohmann::json layer_json = nlohmann::json::array();
    for (const auto& [a, b] : layer) layer_json.push_back({a, b});
    layers.push_back(std::move(layer_json));
  }
  nlohmann::json doc{{"num_qubits", circuit.num_qubits},
                     {"depth", circuit.depth()},
                     {"layers", std::move(layers)}};
  return doc.dump();
}

TemporalCircuit generate_random_circuit(std::int32_t num_qubits, std::int32_t depth,
                                        double gate_probability, std::uint64_t seed) {
  if (num_qubits < 2) throw Error("generate_random_circuit: num_qubits must be >= 2");
  if (depth <= 0) throw Error("generate_random_circuit: depth must be positive");
  if (gate_probability < 0.0 || gate_probability > 1.0)
    throw Error("generate_random_circuit: gate_probability must be in [0, 1]");
  std::vector<std::int32_t> order(static_cast<std::size_t>(num_qubits));
  std::iota(order.begin(), order.end(), 0);
  std::vector<Layer> layers;
  layers.reserve(static_cast<std::size_t>(depth));
  for (std::int32_t t = 0; t < depth; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    rng.shuffle(order);
    Layer layer;
    for (std::int32_t p = 0; p + 1 < num_qubits; p += 2) {
      // Candidate pair (order[p], order[p+1]); an odd trailing qubit idles.
      if (rng.bernoulli(gate_probability)) {
        const std::int32_t a = std::min(order[p], order[p + 1]);
        const std::int32_t b = std::max(order[p], order[p + 1]);
        layer.emplace_back(a, b);
      }
    }
    std::sort(layer.begin(), layer.end());
    layers.push_back(std::move(layer));
  }
  return TemporalCircuit{num_qubits, std::move(layers)};
}

AggregatedGraph aggregate(const TemporalCircuit& circuit) {
  std::map<Edge, std::int64_t> counts;
  for (const Layer& layer : circuit.layers)
    for (const Edge& edge : layer) ++counts[edge];
  AggregatedGraph graph;
  graph.num_qubits = circuit.num_qubits;
  graph.weighted_edges.assign(counts.begin(), counts.end());
  return graph;
}

}  // namespace dqcp

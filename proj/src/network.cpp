#include "dqcp/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "dqcp/errors.hpp"
#include "json.hpp"

namespace dqcp {

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::cycle: return "cycle";
    case TopologyKind::star: return "star";
    case TopologyKind::path: return "path";
    case TopologyKind::custom: return "custom";
  }
  return "?";
}

TopologyKind topology_kind_from_string(std::string_view name) {
  if (name == "complete") return TopologyKind::complete;
  if (name == "cycle") return TopologyKind::cycle;
  if (name == "star") return TopologyKind::star;
  if (name == "path") return TopologyKind::path;
  if (name == "custom") return TopologyKind::custom;
  throw ParseError("unknown topology kind \"" + std::string(name) + "\"");
}

std::int64_t QpuNetwork::total_capacity() const {
  return std::accumulate(capacities.begin(), capacities.end(), std::int64_t{0});
}

namespace {

std::vector<std::vector<std::int32_t>> bfs_distances(std::int32_t k,
                                                     const std::vector<Edge>& links) {
  std::vector<std::vector<std::int32_t>> adjacency(static_cast<std::size_t>(k));
  for (const auto& [a, b] : links) {
    adjacency[static_cast<std::size_t>(a)].push_back(b);
    adjacency[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<std::vector<std::int32_t>> dist(
      static_cast<std::size_t>(k), std::vector<std::int32_t>(static_cast<std::size_t>(k), -1));
  for (std::int32_t src = 0; src < k; ++src) {
    auto& row = dist[static_cast<std::size_t>(src)];
    row[static_cast<std::size_t>(src)] = 0;
    std::deque<std::int32_t> queue{src};
    while (!queue.empty()) {
      const std::int32_t u = queue.front();
      queue.pop_front();
      for (std::int32_t v : adjacency[static_cast<std::size_t>(u)]) {
        if (row[static_cast<std::size_t>(v)] < 0) {
          row[static_cast<std::size_t>(v)] = row[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
    for (std::int32_t d : row)
      if (d < 0) throw ParseError("topology is disconnected");
  }
  return dist;
}

std::vector<Edge> canonical_links(std::int32_t k, const std::vector<Edge>& edges) {
  std::set<Edge> unique;
  for (auto [a, b] : edges) {
    if (a == b) throw ParseError("topology self-loop on QPU " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= k)
      throw ParseError("topology edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") out of range [0, " + std::to_string(k) + ")");
    unique.emplace(a, b);
  }
  return {unique.begin(), unique.end()};
}

}  // namespace

QpuNetwork build_topology(TopologyKind kind, std::int32_t num_qpus,
                          std::vector<std::int32_t> capacities,
                          const std::vector<Edge>* custom_edges) {
  if (num_qpus < 2) throw ParseError("num_qpus must be >= 2");
  if (static_cast<std::int32_t>(capacities.size()) != num_qpus)
    throw ParseError("capacity list length " + std::to_string(capacities.size()) +
                     " != num_qpus " + std::to_string(num_qpus));
  for (std::int32_t c : capacities)
    if (c <= 0) throw ParseError("capacities must be positive");

  std::vector<Edge> edges;
  switch (kind) {
    case TopologyKind::complete:
      for (std::int32_t i = 0; i < num_qpus; ++i)
        for (std::int32_t j = i + 1; j < num_qpus; ++j) edges.emplace_back(i, j);
      break;
    case TopologyKind::cycle:
      for (std::int32_t i = 0; i + 1 < num_qpus; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(0, num_qpus - 1);
      break;
    case TopologyKind::star:
      // Node 0 is the hub.
      for (std::int32_t i = 1; i < num_qpus; ++i) edges.emplace_back(0, i);
      break;
    case TopologyKind::path:
      for (std::int32_t i = 0; i + 1 < num_qpus; ++i) edges.emplace_back(i, i + 1);
      break;
    case TopologyKind::custom:
      if (custom_edges == nullptr) throw ParseError("custom topology requires an edge list");
      edges = *custom_edges;
      break;
  }

  QpuNetwork network;
  network.num_qpus = num_qpus;
  network.capacities = std::move(capacities);
  network.links = canonical_links(num_qpus, edges);
  network.distance = bfs_distances(num_qpus, network.links);
  return network;
}

QpuNetwork parse_network_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("topology file: ") + e.what());
  }
  try {
    const std::int32_t k = doc.at("num_qpus").get<std::int32_t>();
    auto capacities = doc.at("capacities").get<std::vector<std::int32_t>>();
    std::vector<Edge> edges;
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("topology file: edges must be 2-element arrays");
      edges.emplace_back(pair[0].get<std::int32_t>(), pair[1].get<std::int32_t>());
    }
    return build_topology(TopologyKind::custom, k, std::move(capacities), &edges);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topology file: ") + e.what());
  }
}

std::string network_to_json(const QpuNetwork& network) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : network.links) edges.push_back({a, b});
  nlohmann::json doc{{"num_qpus", network.num_qpus},
                     {"capacities", network.capacities},
                     {"edges", std::move(edges)}};
  return doc.dump();
}

std::optional<std::int32_t> first_overfull_qpu(std::span<const std::int32_t> assignment,
                                               const QpuNetwork& network) {
  std::vector<std::int32_t> counts(static_cast<std::size_t>(network.num_qpus), 0);
  for (std::int32_t qpu : assignment) {
    if (qpu < 0 || qpu >= network.num_qpus)
      throw Error("assignment references QPU " + std::to_string(qpu) + ", valid range [0, " +
                  std::to_string(network.num_qpus) + ")");
    ++counts[static_cast<std::size_t>(qpu)];
  }
  for (std::int32_t j = 0; j < network.num_qpus; ++j)
    if (counts[static_cast<std::size_t>(j)] > network.capacities[static_cast<std::size_t>(j)])
      return j;
  return std::nullopt;
}

bool validate_capacity(std::span<const std::int32_t> assignment, const QpuNetwork& network) {
  return !first_overfull_qpu(assignment, network).has_value();
}

std::uint64_t count_feasible_assignments(const QpuNetwork& network, std::int32_t num_qubits,
                                         std::uint64_t cap) {
  // Saturating DP over QPUs: ways[u] = number of ways to place u labeled
  // qubits on the QPUs processed so far. Adding a QPU of capacity c
  // contributes C(remaining, a) placements for each a <= c.
  const std::size_t n = static_cast<std::size_t>(num_qubits);
  auto sat_add = [cap](std::uint64_t a, std::uint64_t b) {
    return (a > cap - std::min(b, cap)) ? cap : std::min(cap, a + b);
  };
  auto sat_mul = [cap](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t{0};
    if (a > cap / b) return cap;
    return std::min(cap, a * b);
  };
  // Pascal's triangle with saturation.
  std::vector<std::vector<std::uint64_t>> choose(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    choose[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j)
      choose[i][j] = sat_add(choose[i - 1][j - 1], choose[i - 1][j]);
  }
  std::vector<std::uint64_t> ways(n + 1, 0);
  ways[0] = 1;
  for (std::int32_t qpu = 0; qpu < network.num_qpus; ++qpu) {
    const std::size_t c = static_cast<std::size_t>(
        std::min<std::int32_t>(network.capacities[static_cast<std::size_t>(qpu)], num_qubits));
    std::vector<std::uint64_t> next(n + 1, 0);
    for (std::size_t used = 0; used <= n; ++used) {
      if (ways[used] == 0) continue;
      for (std::size_t a = 0; a <= c && used + a <= n; ++a)
        next[used + a] = sat_add(next[used + a], sat_mul(ways[used], choose[n - used][a]));
    }
    ways = std::move(next);
  }
  return ways[n];
}

}  // namespace dqcp

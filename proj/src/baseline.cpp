#include "dqcp/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "dqcp/errors.hpp"
#include "dqcp/parallel.hpp"
#include "dqcp/rng.hpp"

namespace dqcp {

std::int64_t compute_cut_weight(const AggregatedGraph& graph,
                                std::span<const std::int32_t> blocks) {
  std::int64_t cut = 0;
  for (const auto& [edge, weight] : graph.weighted_edges)
    if (blocks[static_cast<std::size_t>(edge.first)] !=
        blocks[static_cast<std::size_t>(edge.second)])
      cut += weight;
  return cut;
}

namespace {

struct WeightedNeighbor {
  std::int32_t vertex;
  std::int64_t weight;
};

using AdjacencyList = std::vector<std::vector<WeightedNeighbor>>;

AdjacencyList build_adjacency(const AggregatedGraph& graph) {
  AdjacencyList adjacency(static_cast<std::size_t>(graph.num_qubits));
  for (const auto& [edge, weight] : graph.weighted_edges) {
    adjacency[static_cast<std::size_t>(edge.first)].push_back({edge.second, weight});
    adjacency[static_cast<std::size_t>(edge.second)].push_back({edge.first, weight});
  }
  return adjacency;
}

// One bisection instance: split `vertices` into a left part of size at most
// cap_left and a right part of size at most cap_right, minimizing the weight
// of internal edges crossing the split. side[] is indexed by local position.
struct Bisection {
  const AdjacencyList& adjacency;
  const std::vector<std::int32_t>& vertices;
  std::vector<std::int32_t> local_of;  // global vertex -> local index, -1 if outside
  std::int64_t cap_left, cap_right;

  Bisection(const AdjacencyList& adj, const std::vector<std::int32_t>& verts,
            std::int64_t cl, std::int64_t cr)
      : adjacency(adj), vertices(verts), local_of(adj.size(), -1), cap_left(cl), cap_right(cr) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      local_of[static_cast<std::size_t>(verts[i])] = static_cast<std::int32_t>(i);
  }

  std::int64_t cut_of(const std::vector<std::uint8_t>& side) const {
    std::int64_t cut = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (const auto& [u, w] : adjacency[static_cast<std::size_t>(vertices[i])]) {
        const std::int32_t lu = local_of[static_cast<std::size_t>(u)];
        if (lu >= 0 && static_cast<std::size_t>(lu) > i &&
            side[static_cast<std::size_t>(lu)] != side[i])
          cut += w;
      }
    return cut;
  }

  // Pass-based refinement: repeatedly move the highest-gain unlocked vertex,
  // allowing one unit of transient overflow so that balanced instances can
  // still alternate moves, then roll back to the best capacity-feasible
  // prefix. Repeats while a pass finds a strict improvement.
  void refine(std::vector<std::uint8_t>& side) const {
    const std::size_t n = vertices.size();
    std::vector<std::int64_t> gain(n);
    std::vector<std::uint8_t> locked(n);
    std::vector<std::size_t> moves;
    moves.reserve(n);
    for (;;) {
      std::int64_t counts[2] = {0, 0};
      for (std::size_t i = 0; i < n; ++i) ++counts[side[i]];
      for (std::size_t i = 0; i < n; ++i) {
        gain[i] = 0;
        for (const auto& [u, w] : adjacency[static_cast<std::size_t>(vertices[i])]) {
          const std::int32_t lu = local_of[static_cast<std::size_t>(u)];
          if (lu >= 0) gain[i] += (side[static_cast<std::size_t>(lu)] != side[i]) ? w : -w;
        }
      }
      std::fill(locked.begin(), locked.end(), 0);
      moves.clear();
      std::int64_t cumulative = 0, best_gain = 0;
      std::size_t best_len = 0;
      const std::int64_t caps[2] = {cap_left, cap_right};
      for (;;) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (locked[i]) continue;
          const int target = 1 - side[i];
          if (counts[target] + 1 > caps[target] + 1) continue;
          if (pick == n || gain[i] > gain[pick]) pick = i;
        }
        if (pick == n) break;
        // Tentatively move `pick` and update neighbor gains.
        const int from = side[pick];
        cumulative += gain[pick];
        side[pick] = static_cast<std::uint8_t>(1 - from);
        --counts[from];
        ++counts[1 - from];
        locked[pick] = 1;
        moves.push_back(pick);
        for (const auto& [u, w] : adjacency[static_cast<std::size_t>(vertices[pick])]) {
          const std::int32_t lu = local_of[static_cast<std::size_t>(u)];
          if (lu < 0 || locked[static_cast<std::size_t>(lu)]) continue;
          if (side[static_cast<std::size_t>(lu)] == from)
            gain[static_cast<std::size_t>(lu)] += 2 * w;
          else
            gain[static_cast<std::size_t>(lu)] -= 2 * w;
        }
        const bool feasible = counts[0] <= caps[0] && counts[1] <= caps[1];
        if (feasible && cumulative > best_gain) {
          best_gain = cumulative;
          best_len = moves.size();
        }
      }
      // Undo everything past the best feasible prefix.
      for (std::size_t m = moves.size(); m > best_len; --m)
        side[moves[m - 1]] ^= 1;
      if (best_gain <= 0) return;
    }
  }

  std::vector<std::uint8_t> greedy_start() const {
    const std::size_t n = vertices.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::int64_t> degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [u, w] : adjacency[static_cast<std::size_t>(vertices[i])])
        if (local_of[static_cast<std::size_t>(u)] >= 0) degree[i] += w;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    std::vector<std::uint8_t> side(n, 0);
    std::vector<std::uint8_t> placed(n, 0);
    std::int64_t counts[2] = {0, 0};
    const std::int64_t caps[2] = {cap_left, cap_right};
    for (std::size_t i : order) {
      // Weight towards each already-placed side.
      std::int64_t attraction[2] = {0, 0};
      for (const auto& [u, w] : adjacency[static_cast<std::size_t>(vertices[i])]) {
        const std::int32_t lu = local_of[static_cast<std::size_t>(u)];
        if (lu >= 0 && placed[static_cast<std::size_t>(lu)])
          attraction[side[static_cast<std::size_t>(lu)]] += w;
      }
      int choice;
      if (counts[0] + 1 > caps[0])
        choice = 1;
      else if (counts[1] + 1 > caps[1])
        choice = 0;
      else if (attraction[0] != attraction[1])
        choice = attraction[0] > attraction[1] ? 0 : 1;
      else
        choice = (caps[0] - counts[0] >= caps[1] - counts[1]) ? 0 : 1;
      side[i] = static_cast<std::uint8_t>(choice);
      placed[i] = 1;
      ++counts[choice];
    }
    return side;
  }

  std::vector<std::uint8_t> random_start(Rng& rng) const {
    const std::size_t n = vertices.size();
    const auto n64 = static_cast<std::int64_t>(n);
    const std::int64_t lo = std::max<std::int64_t>(0, n64 - cap_right);
    const std::int64_t hi = std::min<std::int64_t>(n64, cap_left);
    std::int64_t left_count = (n64 * cap_left + (cap_left + cap_right) / 2) / (cap_left + cap_right);
    left_count = std::clamp(left_count, lo, hi);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<std::uint8_t> side(n, 1);
    for (std::int64_t i = 0; i < left_count; ++i) side[order[static_cast<std::size_t>(i)]] = 0;
    return side;
  }

  // Best of one greedy and seven random starts, each refined to a local
  // optimum of the pass-based scheme. Restarts are independent and run on
  // the worker pool; ties resolved by lexicographic side vector so the
  // result is a pure function of the seed.
  std::vector<std::uint8_t> solve(std::uint64_t seed, int threads) const {
    constexpr int kRestarts = 8;
    std::vector<std::vector<std::uint8_t>> sides(kRestarts);
    parallel_for(kRestarts, threads, [&](int restart) {
      std::vector<std::uint8_t> side;
      if (restart == 0) {
        side = greedy_start();
      } else {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
        side = random_start(rng);
      }
      refine(side);
      sides[static_cast<std::size_t>(restart)] = std::move(side);
    });
    std::vector<std::uint8_t> best;
    std::int64_t best_cut = std::numeric_limits<std::int64_t>::max();
    for (std::vector<std::uint8_t>& side : sides) {
      const std::int64_t cut = cut_of(side);
      if (cut < best_cut || (cut == best_cut && side < best)) {
        best_cut = cut;
        best = std::move(side);
      }
    }
    return best;
  }
};

void partition_recursive(const AdjacencyList& adjacency, const QpuNetwork& network,
                         const std::vector<std::int32_t>& vertices, std::int32_t qpu_lo,
                         std::int32_t qpu_hi, std::uint64_t seed, int threads,
                         std::vector<std::int32_t>& blocks) {
  if (qpu_hi - qpu_lo == 1) {
    for (std::int32_t v : vertices) blocks[static_cast<std::size_t>(v)] = qpu_lo;
    return;
  }
  const std::int32_t mid = qpu_lo + (qpu_hi - qpu_lo) / 2;
  std::int64_t cap_left = 0, cap_right = 0;
  for (std::int32_t j = qpu_lo; j < mid; ++j)
    cap_left += network.capacities[static_cast<std::size_t>(j)];
  for (std::int32_t j = mid; j < qpu_hi; ++j)
    cap_right += network.capacities[static_cast<std::size_t>(j)];

  Bisection bisection(adjacency, vertices, cap_left, cap_right);
  const std::vector<std::uint8_t> side =
      bisection.solve(derive_seed(seed, static_cast<std::uint64_t>(qpu_lo),
                                  static_cast<std::uint64_t>(qpu_hi)),
                      threads);
  std::vector<std::int32_t> left, right;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    (side[i] == 0 ? left : right).push_back(vertices[i]);
  // Only the top-level bisection fans out to the pool.
  partition_recursive(adjacency, network, left, qpu_lo, mid, seed, 1, blocks);
  partition_recursive(adjacency, network, right, mid, qpu_hi, seed, 1, blocks);
}

// First-improvement descent over single relocations and pairwise swaps,
// in fixed scan order. Runs until no feasible improving move exists.
void kway_descent(const AdjacencyList& adjacency, const QpuNetwork& network,
                  std::vector<std::int32_t>& blocks) {
  const auto n = static_cast<std::int32_t>(adjacency.size());
  const std::int32_t k = network.num_qpus;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (std::int32_t b : blocks) ++counts[static_cast<std::size_t>(b)];

  // Cut change if v moves to block b.
  auto move_delta = [&](std::int32_t v, std::int32_t b) {
    std::int64_t delta = 0;
    const std::int32_t a = blocks[static_cast<std::size_t>(v)];
    for (const auto& [u, w] : adjacency[static_cast<std::size_t>(v)]) {
      const std::int32_t bu = blocks[static_cast<std::size_t>(u)];
      delta += w * ((bu != b) - (bu != a));
    }
    return delta;
  };

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::int32_t v = 0; v < n; ++v) {
      const std::int32_t a = blocks[static_cast<std::size_t>(v)];
      for (std::int32_t b = 0; b < k; ++b) {
        if (b == a) continue;
        if (counts[static_cast<std::size_t>(b)] + 1 >
            network.capacities[static_cast<std::size_t>(b)])
          continue;
        if (move_delta(v, b) < 0) {
          blocks[static_cast<std::size_t>(v)] = b;
          --counts[static_cast<std::size_t>(a)];
          ++counts[static_cast<std::size_t>(b)];
          improved = true;
          break;
        }
      }
    }
    for (std::int32_t v = 0; v < n; ++v) {
      for (std::int32_t u = v + 1; u < n; ++u) {
        const std::int32_t a = blocks[static_cast<std::size_t>(v)];
        const std::int32_t b = blocks[static_cast<std::size_t>(u)];
        if (a == b) continue;
        std::int64_t delta = move_delta(v, b) ;
        blocks[static_cast<std::size_t>(v)] = b;  // evaluate u's move with v already flipped
        delta += move_delta(u, a);
        blocks[static_cast<std::size_t>(v)] = a;
        if (delta < 0) {
          blocks[static_cast<std::size_t>(v)] = b;
          blocks[static_cast<std::size_t>(u)] = a;
          improved = true;
        }
      }
    }
  }
}

}  // namespace

StaticPartition static_partition(const AggregatedGraph& graph, const QpuNetwork& network,
                                 std::uint64_t seed, int threads) {
  const std::int32_t n = graph.num_qubits;
  if (n > network.total_capacity())
    throw InfeasibleError("instance infeasible: " + std::to_string(n) + " qubits exceed total capacity " +
                          std::to_string(network.total_capacity()));
  const AdjacencyList adjacency = build_adjacency(graph);
  std::vector<std::int32_t> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 0);
  std::vector<std::int32_t> blocks(static_cast<std::size_t>(n), 0);
  partition_recursive(adjacency, network, vertices, 0, network.num_qpus, seed, threads, blocks);
  kway_descent(adjacency, network, blocks);

  StaticPartition partition;
  partition.qpu_of = std::move(blocks);
  partition.cut_weight = compute_cut_weight(graph, partition.qpu_of);
  return partition;
}

Schedule lift_to_schedule(const StaticPartition& partition, std::int32_t depth) {
  if (depth <= 0) throw Error("lift_to_schedule: depth must be positive");
  Schedule schedule;
  schedule.assignments.assign(static_cast<std::size_t>(depth), partition.qpu_of);
  return schedule;
}

StaticPartition import_partition(std::string_view text, const AggregatedGraph& graph,
                                 const QpuNetwork& network) {
  std::istringstream in{std::string(text)};
  std::vector<std::int32_t> blocks;
  std::int64_t value = 0;
  while (in >> value) {
    if (value < 0 || value >= network.num_qpus)
      throw ParseError("partition file: block index " + std::to_string(value) +
                       " out of range [0, " + std::to_string(network.num_qpus) + ") at entry " +
                       std::to_string(blocks.size()));
    blocks.push_back(static_cast<std::int32_t>(value));
  }
  if (!in.eof())
    throw ParseError("partition file: non-integer token at entry " + std::to_string(blocks.size()));
  if (blocks.empty()) throw ParseError("partition file: empty");
  if (static_cast<std::int32_t>(blocks.size()) != graph.num_qubits)
    throw ParseError("partition file: " + std::to_string(blocks.size()) + " entries for " +
                     std::to_string(graph.num_qubits) + " qubits");
  if (const auto overfull = first_overfull_qpu(blocks, network))
    throw InfeasibleError("partition file: QPU " + std::to_string(*overfull) +
                          " over capacity");
  StaticPartition partition;
  partition.qpu_of = std::move(blocks);
  partition.cut_weight = compute_cut_weight(graph, partition.qpu_of);
  return partition;
}

std::string partition_to_text(const StaticPartition& partition) {
  std::string out;
  for (std::size_t i = 0; i < partition.qpu_of.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(partition.qpu_of[i]);
  }
  out += '\n';
  return out;
}

}  // namespace dqcp

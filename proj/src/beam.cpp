#include "dqcp/beam.hpp"

#include <algorithm>
#include <unordered_set>

#include "dqcp/errors.hpp"
#include "dqcp/parallel.hpp"

namespace dqcp {

SearchParams default_search_params(std::int32_t num_qubits) {
  SearchParams params;
  params.beam_width = 8 * num_qubits;
  params.num_swaps = 4 * num_qubits;
  params.num_random = 2 * num_qubits;
  return params;
}

Schedule schedule_of(const BeamNode& node) {
  std::vector<const BeamNode*> chain;
  for (const BeamNode* n = &node; n != nullptr; n = n->parent.get()) chain.push_back(n);
  Schedule schedule;
  schedule.assignments.reserve(chain.size());
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    schedule.assignments.push_back((*it)->assignment);
  return schedule;
}

namespace {

struct AssignmentHash {
  std::size_t operator()(const Assignment& a) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::int32_t v : a) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t layer_units(const Assignment& assignment, const Layer& layer,
                         const QpuNetwork& network) {
  std::int64_t units = 0;
  for (const auto& [a, b] : layer)
    units += network.dist(assignment[static_cast<std::size_t>(a)],
                          assignment[static_cast<std::size_t>(b)]);
  return units;
}

void check_feasible(const TemporalCircuit& circuit, const QpuNetwork& network) {
  if (circuit.layers.empty()) throw Error("circuit has no layers");
  if (circuit.num_qubits > network.total_capacity())
    throw InfeasibleError("instance infeasible: " + std::to_string(circuit.num_qubits) +
                          " qubits exceed total capacity " +
                          std::to_string(network.total_capacity()));
}

void check_params(const SearchParams& params) {
  if (params.beam_width < 1) throw Error("beam_width must be >= 1");
  if (params.num_swaps < 0 || params.num_random < 0)
    throw Error("expansion counts must be non-negative");
  validate_weights(params.weights);
}

std::vector<std::int32_t> qpu_counts(const Assignment& assignment, std::int32_t num_qpus) {
  std::vector<std::int32_t> counts(static_cast<std::size_t>(num_qpus), 0);
  for (std::int32_t qpu : assignment) ++counts[static_cast<std::size_t>(qpu)];
  return counts;
}

// Flattened-sequence comparison for the standalone pruning entry point and
// the verify mode. The hot path avoids this via cached prefix ranks.
std::vector<std::int32_t> flattened(const BeamNode& node) {
  std::vector<std::int32_t> flat;
  const Schedule schedule = schedule_of(node);
  for (const Assignment& a : schedule.assignments) flat.insert(flat.end(), a.begin(), a.end());
  return flat;
}

}  // namespace

Assignment random_assignment(Rng& rng, const QpuNetwork& network, std::int32_t num_qubits) {
  std::vector<std::int32_t> slots;
  slots.reserve(static_cast<std::size_t>(network.num_qpus) *
                static_cast<std::size_t>(num_qubits));
  for (std::int32_t j = 0; j < network.num_qpus; ++j) {
    const std::int32_t c =
        std::min(network.capacities[static_cast<std::size_t>(j)], num_qubits);
    for (std::int32_t s = 0; s < c; ++s) slots.push_back(j);
  }
  rng.shuffle(slots);
  return Assignment(slots.begin(), slots.begin() + num_qubits);
}

std::vector<StepCandidate> candidate_assignments(const Assignment& prev, const Layer& layer,
                                                 const QpuNetwork& network,
                                                 const SearchParams& params, Rng& rng) {
  const auto n = static_cast<std::int32_t>(prev.size());
  std::vector<StepCandidate> out;
  out.reserve(static_cast<std::size_t>(1 + 2 * layer.size()) +
              static_cast<std::size_t>(params.num_swaps + params.num_random));
  std::unordered_set<Assignment, AssignmentHash> seen;
  auto push = [&](StepCandidate cand) {
    if (seen.insert(cand.assignment).second) out.push_back(std::move(cand));
  };

  // Preservation.
  push({prev, {}, false});

  // Mitigation: co-locate each split gate, one endpoint at a time. Moves
  // that would overfill the target QPU are discarded.
  const std::vector<std::int32_t> counts = qpu_counts(prev, network.num_qpus);
  for (const auto& [a, b] : layer) {
    const std::int32_t qa = prev[static_cast<std::size_t>(a)];
    const std::int32_t qb = prev[static_cast<std::size_t>(b)];
    if (qa == qb) continue;
    if (counts[static_cast<std::size_t>(qb)] + 1 <=
        network.capacities[static_cast<std::size_t>(qb)]) {
      StepCandidate cand{prev, {a}, false};
      cand.assignment[static_cast<std::size_t>(a)] = qb;
      push(std::move(cand));
    }
    if (counts[static_cast<std::size_t>(qa)] + 1 <=
        network.capacities[static_cast<std::size_t>(qa)]) {
      StepCandidate cand{prev, {b}, false};
      cand.assignment[static_cast<std::size_t>(b)] = qa;
      push(std::move(cand));
    }
  }

  // Swaps: exchange the QPU labels of two qubits on distinct QPUs. Swapping
  // preserves per-QPU counts, so no capacity check is needed.
  for (std::int32_t s = 0; n >= 2 && s < params.num_swaps; ++s) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const auto i = static_cast<std::int32_t>(rng.bounded(static_cast<std::uint64_t>(n)));
      auto j = static_cast<std::int32_t>(rng.bounded(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      if (prev[static_cast<std::size_t>(i)] == prev[static_cast<std::size_t>(j)]) continue;
      StepCandidate cand{prev, {i, j}, false};
      std::swap(cand.assignment[static_cast<std::size_t>(i)],
                cand.assignment[static_cast<std::size_t>(j)]);
      push(std::move(cand));
      break;
    }
  }

  // Diversification: fresh valid random assignments.
  for (std::int32_t r = 0; r < params.num_random; ++r)
    push({random_assignment(rng, network, n), {}, true});

  return out;
}

namespace {

BeamNodePtr make_node(BeamNodePtr parent, Assignment assignment, std::int64_t state_units,
                      std::int64_t gate_units, std::atomic<std::int64_t>* live_counter) {
  auto node = std::make_shared<BeamNode>();
  node->parent = std::move(parent);
  node->assignment = std::move(assignment);
  node->state_units = state_units;
  node->gate_units = gate_units;
  node->live_counter = live_counter;
  if (live_counter != nullptr) live_counter->fetch_add(1, std::memory_order_relaxed);
  return node;
}

std::vector<BeamNodePtr> initialize_beam_impl(const TemporalCircuit& circuit,
                                              const QpuNetwork& network,
                                              const SearchParams& params,
                                              std::atomic<std::int64_t>* live_counter) {
  check_params(params);
  check_feasible(circuit, network);
  const std::uint64_t feasible =
      count_feasible_assignments(network, circuit.num_qubits, std::uint64_t{1} << 62);
  const std::uint64_t target =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(params.beam_width), feasible);

  Rng rng(derive_seed(params.seed, 0, 0));
  std::unordered_set<Assignment, AssignmentHash> seen;
  std::vector<BeamNodePtr> beam;
  beam.reserve(target);
  while (beam.size() < target) {
    Assignment assignment = random_assignment(rng, network, circuit.num_qubits);
    if (!seen.insert(assignment).second) continue;
    const std::int64_t gate_units = layer_units(assignment, circuit.layers[0], network);
    beam.push_back(make_node(nullptr, std::move(assignment), 0, gate_units, live_counter));
  }

  std::sort(beam.begin(), beam.end(), [&](const BeamNodePtr& a, const BeamNodePtr& b) {
    const double ca = a->cost(params.weights), cb = b->cost(params.weights);
    if (ca != cb) return ca < cb;
    return a->assignment < b->assignment;
  });
  // Pure lexicographic ranks, used for tie-breaking in later prunes.
  std::vector<std::int32_t> order(beam.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return beam[static_cast<std::size_t>(a)]->assignment <
           beam[static_cast<std::size_t>(b)]->assignment;
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    const_cast<BeamNode*>(beam[static_cast<std::size_t>(order[rank])].get())->lex_rank =
        static_cast<std::int32_t>(rank);
  return beam;
}

}  // namespace

std::vector<BeamNodePtr> initialize_beam(const TemporalCircuit& circuit,
                                         const QpuNetwork& network,
                                         const SearchParams& params) {
  return initialize_beam_impl(circuit, network, params, nullptr);
}

std::vector<BeamNodePtr> prune_beam(const std::vector<BeamNodePtr>& pool,
                                    std::int32_t beam_width, const CostWeights& weights) {
  if (pool.empty()) throw Error("prune_beam: empty pool");
  struct Item {
    BeamNodePtr node;
    std::vector<std::int32_t> flat;
    double cost;
  };
  std::vector<Item> items;
  items.reserve(pool.size());
  for (const BeamNodePtr& node : pool)
    items.push_back({node, flattened(*node), node->cost(weights)});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.flat < b.flat;
  });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Item& a, const Item& b) { return a.flat == b.flat; }),
              items.end());
  if (items.size() > static_cast<std::size_t>(beam_width))
    items.resize(static_cast<std::size_t>(beam_width));
  std::vector<BeamNodePtr> kept;
  kept.reserve(items.size());
  for (Item& item : items) kept.push_back(std::move(item.node));
  return kept;
}

namespace {

struct CandidateRec {
  std::int32_t parent;
  Assignment assignment;
  std::int64_t state_units;  // cumulative through this step
  std::int64_t gate_units;
  double cost;
};

void verify_step(const std::vector<BeamNodePtr>& beam, const std::vector<CandidateRec>& pool,
                 const std::vector<BeamNodePtr>& survivors, const TemporalCircuit& circuit,
                 const QpuNetwork& network, const SearchParams& params, std::size_t step) {
  // Cumulative units must match a from-scratch recomputation of the prefix.
  for (const BeamNodePtr& node : survivors) {
    const Schedule prefix = schedule_of(*node);
    std::int64_t state_units = 0, gate_units = 0;
    for (std::size_t t = 0; t < prefix.assignments.size(); ++t) {
      gate_units += layer_units(prefix.assignments[t], circuit.layers[t], network);
      if (t > 0)
        for (std::size_t i = 0; i < prefix.assignments[t].size(); ++i)
          state_units += network.dist(prefix.assignments[t - 1][i], prefix.assignments[t][i]);
    }
    if (state_units != node->state_units || gate_units != node->gate_units)
      throw Error("verify: cumulative cost drifted at step " + std::to_string(step));
  }
  // The rank-based selection must agree with the flattened-sequence rule.
  std::vector<BeamNodePtr> as_nodes;
  as_nodes.reserve(pool.size());
  for (const CandidateRec& rec : pool)
    as_nodes.push_back(make_node(beam[static_cast<std::size_t>(rec.parent)], rec.assignment,
                                 rec.state_units, rec.gate_units, nullptr));
  const std::vector<BeamNodePtr> reference =
      prune_beam(as_nodes, params.beam_width, params.weights);
  if (reference.size() != survivors.size())
    throw Error("verify: prune size mismatch at step " + std::to_string(step));
  for (std::size_t i = 0; i < survivors.size(); ++i)
    if (flattened(*reference[i]) != flattened(*survivors[i]))
      throw Error("verify: prune order mismatch at step " + std::to_string(step));
}

}  // namespace

Schedule search(const TemporalCircuit& circuit, const QpuNetwork& network,
                const SearchParams& params, SearchStats* stats) {
  check_params(params);
  check_feasible(circuit, network);
  SearchStats local{};
  std::atomic<std::int64_t> live{0};
  std::vector<BeamNodePtr> beam = initialize_beam_impl(circuit, network, params, &live);
  local.peak_live_nodes = std::max(local.peak_live_nodes, live.load());

  const auto depth = static_cast<std::size_t>(circuit.depth());
  std::vector<std::vector<CandidateRec>> slots;
  for (std::size_t t = 1; t < depth; ++t) {
    const Layer& layer = circuit.layers[t];
    slots.assign(beam.size(), {});
    parallel_for(static_cast<int>(beam.size()), params.threads, [&](int e) {
      const BeamNodePtr& entry = beam[static_cast<std::size_t>(e)];
      Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(e)));
      std::vector<StepCandidate> cands =
          candidate_assignments(entry->assignment, layer, network, params, rng);
      std::vector<CandidateRec>& recs = slots[static_cast<std::size_t>(e)];
      recs.reserve(cands.size());
      for (StepCandidate& cand : cands) {
        std::int64_t moved_units = 0;
        if (cand.fresh) {
          for (std::size_t i = 0; i < cand.assignment.size(); ++i)
            moved_units += network.dist(entry->assignment[i], cand.assignment[i]);
        } else {
          for (std::int32_t q : cand.moved)
            moved_units += network.dist(entry->assignment[static_cast<std::size_t>(q)],
                                        cand.assignment[static_cast<std::size_t>(q)]);
        }
        CandidateRec rec;
        rec.parent = e;
        rec.state_units = entry->state_units + moved_units;
        rec.gate_units = entry->gate_units + layer_units(cand.assignment, layer, network);
        rec.cost = params.weights.state * static_cast<double>(rec.state_units) +
                   params.weights.gate * static_cast<double>(rec.gate_units);
        rec.assignment = std::move(cand.assignment);
        recs.push_back(std::move(rec));
      }
    });

    std::vector<CandidateRec> pool;
    std::size_t total = 0;
    for (const auto& recs : slots) total += recs.size();
    pool.reserve(total);
    for (auto& recs : slots)
      for (auto& rec : recs) pool.push_back(std::move(rec));
    local.candidates_scored += static_cast<std::int64_t>(pool.size());
    local.peak_pool_entries =
        std::max(local.peak_pool_entries, static_cast<std::int64_t>(pool.size()));

    std::vector<CandidateRec> pool_snapshot;
    if (params.verify) pool_snapshot = pool;

    // Top-beta selection. Ties fall back to the lexicographic order of the
    // flattened assignment sequence: distinct prefixes always differ within
    // the parent part, so the parent's cached rank decides, and candidates
    // sharing a parent are decided by their own slice.
    auto better = [&](const CandidateRec& a, const CandidateRec& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      const std::int32_t ra = beam[static_cast<std::size_t>(a.parent)]->lex_rank;
      const std::int32_t rb = beam[static_cast<std::size_t>(b.parent)]->lex_rank;
      if (ra != rb) return ra < rb;
      return a.assignment < b.assignment;
    };
    const std::size_t keep = std::min<std::size_t>(pool.size(),
                                                   static_cast<std::size_t>(params.beam_width));
    std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                     pool.end(), better);
    pool.resize(keep);
    std::sort(pool.begin(), pool.end(), better);

    std::vector<BeamNodePtr> next;
    next.reserve(pool.size());
    for (CandidateRec& rec : pool)
      next.push_back(make_node(beam[static_cast<std::size_t>(rec.parent)],
                               std::move(rec.assignment), rec.state_units, rec.gate_units,
                               &live));
    // Lexicographic ranks of the new prefixes: parent rank first, own slice
    // second.
    std::vector<std::int32_t> order(next.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      const BeamNode& na = *next[static_cast<std::size_t>(a)];
      const BeamNode& nb = *next[static_cast<std::size_t>(b)];
      if (na.parent->lex_rank != nb.parent->lex_rank)
        return na.parent->lex_rank < nb.parent->lex_rank;
      return na.assignment < nb.assignment;
    });
    if (params.verify) verify_step(beam, pool_snapshot, next, circuit, network, params, t);
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      const_cast<BeamNode*>(next[static_cast<std::size_t>(order[rank])].get())->lex_rank =
          static_cast<std::int32_t>(rank);

    beam = std::move(next);
    local.peak_live_nodes = std::max(local.peak_live_nodes, live.load());
  }

  const BeamNodePtr& best = beam.front();
  Schedule result = schedule_of(*best);
  result.total_cost = best->cost(params.weights);
  if (params.verify) {
    Schedule copy = result;
    const double recomputed = evaluate_total(copy, circuit, network, params.weights);
    if (recomputed != *result.total_cost)
      throw Error("verify: final cost mismatch");
  }
  if (stats != nullptr) {
    beam.clear();
    local.peak_live_nodes = std::max(local.peak_live_nodes, live.load());
    *stats = local;
  }
  return result;
}

}  // namespace dqcp

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/network.hpp"
#include "dqcp/rng.hpp"

namespace dqcp {

/// Tuning knobs of the time-aware search. Per beam entry and time step the
/// expansion generates 1 preservation candidate, two mitigation candidates
/// per split gate, num_swaps swap candidates and num_random fresh random
/// assignments.
struct SearchParams {
  std::int32_t beam_width = 1;
  std::int32_t num_swaps = 0;
  std::int32_t num_random = 0;
  CostWeights weights;
  std::uint64_t seed = 0;
  int threads = 1;     // 0 = all hardware threads
  bool verify = false; // cross-check incremental costs and pruning each step
};

/// Defaults scaled with the qubit count: beam width 8N, 4N swap candidates,
/// 2N random candidates, unit weights.
SearchParams default_search_params(std::int32_t num_qubits);

/// One partial schedule, stored as a backpointer chain so that extending a
/// prefix is O(1) and the beam shares common history.
struct BeamNode {
  std::shared_ptr<const BeamNode> parent;  // null for the first time step
  Assignment assignment;                   // slice this node contributes
  std::int64_t state_units = 0;            // cumulative unweighted state distance
  std::int64_t gate_units = 0;             // cumulative unweighted gate distance
  std::int32_t lex_rank = 0;  // rank of this prefix, lexicographic, within its beam
  std::atomic<std::int64_t>* live_counter = nullptr;

  ~BeamNode() {
    if (live_counter != nullptr) live_counter->fetch_sub(1, std::memory_order_relaxed);
  }

  double cost(const CostWeights& weights) const {
    return weights.state * static_cast<double>(state_units) +
           weights.gate * static_cast<double>(gate_units);
  }
};

using BeamNodePtr = std::shared_ptr<const BeamNode>;

/// Materializes the prefix schedule a node represents.
Schedule schedule_of(const BeamNode& node);

/// A candidate slice produced by one of the four expansion strategies.
/// `moved` lists the qubits whose QPU differs from the parent slice; it is
/// meaningful only when `fresh` is false (random candidates are scored by a
/// full scan instead).
struct StepCandidate {
  Assignment assignment;
  std::vector<std::int32_t> moved;
  bool fresh = false;
};

/// A valid random assignment: QPU slots (capped at N per QPU) are shuffled
/// and dealt to the qubits in index order.
Assignment random_assignment(Rng& rng, const QpuNetwork& network, std::int32_t num_qubits);

/// Expansion of one beam entry against the next layer: preservation,
/// mitigation of each split gate (both directions, capacity permitting),
/// num_swaps random label swaps between qubits on distinct QPUs, and
/// num_random fresh valid assignments. Deduplicated, first occurrence wins.
std::vector<StepCandidate> candidate_assignments(const Assignment& prev, const Layer& layer,
                                                 const QpuNetwork& network,
                                                 const SearchParams& params, Rng& rng);

/// The beam for the first time step: min(beam_width, #feasible) distinct
/// valid random assignments, each scored with the weighted gate term of the
/// first layer, ordered by (cost, assignment).
std::vector<BeamNodePtr> initialize_beam(const TemporalCircuit& circuit,
                                         const QpuNetwork& network, const SearchParams& params);

/// Keeps the beam_width lowest-cost entries. Ties are broken by the
/// lexicographic order of the flattened assignment sequence; entries
/// representing identical prefix schedules are deduplicated first.
std::vector<BeamNodePtr> prune_beam(const std::vector<BeamNodePtr>& pool,
                                    std::int32_t beam_width, const CostWeights& weights);

struct SearchStats {
  std::int64_t candidates_scored = 0;
  std::int64_t peak_live_nodes = 0;   // backpointer nodes alive at once
  std::int64_t peak_pool_entries = 0; // transient candidate records per step
};

/// Time-aware beam search over the whole circuit. Returns the lowest-cost
/// complete schedule in the final beam, with its total cost cached.
/// Deterministic for a fixed seed, independent of the thread count.
Schedule search(const TemporalCircuit& circuit, const QpuNetwork& network,
                const SearchParams& params, SearchStats* stats = nullptr);

}  // namespace dqcp

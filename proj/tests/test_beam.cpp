#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "dqcp/beam.hpp"
#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/errors.hpp"
#include "dqcp/network.hpp"
#include "dqcp/oracle.hpp"
#include "dqcp/rng.hpp"
#include "helpers.hpp"

using namespace dqcp;

namespace {

SearchParams small_params(std::int32_t beam_width, std::uint64_t seed) {
  SearchParams params;
  params.beam_width = beam_width;
  params.num_swaps = 8;
  params.num_random = 4;
  params.seed = seed;
  return params;
}

}  // namespace

TEST_CASE("default parameters scale with the qubit count") {
  const SearchParams params = default_search_params(8);
  CHECK(params.beam_width == 64);
  CHECK(params.num_swaps == 32);
  CHECK(params.num_random == 16);
  CHECK(params.weights.state == 1.0);
  CHECK(params.weights.gate == 1.0);
}

TEST_CASE("initial beam holds distinct valid assignments") {
  const TemporalCircuit circuit = testutil::example_circuit();
  const QpuNetwork network = testutil::two_qpus(4);
  SearchParams params = default_search_params(8);
  params.seed = 5;
  const std::vector<BeamNodePtr> beam = initialize_beam(circuit, network, params);
  CHECK(beam.size() == 64);
  std::set<Assignment> distinct;
  for (const BeamNodePtr& entry : beam) {
    CHECK(entry->parent == nullptr);
    CHECK(validate_capacity(entry->assignment, network));
    // Capacity-tight deal: exactly four qubits per QPU.
    CHECK(std::count(entry->assignment.begin(), entry->assignment.end(), 0) == 4);
    distinct.insert(entry->assignment);
    CHECK(entry->state_units == 0);
    // Scored with the first layer's gate term.
    std::int64_t units = 0;
    for (const auto& [a, b] : circuit.layers[0])
      units += network.dist(entry->assignment[static_cast<std::size_t>(a)],
                            entry->assignment[static_cast<std::size_t>(b)]);
    CHECK(entry->gate_units == units);
  }
  CHECK(distinct.size() == 64);
  // Ordered by cost.
  for (std::size_t i = 1; i < beam.size(); ++i)
    CHECK(beam[i - 1]->cost(params.weights) <= beam[i]->cost(params.weights));
}

TEST_CASE("tiny assignment spaces cap the beam") {
  const TemporalCircuit circuit =
      parse_circuit_json(R"({"num_qubits": 2, "depth": 1, "layers": [[]]})");
  const QpuNetwork network = testutil::two_qpus(1);
  SearchParams params = small_params(8, 3);
  const std::vector<BeamNodePtr> beam = initialize_beam(circuit, network, params);
  CHECK(beam.size() == 2);  // only two feasible assignments exist
  for (const BeamNodePtr& entry : beam) CHECK(entry->gate_units == 0);
}

TEST_CASE("single-qubit circuits search without swap partners") {
  const TemporalCircuit circuit =
      parse_circuit_json(R"({"num_qubits": 1, "depth": 3, "layers": [[], [], []]})");
  const QpuNetwork network = testutil::two_qpus(1);
  SearchParams params = small_params(2, 4);
  const Schedule schedule = search(circuit, network, params);
  CHECK(*schedule.total_cost == 0.0);
}

TEST_CASE("infeasible instances are refused") {
  const TemporalCircuit circuit =
      parse_circuit_json(R"({"num_qubits": 5, "depth": 1, "layers": [[]]})");
  const QpuNetwork network = testutil::two_qpus(2);
  SearchParams params = small_params(4, 1);
  CHECK_THROWS_AS((void)search(circuit, network, params), InfeasibleError);
}

TEST_CASE("candidate generation follows the four strategies") {
  const QpuNetwork network = testutil::two_qpus(4);
  SearchParams params;
  params.beam_width = 4;

  SUBCASE("preservation only when nothing else applies") {
    params.num_swaps = 0;
    params.num_random = 0;
    Rng rng(1);
    const Assignment prev{0, 1, 0, 1, 1, 0, 1, 0};
    const auto cands = candidate_assignments(prev, {{0, 2}}, network, params, rng);
    REQUIRE(cands.size() == 1);  // edge not split, no swaps, no randoms
    CHECK(cands[0].assignment == prev);
    CHECK(cands[0].moved.empty());
  }

  SUBCASE("mitigation moves both endpoints when capacity allows") {
    params.num_swaps = 0;
    params.num_random = 0;
    Rng rng(1);
    const QpuNetwork roomy = testutil::two_qpus(5);
    const Assignment prev{0, 1, 0, 1, 1, 0, 1, 0};
    const auto cands = candidate_assignments(prev, {{0, 1}}, roomy, params, rng);
    REQUIRE(cands.size() == 3);  // preservation + two mitigation moves
    CHECK(cands[1].assignment == Assignment{1, 1, 0, 1, 1, 0, 1, 0});
    CHECK(cands[1].moved == std::vector<std::int32_t>{0});
    CHECK(cands[2].assignment == Assignment{0, 0, 0, 1, 1, 0, 1, 0});
    CHECK(cands[2].moved == std::vector<std::int32_t>{1});
  }

  SUBCASE("capacity-tight mitigation is discarded") {
    params.num_swaps = 0;
    params.num_random = 0;
    Rng rng(1);
    const QpuNetwork tight = testutil::two_qpus(1);
    const Assignment prev{0, 1};
    const auto cands = candidate_assignments(prev, {{0, 1}}, tight, params, rng);
    REQUIRE(cands.size() == 1);  // both moves would overfill; preservation remains
    CHECK(cands[0].assignment == prev);
  }

  SUBCASE("swaps exchange labels across QPUs and deduplicate") {
    params.num_swaps = 10;
    params.num_random = 0;
    Rng rng(7);
    const QpuNetwork two = testutil::two_qpus(1);
    const Assignment prev{0, 1};
    const auto cands = candidate_assignments(prev, {}, two, params, rng);
    // The only possible swap is (q0, q1); ten draws collapse to one.
    REQUIRE(cands.size() == 2);
    CHECK(cands[1].assignment == Assignment{1, 0});
  }

  SUBCASE("the worked example's move pair is reachable as one swap") {
    params.num_swaps = 64;
    params.num_random = 0;
    Rng rng(2);
    const Assignment before{0, 1, 0, 1, 1, 0, 1, 0};  // slices 0..4
    const Assignment after{0, 1, 0, 0, 1, 0, 1, 1};   // slices 5..7: q3 and q7 swapped
    const auto cands = candidate_assignments(before, {}, network, params, rng);
    const bool found = std::any_of(cands.begin(), cands.end(), [&](const StepCandidate& c) {
      return c.assignment == after;
    });
    CHECK(found);
  }

  SUBCASE("diversification candidates are valid") {
    params.num_swaps = 0;
    params.num_random = 16;
    Rng rng(3);
    const Assignment prev{0, 1, 0, 1, 1, 0, 1, 0};
    const auto cands = candidate_assignments(prev, {}, network, params, rng);
    for (const auto& cand : cands) CHECK(validate_capacity(cand.assignment, network));
  }
}

TEST_CASE("pruning keeps the cheapest entries deterministically") {
  const CostWeights weights{1.0, 1.0};
  auto leaf = [](Assignment a, std::int64_t gate_units) {
    auto node = std::make_shared<BeamNode>();
    node->assignment = std::move(a);
    node->gate_units = gate_units;
    return BeamNodePtr(node);
  };

  const std::vector<BeamNodePtr> pool{leaf({0, 1}, 5), leaf({1, 0}, 2), leaf({0, 0}, 7)};
  const auto kept = prune_beam(pool, 2, weights);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0]->gate_units == 2);
  CHECK(kept[1]->gate_units == 5);

  // Identical schedules are deduplicated before selection.
  const std::vector<BeamNodePtr> dup{leaf({0, 1}, 4), leaf({0, 1}, 4), leaf({1, 0}, 4)};
  const auto deduped = prune_beam(dup, 3, weights);
  CHECK(deduped.size() == 2);

  // Pools smaller than the width are kept whole.
  CHECK(prune_beam(pool, 10, weights).size() == 3);

  // Cost ties break on the lexicographically smaller sequence.
  const auto tied = prune_beam({leaf({1, 0}, 3), leaf({0, 1}, 3)}, 1, weights);
  REQUIRE(tied.size() == 1);
  CHECK(tied[0]->assignment == Assignment{0, 1});
}

TEST_CASE("gate-free circuits keep a zero-cost constant schedule") {
  const TemporalCircuit circuit =
      parse_circuit_json(R"({"num_qubits": 4, "depth": 5, "layers": [[], [], [], [], []]})");
  const QpuNetwork network = testutil::two_qpus(2);
  SearchParams params = small_params(4, 11);
  params.verify = true;
  const Schedule schedule = search(circuit, network, params);
  CHECK(*schedule.total_cost == 0.0);
  for (const Assignment& slice : schedule.assignments)
    CHECK(slice == schedule.assignments[0]);
}

TEST_CASE("single-layer searches return the best initial assignment") {
  const TemporalCircuit circuit =
      parse_circuit_json(R"({"num_qubits": 4, "depth": 1, "layers": [[[0, 1], [2, 3]]]})");
  const QpuNetwork network = testutil::two_qpus(2);
  SearchParams params = small_params(16, 3);
  const Schedule schedule = search(circuit, network, params);
  CHECK(schedule.depth() == 1);
  // 16 >= C(4,2) = 6 feasible assignments, so the optimum is in the beam:
  // co-locating both pairs costs nothing.
  CHECK(*schedule.total_cost == 0.0);
}

TEST_CASE("matches the oracle on the worked example") {
  const TemporalCircuit circuit = testutil::example_circuit();
  const QpuNetwork network = testutil::two_qpus(4);
  SearchParams params;
  params.beam_width = 64;
  params.num_swaps = 32;
  params.num_random = 16;
  params.seed = 2024;
  params.verify = true;
  const Schedule schedule = search(circuit, network, params);
  const OracleResult oracle = exact_optimum(circuit, network, params.weights, 100);
  CHECK(oracle.optimum == 5.0);
  CHECK(*schedule.total_cost == oracle.optimum);
}

TEST_CASE("search results satisfy capacity at every step and cache their cost") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::int32_t>(2 + rng.bounded(9));
    const auto t = static_cast<std::int32_t>(1 + rng.bounded(6));
    const auto k = static_cast<std::int32_t>(2 + rng.bounded(3));
    const std::int32_t cap = (n + k - 1) / k + static_cast<std::int32_t>(rng.bounded(2));
    const QpuNetwork network = build_topology(
        TopologyKind::star, k, std::vector<std::int32_t>(static_cast<std::size_t>(k), cap));
    const TemporalCircuit circuit = generate_random_circuit(n, t, 0.5, rng.next());
    SearchParams params = small_params(8, rng.next());
    const Schedule schedule = search(circuit, network, params);
    CHECK(schedule.depth() == circuit.depth());
    for (const Assignment& slice : schedule.assignments)
      CHECK(validate_capacity(slice, network));
    Schedule copy = schedule;
    CHECK(evaluate_total(copy, circuit, network, params.weights) == *schedule.total_cost);
  }
}

TEST_CASE("verification mode accepts normal searches") {
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    const TemporalCircuit circuit = generate_random_circuit(6, 5, 0.5, rng.next());
    const QpuNetwork network = testutil::two_qpus(3);
    SearchParams params = small_params(6, rng.next());
    params.verify = true;  // throws on any incremental-cost or prune drift
    (void)search(circuit, network, params);
  }
}

TEST_CASE("preservation keeps the best constant schedule competitive") {
  Rng rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::int32_t>(4 + 2 * rng.bounded(3));
    const TemporalCircuit circuit = generate_random_circuit(n, 6, 0.5, rng.next());
    const QpuNetwork network = testutil::two_qpus(n / 2);
    SearchParams params = default_search_params(n);
    params.seed = rng.next();
    const Schedule schedule = search(circuit, network, params);

    // Cheapest constant schedule over the same initial beam.
    const std::vector<BeamNodePtr> beam = initialize_beam(circuit, network, params);
    double best_constant = 0;
    bool first = true;
    for (const BeamNodePtr& entry : beam) {
      Schedule constant;
      constant.assignments.assign(static_cast<std::size_t>(circuit.depth()),
                                  entry->assignment);
      const double cost = evaluate_total(constant, circuit, network, params.weights);
      if (first || cost < best_constant) best_constant = cost;
      first = false;
    }
    CHECK(*schedule.total_cost <= best_constant);
  }
}

TEST_CASE("identical runs are bit-identical and thread-count independent") {
  const TemporalCircuit circuit = generate_random_circuit(10, 12, 0.5, 321);
  const QpuNetwork network = testutil::two_qpus(5);
  SearchParams params = small_params(20, 999);
  const Schedule first = search(circuit, network, params);
  const Schedule second = search(circuit, network, params);
  CHECK(first == second);
  CHECK(schedule_to_json(first) == schedule_to_json(second));

  params.threads = 2;
  const Schedule threaded2 = search(circuit, network, params);
  params.threads = 8;
  const Schedule threaded8 = search(circuit, network, params);
  CHECK(schedule_to_json(threaded2) == schedule_to_json(first));
  CHECK(schedule_to_json(threaded8) == schedule_to_json(first));
}

TEST_CASE("widening the beam does not hurt on average") {
  const std::int32_t n = 8;
  const QpuNetwork network = testutil::two_qpus(4);
  double means[3] = {0, 0, 0};
  const std::int32_t widths[3] = {8, 16, 32};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const TemporalCircuit circuit = generate_random_circuit(n, 8, 0.5, 7000 + seed);
    for (int w = 0; w < 3; ++w) {
      SearchParams params = default_search_params(n);
      params.beam_width = widths[w];
      params.seed = seed;
      means[w] += *search(circuit, network, params).total_cost;
    }
  }
  CHECK(means[0] >= means[1]);
  CHECK(means[1] >= means[2]);
}

TEST_CASE("search statistics expose the working set") {
  const TemporalCircuit circuit = generate_random_circuit(8, 10, 0.5, 5);
  const QpuNetwork network = testutil::two_qpus(4);
  SearchParams params = small_params(8, 17);
  SearchStats stats;
  (void)search(circuit, network, params, &stats);
  CHECK(stats.candidates_scored > 0);
  CHECK(stats.peak_live_nodes > 0);
  CHECK(stats.peak_live_nodes <= static_cast<std::int64_t>(params.beam_width) * 10);
  CHECK(stats.peak_pool_entries > 0);
}

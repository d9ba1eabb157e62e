#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dqcp/baseline.hpp"
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

// Dumb second oracle: full enumeration over every sequence of feasible
// assignments. Only usable on micro instances.
double exhaustive_optimum(const TemporalCircuit& circuit, const QpuNetwork& network,
                          const CostWeights& weights) {
  const std::vector<Assignment> states =
      enumerate_feasible_assignments(network, circuit.num_qubits, 1000);
  const auto depth = static_cast<std::size_t>(circuit.depth());
  REQUIRE(std::pow(static_cast<double>(states.size()), static_cast<double>(depth)) < 2e6);
  std::vector<std::size_t> pick(depth, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    Schedule schedule;
    for (std::size_t t = 0; t < depth; ++t) schedule.assignments.push_back(states[pick[t]]);
    best = std::min(best, evaluate_total(schedule, circuit, network, weights));
    std::size_t t = 0;
    while (t < depth && ++pick[t] == states.size()) pick[t++] = 0;
    if (t == depth) break;
  }
  return best;
}

}  // namespace

TEST_CASE("enumeration is lexicographic and respects capacities") {
  const QpuNetwork network = testutil::two_qpus(2);
  const std::vector<Assignment> states = enumerate_feasible_assignments(network, 3, 100);
  CHECK(states.size() == 6);
  CHECK(std::is_sorted(states.begin(), states.end()));
  for (const Assignment& a : states) CHECK(validate_capacity(a, network));
  CHECK(states.front() == Assignment{0, 0, 1});
  CHECK(states.back() == Assignment{1, 1, 0});

  CHECK_THROWS_AS(enumerate_feasible_assignments(network, 3, 5), LimitError);
  CHECK_THROWS_AS(enumerate_feasible_assignments(network, 5, 100), InfeasibleError);
}

TEST_CASE("worked example has optimum 5") {
  const TemporalCircuit circuit = testutil::example_circuit();
  const QpuNetwork network = testutil::two_qpus(4);
  const OracleResult result = exact_optimum(circuit, network, {1.0, 1.0}, 100);
  CHECK(result.optimum == 5.0);  // the shipped schedule attains it
  CHECK(result.optimum <= 5.0);
  Schedule copy = result.schedule;
  CHECK(evaluate_total(copy, circuit, network, {1.0, 1.0}) == result.optimum);
  for (const Assignment& slice : result.schedule.assignments)
    CHECK(validate_capacity(slice, network));
}

TEST_CASE("degenerate instances") {
  const QpuNetwork network = testutil::two_qpus(2);
  const TemporalCircuit empty =
      parse_circuit_json(R"({"num_qubits": 3, "depth": 4, "layers": [[], [], [], []]})");
  CHECK(exact_optimum(empty, network, {1.0, 1.0}, 100).optimum == 0.0);

  const TemporalCircuit single =
      parse_circuit_json(R"({"num_qubits": 3, "depth": 1, "layers": [[[0, 2]]]})");
  CHECK(exact_optimum(single, network, {1.0, 1.0}, 100).optimum == 0.0);
}

TEST_CASE("matches exhaustive enumeration on micro instances") {
  Rng rng(51);
  int cases = 0;
  while (cases < 50) {
    const auto n = static_cast<std::int32_t>(2 + rng.bounded(3));  // 2..4
    const auto t = static_cast<std::int32_t>(1 + rng.bounded(3));  // 1..3
    const QpuNetwork network = testutil::two_qpus((n + 1) / 2);
    const TemporalCircuit circuit = generate_random_circuit(n, t, 0.5, rng.next());
    const CostWeights weights{1.0, 1.0};
    const OracleResult result = exact_optimum(circuit, network, weights, 1000);
    CHECK(result.optimum == exhaustive_optimum(circuit, network, weights));
    ++cases;
  }
}

TEST_CASE("oracle lower-bounds beam search and the static baseline") {
  Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::int32_t>(4 + 2 * rng.bounded(3));  // 4, 6, 8
    const auto t = static_cast<std::int32_t>(2 + rng.bounded(7));      // 2..8
    const QpuNetwork network = testutil::two_qpus(n / 2);
    const TemporalCircuit circuit = generate_random_circuit(n, t, 0.5, rng.next());
    const CostWeights weights{1.0, 1.0};
    const OracleResult oracle = exact_optimum(circuit, network, weights, 20000);

    SearchParams params = default_search_params(n);
    params.seed = rng.next();
    Schedule found = search(circuit, network, params);
    CHECK(*found.total_cost >= oracle.optimum);

    Schedule lifted = lift_to_schedule(static_partition(aggregate(circuit), network, rng.next()),
                                       circuit.depth());
    CHECK(evaluate_total(lifted, circuit, network, weights) >= oracle.optimum);
  }
}

TEST_CASE("oracle runs are deterministic and thread-count independent") {
  const TemporalCircuit circuit = generate_random_circuit(6, 6, 0.5, 99);
  const QpuNetwork network = testutil::two_qpus(3);
  const OracleResult a = exact_optimum(circuit, network, {1.0, 1.0}, 20000);
  const OracleResult b = exact_optimum(circuit, network, {1.0, 1.0}, 20000);
  CHECK(a.optimum == b.optimum);
  CHECK(a.schedule == b.schedule);
  const OracleResult threaded = exact_optimum(circuit, network, {1.0, 1.0}, 20000, 4);
  CHECK(threaded.optimum == a.optimum);
  CHECK(threaded.schedule == a.schedule);
}

TEST_CASE("weighted objectives change the optimum") {
  // One gate per layer between alternating pairs: staying put costs gate
  // teleportations, moving costs state teleportations.
  const TemporalCircuit circuit = parse_circuit_json(
      R"({"num_qubits": 4, "depth": 4, "layers": [[[0, 1]], [[1, 2]], [[0, 1]], [[1, 2]]]})");
  const QpuNetwork network = testutil::two_qpus(2);
  const double cheap_state = exact_optimum(circuit, network, {0.1, 1.0}, 1000).optimum;
  const double cheap_gate = exact_optimum(circuit, network, {1.0, 0.1}, 1000).optimum;
  CHECK(cheap_state < exact_optimum(circuit, network, {1.0, 1.0}, 1000).optimum + 1e-12);
  CHECK(cheap_gate <= 0.1 * 4.0 + 1e-12);  // paying at most every gate split
}

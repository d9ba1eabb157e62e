#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dqcp/cost.hpp"
#include "dqcp/network.hpp"

namespace dqcp {

/// Parses a "kind:k" topology shorthand like "complete:4" or "path:2".
std::pair<TopologyKind, std::int32_t> parse_topology_shorthand(std::string_view spec);

/// A sweep over qubit counts, depths and topologies. Each cell draws
/// `samples` random circuits; the static baseline partitions each once and
/// beam search runs `runs` times per circuit. Search parameters scale with
/// N through the factors below; QPU capacity is ceil(N/k), uniform.
struct ExperimentGrid {
  std::uint64_t master_seed = 1;
  int samples = 1;
  int runs = 1;
  std::vector<std::int32_t> qubit_counts;
  std::vector<std::int32_t> depths;
  std::vector<std::string> topologies;  // "kind:k" shorthands
  double gate_probability = 0.5;
  CostWeights weights;
  int beam_width_factor = 8;
  int swaps_factor = 4;
  int randoms_factor = 2;
  bool include_timings = false;  // off by default so CSV bytes are reproducible
};

ExperimentGrid parse_grid_json(std::string_view text);

struct BenchRow {
  std::int32_t num_qubits = 0;
  std::int32_t depth = 0;
  std::string topology;
  int sample = 0;
  int run = 0;
  std::string method;  // "baseline", "beam", or "error:<reason>"
  std::int64_t state_units = 0;
  std::int64_t gate_units = 0;
  double total = 0.0;
  std::int64_t runtime_ms = 0;
  std::uint64_t seed = 0;
};

/// Executes every cell of the grid. (cell, sample) tasks run on a worker
/// pool; seeds derive from the master seed and the task coordinates, so the
/// table is independent of scheduling. A failing task contributes
/// error-tagged rows and the sweep continues.
std::vector<BenchRow> run_grid(const ExperimentGrid& grid, int threads);

/// schema=1 CSV: N,T,topology,sample,run,method,state_cost,gate_cost,
/// total_cost,runtime_ms,seed.
std::string rows_to_csv(const std::vector<BenchRow>& rows);

/// Per-cell mean and standard error of both methods plus the mean
/// percentage improvement of beam search over the baseline.
std::string summarize(const std::vector<BenchRow>& rows);

}  // namespace dqcp

#include "dqcp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "dqcp/baseline.hpp"
#include "dqcp/beam.hpp"
#include "dqcp/circuit.hpp"
#include "dqcp/errors.hpp"
#include "dqcp/parallel.hpp"
#include "dqcp/rng.hpp"
#include "json.hpp"

namespace dqcp {

std::pair<TopologyKind, std::int32_t> parse_topology_shorthand(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("topology shorthand must be kind:k, got \"" + std::string(spec) + "\"");
  const TopologyKind kind = topology_kind_from_string(spec.substr(0, colon));
  if (kind == TopologyKind::custom)
    throw ParseError("custom topologies need an explicit edge list, not a shorthand");
  std::int32_t k = 0;
  const std::string count(spec.substr(colon + 1));
  try {
    std::size_t used = 0;
    k = std::stoi(count, &used);
    if (used != count.size()) throw std::invalid_argument(count);
  } catch (const std::exception&) {
    throw ParseError("invalid QPU count in topology shorthand \"" + std::string(spec) + "\"");
  }
  if (k < 2) throw ParseError("topology shorthand needs at least 2 QPUs");
  return {kind, k};
}

ExperimentGrid parse_grid_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("grid file: ") + e.what());
  }
  try {
    ExperimentGrid grid;
    grid.master_seed = doc.value("master_seed", std::uint64_t{1});
    grid.samples = doc.value("samples", 1);
    grid.runs = doc.value("runs", 1);
    grid.qubit_counts = doc.at("qubit_counts").get<std::vector<std::int32_t>>();
    grid.depths = doc.at("depths").get<std::vector<std::int32_t>>();
    grid.topologies = doc.at("topologies").get<std::vector<std::string>>();
    grid.gate_probability = doc.value("gate_probability", 0.5);
    grid.weights.state = doc.value("w_state", 1.0);
    grid.weights.gate = doc.value("w_gate", 1.0);
    grid.beam_width_factor = doc.value("beam_width_factor", 8);
    grid.swaps_factor = doc.value("swaps_factor", 4);
    grid.randoms_factor = doc.value("randoms_factor", 2);
    grid.include_timings = doc.value("include_timings", false);
    if (grid.samples < 1 || grid.runs < 1)
      throw ParseError("grid file: samples and runs must be >= 1");
    if (grid.qubit_counts.empty() || grid.depths.empty() || grid.topologies.empty())
      throw ParseError("grid file: qubit_counts, depths and topologies must be non-empty");
    for (const std::string& topology : grid.topologies) parse_topology_shorthand(topology);
    validate_weights(grid.weights);
    return grid;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("grid file: ") + e.what());
  }
}

namespace {

struct Cell {
  std::int32_t num_qubits;
  std::int32_t depth;
  std::string topology;
  std::size_t n_index;
  std::size_t t_index;
};

QpuNetwork cell_network(const Cell& cell) {
  const auto [kind, k] = parse_topology_shorthand(cell.topology);
  const std::int32_t capacity = (cell.num_qubits + k - 1) / k;
  return build_topology(kind, k, std::vector<std::int32_t>(static_cast<std::size_t>(k), capacity));
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<BenchRow> run_grid(const ExperimentGrid& grid, int threads) {
  std::vector<Cell> cells;
  for (std::size_t ni = 0; ni < grid.qubit_counts.size(); ++ni)
    for (std::size_t ti = 0; ti < grid.depths.size(); ++ti)
      for (const std::string& topology : grid.topologies)
        cells.push_back({grid.qubit_counts[ni], grid.depths[ti], topology, ni, ti});

  const int rows_per_task = 1 + grid.runs;
  std::vector<BenchRow> rows(cells.size() * static_cast<std::size_t>(grid.samples) *
                             static_cast<std::size_t>(rows_per_task));

  const int num_tasks = static_cast<int>(cells.size()) * grid.samples;
  parallel_for(num_tasks, threads, [&](int task) {
    const Cell& cell = cells[static_cast<std::size_t>(task) / grid.samples];
    const int sample = task % grid.samples;
    BenchRow* out = rows.data() + static_cast<std::size_t>(task) * rows_per_task;
    for (int r = 0; r < rows_per_task; ++r) {
      out[r].num_qubits = cell.num_qubits;
      out[r].depth = cell.depth;
      out[r].topology = cell.topology;
      out[r].sample = sample;
    }
    // Topology is deliberately excluded from these seeds: the same (N, T,
    // sample) coordinates reuse the same circuit and partitioning seed, so
    // topology sweeps compare methods on identical instances.
    const std::uint64_t instance_key =
        derive_seed(grid.master_seed, 11, cell.n_index, cell.t_index);
    const std::uint64_t circuit_seed =
        derive_seed(instance_key, 101, static_cast<std::uint64_t>(sample));
    const std::uint64_t baseline_seed =
        derive_seed(instance_key, 202, static_cast<std::uint64_t>(sample));
    try {
      const QpuNetwork network = cell_network(cell);
      const TemporalCircuit circuit = generate_random_circuit(
          cell.num_qubits, cell.depth, grid.gate_probability, circuit_seed);

      auto start = std::chrono::steady_clock::now();
      const StaticPartition partition = static_partition(aggregate(circuit), network, baseline_seed);
      Schedule lifted = lift_to_schedule(partition, cell.depth);
      BenchRow& base = out[0];
      base.run = 0;
      base.method = "baseline";
      base.state_units = state_cost(lifted, network);
      base.gate_units = gate_cost(lifted, circuit, network);
      base.total = grid.weights.state * static_cast<double>(base.state_units) +
                   grid.weights.gate * static_cast<double>(base.gate_units);
      base.runtime_ms = grid.include_timings ? elapsed_ms(start) : 0;
      base.seed = baseline_seed;

      for (int run = 0; run < grid.runs; ++run) {
        SearchParams params;
        params.beam_width = grid.beam_width_factor * cell.num_qubits;
        params.num_swaps = grid.swaps_factor * cell.num_qubits;
        params.num_random = grid.randoms_factor * cell.num_qubits;
        params.weights = grid.weights;
        params.seed = derive_seed(instance_key, 303,
                                  static_cast<std::uint64_t>(sample),
                                  static_cast<std::uint64_t>(run));
        params.threads = 1;  // parallelism lives at the task level
        start = std::chrono::steady_clock::now();
        Schedule found = search(circuit, network, params);
        BenchRow& row = out[1 + run];
        row.run = run;
        row.method = "beam";
        row.state_units = state_cost(found, network);
        row.gate_units = gate_cost(found, circuit, network);
        row.total = grid.weights.state * static_cast<double>(row.state_units) +
                    grid.weights.gate * static_cast<double>(row.gate_units);
        row.runtime_ms = grid.include_timings ? elapsed_ms(start) : 0;
        row.seed = params.seed;
      }
    } catch (const std::exception& e) {
      for (int r = 0; r < rows_per_task; ++r) {
        out[r].run = r == 0 ? 0 : r - 1;
        out[r].method = std::string("error:") + e.what();
        out[r].state_units = 0;
        out[r].gate_units = 0;
        out[r].total = 0.0;
        out[r].runtime_ms = 0;
        out[r].seed = 0;
      }
    }
  });
  return rows;
}

namespace {

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 1e15) {
    std::ostringstream out;
    out << static_cast<long long>(value);
    return out.str();
  }
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string escaped = "\"";
  for (char c : field) {
    if (c == '"') escaped += '"';
    escaped += c;
  }
  escaped += '"';
  return escaped;
}

struct CellStats {
  std::vector<double> baseline;       // per-sample baseline totals
  std::vector<double> beam_by_sample; // per-sample beam means over runs
  std::map<int, std::vector<double>> beam_runs;
  int errors = 0;
};

double mean_of(const std::vector<double>& values) {
  double sum = 0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double standard_error(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = mean_of(values);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return sd / std::sqrt(static_cast<double>(n));
}

}  // namespace

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::string csv;
  csv += "# schema=1\n";
  csv += "# improvement aggregation: beam averaged over runs per sample, then over samples\n";
  csv += "N,T,topology,sample,run,method,state_cost,gate_cost,total_cost,runtime_ms,seed\n";
  for (const BenchRow& row : rows) {
    csv += std::to_string(row.num_qubits) + ',' + std::to_string(row.depth) + ',' +
           csv_escape(row.topology) + ',' + std::to_string(row.sample) + ',' +
           std::to_string(row.run) + ',' + csv_escape(row.method) + ',' +
           std::to_string(row.state_units) + ',' + std::to_string(row.gate_units) + ',' +
           format_number(row.total) + ',' + std::to_string(row.runtime_ms) + ',' +
           std::to_string(row.seed) + '\n';
  }
  return csv;
}

std::string summarize(const std::vector<BenchRow>& rows) {
  if (rows.empty()) throw Error("summarize: empty result table");
  std::map<std::tuple<std::int32_t, std::int32_t, std::string>, CellStats> cells;
  for (const BenchRow& row : rows) {
    CellStats& cell = cells[{row.num_qubits, row.depth, row.topology}];
    if (row.method == "baseline")
      cell.baseline.push_back(row.total);
    else if (row.method == "beam")
      cell.beam_runs[row.sample].push_back(row.total);
    else
      ++cell.errors;
  }
  std::ostringstream out;
  for (auto& [key, cell] : cells) {
    const auto& [n, t, topology] = key;
    for (auto& [sample, runs] : cell.beam_runs) cell.beam_by_sample.push_back(mean_of(runs));
    std::vector<double> improvements;
    const std::size_t paired = std::min(cell.baseline.size(), cell.beam_by_sample.size());
    for (std::size_t s = 0; s < paired; ++s) {
      if (cell.baseline[s] > 0.0)
        improvements.push_back(100.0 * (cell.baseline[s] - cell.beam_by_sample[s]) /
                               cell.baseline[s]);
      else
        improvements.push_back(0.0);
    }
    out << "N=" << n << " T=" << t << " topology=" << topology
        << " samples=" << cell.baseline.size() << ": baseline "
        << format_number(mean_of(cell.baseline)) << " +/- "
        << format_number(standard_error(cell.baseline)) << ", beam "
        << format_number(mean_of(cell.beam_by_sample)) << " +/- "
        << format_number(standard_error(cell.beam_by_sample)) << ", improvement "
        << format_number(mean_of(improvements)) << "%";
    if (cell.errors > 0) out << " [" << cell.errors << " error rows]";
    out << "\n";
  }
  return out.str();
}

}  // namespace dqcp

// Command-line front end for the dqcp shared library. Talks to the core
// exclusively through the C API in dqcp.h; file handling, flag parsing and
// output formatting live here.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqcp.h"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

int exit_code_for(dqcp_status status) {
  switch (status) {
    case DQCP_OK: return 0;
    case DQCP_ERROR_INVALID_ARGUMENT: return kExitUsage;
    case DQCP_ERROR_PARSE: return kExitIo;
    case DQCP_ERROR_INFEASIBLE: return kExitInfeasible;
    case DQCP_ERROR_LIMIT: return kExitInfeasible;
    case DQCP_ERROR_INTERNAL: return kExitIo;
  }
  return kExitIo;
}

[[noreturn]] void die(dqcp_status status) {
  std::fprintf(stderr, "error: %s\n", dqcp_last_error());
  std::exit(exit_code_for(status));
}

void check(dqcp_status status) {
  if (status != DQCP_OK) die(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    std::exit(kExitIo);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    std::exit(kExitIo);
  }
}

std::string take_string(char* owned) {
  std::string value(owned);
  dqcp_string_free(owned);
  return value;
}

std::string fmt_num(double value) {
  if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 1e15) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%lld", static_cast<long long>(value));
    return buffer;
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

// RAII wrappers around the C handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (ptr) Free(ptr);
  }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using CircuitHandle = Handle<dqcp_circuit, dqcp_circuit_free>;
using NetworkHandle = Handle<dqcp_network, dqcp_network_free>;
using ScheduleHandle = Handle<dqcp_schedule, dqcp_schedule_free>;
using PartitionHandle = Handle<dqcp_partition, dqcp_partition_free>;

std::uint64_t entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

// Shared --seed handling: absent an explicit seed, draw one and print it so
// the run can be reproduced.
struct SeedOption {
  std::optional<std::uint64_t> value;
  bool printed = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [this](std::uint64_t v) { value = v; }, "RNG seed (default: from entropy)");
  }
  std::uint64_t resolve(bool quiet) {
    if (!value) {
      value = entropy_seed();
      if (!quiet) {
        std::printf("seed=%" PRIu64 "\n", *value);
        printed = true;
      }
    }
    return *value;
  }
};

struct CircuitOptions {
  std::string path;
  std::string random_spec;  // N,T,p[,seed]

  void add_to(CLI::App* cmd, bool required = true) {
    auto* file = cmd->add_option("--circuit", path, "circuit JSON file");
    auto* random = cmd->add_option("--random", random_spec,
                                   "random circuit spec N,T,p[,seed] (seed from entropy if omitted)");
    file->excludes(random);
    if (required) {
      // Exactly one of the two.
      cmd->callback([this, cmd] {
        if (path.empty() && random_spec.empty())
          throw CLI::RequiredError("--circuit or --random");
      });
    }
  }

  dqcp_circuit* load(bool quiet_seed) const {
    dqcp_circuit* circuit = nullptr;
    if (!path.empty()) {
      const std::string text = read_file(path);
      check(dqcp_circuit_parse_json(text.c_str(), &circuit));
      return circuit;
    }
    std::int32_t n = 0, t = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    char trailing = 0;
    const int fields = std::sscanf(random_spec.c_str(), "%d,%d,%lf,%" SCNu64 "%c", &n, &t, &p,
                                   &seed, &trailing);
    if (fields == 3) {
      seed = entropy_seed();
      if (!quiet_seed) std::printf("circuit_seed=%" PRIu64 "\n", seed);
    } else if (fields != 4) {
      std::fprintf(stderr, "error: --random expects N,T,p[,seed]\n");
      std::exit(kExitUsage);
    }
    check(dqcp_circuit_random(n, t, p, seed, &circuit));
    return circuit;
  }
};

struct TopologyOptions {
  std::string spec;  // kind:k shorthand or a JSON file path
  std::int32_t capacity = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--topology", spec,
                    "QPU topology: complete:k, cycle:k, star:k, path:k, or a JSON file")
        ->required();
    cmd->add_option("--capacity", capacity, "uniform QPU capacity (with shorthand topologies)");
  }

  dqcp_network* load() const {
    const std::size_t colon = spec.find(':');
    if (colon != std::string::npos) {
      const std::string kind = spec.substr(0, colon);
      int k = 0;
      try {
        k = std::stoi(spec.substr(colon + 1));
      } catch (const std::exception&) {
        std::fprintf(stderr, "error: bad QPU count in --topology %s\n", spec.c_str());
        std::exit(kExitUsage);
      }
      if (capacity <= 0) {
        std::fprintf(stderr, "error: shorthand topologies need --capacity\n");
        std::exit(kExitUsage);
      }
      std::vector<std::int32_t> caps(static_cast<std::size_t>(k > 0 ? k : 0), capacity);
      dqcp_network* network = nullptr;
      check(dqcp_network_build(kind.c_str(), k, caps.data(), &network));
      return network;
    }
    const std::string text = read_file(spec);
    dqcp_network* network = nullptr;
    check(dqcp_network_parse_json(text.c_str(), &network));
    return network;
  }
};

std::string cost_line(const dqcp_cost_report& report) {
  return "state=" + fmt_num(report.state_cost) + " gate=" + fmt_num(report.gate_cost) +
         " total=" + fmt_num(report.total_cost);
}

nlohmann::json cost_json(const dqcp_cost_report& report) {
  return {{"state_cost", report.state_cost},
          {"gate_cost", report.gate_cost},
          {"total_cost", report.total_cost}};
}

int run_gen(const CircuitOptions& circuit_opts, const std::string& out_path, bool as_json) {
  CircuitHandle circuit;
  circuit.ptr = circuit_opts.load(false);
  char* text = nullptr;
  check(dqcp_circuit_to_json(circuit.get(), &text));
  const std::string serialized = take_string(text);
  if (!out_path.empty())
    write_file(out_path, serialized + "\n");
  else if (!as_json)
    std::printf("%s\n", serialized.c_str());
  if (as_json) {
    nlohmann::json info{{"num_qubits", dqcp_circuit_num_qubits(circuit.get())},
                        {"depth", dqcp_circuit_depth(circuit.get())},
                        {"two_qubit_gates", dqcp_circuit_num_gates(circuit.get())}};
    if (!out_path.empty()) info["out"] = out_path;
    std::printf("%s\n", info.dump().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dqcp: time-aware partitioning of quantum circuits onto QPU networks"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a random circuit file");
  CircuitOptions gen_circuit;
  gen->add_option("--random", gen_circuit.random_spec, "random circuit spec N,T,p[,seed]")
      ->required();
  std::string gen_out;
  bool gen_json = false;
  gen->add_option("--out", gen_out, "output circuit file (stdout if omitted)");
  gen->add_flag("--json", gen_json, "machine-readable output");

  // ---- partition ----
  auto* partition = app.add_subcommand("partition", "beam-search a qubit assignment schedule");
  CircuitOptions part_circuit;
  part_circuit.add_to(partition);
  TopologyOptions part_topology;
  part_topology.add_to(partition);
  SeedOption part_seed;
  part_seed.add_to(partition);
  std::int32_t beam_width = 0, num_swaps = -1, num_random = -1;
  double part_wstate = 1.0, part_wgate = 1.0;
  int part_threads = 0;
  std::string part_out = "schedule.json";
  bool part_emit_cost = false, part_json = false;
  partition->add_option("--beam-width", beam_width, "beam width (default 8N)");
  partition->add_option("--swaps", num_swaps, "swap candidates per entry (default 4N)");
  partition->add_option("--randoms", num_random, "random candidates per entry (default 2N)");
  partition->add_option("--w-state", part_wstate, "state teleportation weight")->capture_default_str();
  partition->add_option("--w-gate", part_wgate, "gate teleportation weight")->capture_default_str();
  partition->add_option("--threads", part_threads, "worker threads (0 = all cores)");
  partition->add_option("--out", part_out, "schedule output file")->capture_default_str();
  partition->add_flag("--emit-cost", part_emit_cost, "print state/gate/total cost components");
  partition->add_flag("--json", part_json, "machine-readable output");

  // ---- baseline ----
  auto* baseline = app.add_subcommand("baseline",
                                      "static graph partition lifted to a constant schedule");
  CircuitOptions base_circuit;
  base_circuit.add_to(baseline);
  TopologyOptions base_topology;
  base_topology.add_to(baseline);
  SeedOption base_seed;
  base_seed.add_to(baseline);
  double base_wstate = 1.0, base_wgate = 1.0;
  int base_threads = 0;
  std::string base_out = "schedule.json", base_import, base_partition_out;
  bool base_emit_cost = false, base_json = false;
  baseline->add_option("--w-state", base_wstate, "state teleportation weight")->capture_default_str();
  baseline->add_option("--w-gate", base_wgate, "gate teleportation weight")->capture_default_str();
  baseline->add_option("--threads", base_threads, "worker threads (0 = all cores)");
  baseline->add_option("--out", base_out, "schedule output file")->capture_default_str();
  baseline->add_option("--import", base_import,
                       "use an externally computed partition file instead of partitioning");
  baseline->add_option("--partition-out", base_partition_out, "also write the partition file");
  baseline->add_flag("--emit-cost", base_emit_cost, "print state/gate/total cost components");
  baseline->add_flag("--json", base_json, "machine-readable output");

  // ---- cost ----
  auto* cost = app.add_subcommand("cost", "evaluate a schedule against a circuit");
  CircuitOptions cost_circuit;
  cost_circuit.add_to(cost);
  TopologyOptions cost_topology;
  cost_topology.add_to(cost);
  std::string cost_schedule_path;
  double cost_wstate = 1.0, cost_wgate = 1.0;
  bool cost_json_flag = false;
  cost->add_option("--schedule", cost_schedule_path, "schedule JSON file")->required();
  cost->add_option("--w-state", cost_wstate, "state teleportation weight")->capture_default_str();
  cost->add_option("--w-gate", cost_wgate, "gate teleportation weight")->capture_default_str();
  cost->add_flag("--json", cost_json_flag, "machine-readable output");

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "check a schedule against QPU capacities");
  TopologyOptions val_topology;
  val_topology.add_to(validate);
  std::string val_schedule_path;
  bool val_json = false;
  validate->add_option("--schedule", val_schedule_path, "schedule JSON file")->required();
  validate->add_flag("--json", val_json, "machine-readable output");

  // ---- oracle ----
  auto* oracle = app.add_subcommand("oracle", "exact optimum for small instances");
  CircuitOptions oracle_circuit;
  oracle_circuit.add_to(oracle);
  TopologyOptions oracle_topology;
  oracle_topology.add_to(oracle);
  double oracle_wstate = 1.0, oracle_wgate = 1.0;
  std::int64_t state_limit = 20000;
  int oracle_threads = 0;
  std::string oracle_out = "oracle_schedule.json";
  bool oracle_json = false;
  oracle->add_option("--w-state", oracle_wstate, "state teleportation weight")->capture_default_str();
  oracle->add_option("--w-gate", oracle_wgate, "gate teleportation weight")->capture_default_str();
  oracle->add_option("--state-limit", state_limit, "max feasible assignments")->capture_default_str();
  oracle->add_option("--threads", oracle_threads, "worker threads (0 = all cores)");
  oracle->add_option("--out", oracle_out, "schedule output file")->capture_default_str();
  oracle->add_flag("--json", oracle_json, "machine-readable output");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "run an experiment grid and emit CSV");
  std::string grid_path, bench_out = "results.csv";
  int bench_threads = 0;
  bool bench_timings = false;
  bench->add_option("--grid", grid_path, "grid JSON file")->required();
  bench->add_option("--out", bench_out, "CSV output file")->capture_default_str();
  bench->add_option("--threads", bench_threads, "worker threads (0 = all cores)");
  bench->add_flag("--timings", bench_timings, "record wall-clock runtimes in the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) return run_gen(gen_circuit, gen_out, gen_json);

  if (partition->parsed()) {
    CircuitHandle circuit;
    circuit.ptr = part_circuit.load(part_json);
    NetworkHandle network;
    network.ptr = part_topology.load();
    dqcp_search_params params;
    check(dqcp_search_params_init(dqcp_circuit_num_qubits(circuit.get()), &params));
    if (beam_width > 0) params.beam_width = beam_width;
    if (num_swaps >= 0) params.num_swaps = num_swaps;
    if (num_random >= 0) params.num_random = num_random;
    params.w_state = part_wstate;
    params.w_gate = part_wgate;
    params.seed = part_seed.resolve(part_json);
    params.threads = part_threads;
    ScheduleHandle schedule;
    dqcp_cost_report report{};
    check(dqcp_beam_search(circuit.get(), network.get(), &params, schedule.out(), &report));
    char* text = nullptr;
    check(dqcp_schedule_to_json(schedule.get(), &text));
    write_file(part_out, take_string(text) + "\n");
    if (part_json) {
      nlohmann::json info = cost_json(report);
      info["seed"] = params.seed;
      info["out"] = part_out;
      std::printf("%s\n", info.dump().c_str());
    } else {
      std::printf("%s\n", cost_line(report).c_str());
      (void)part_emit_cost;  // the cost line is always printed
    }
    return 0;
  }

  if (baseline->parsed()) {
    CircuitHandle circuit;
    circuit.ptr = base_circuit.load(base_json);
    NetworkHandle network;
    network.ptr = base_topology.load();
    PartitionHandle part;
    if (!base_import.empty()) {
      const std::string text = read_file(base_import);
      check(dqcp_partition_parse(text.c_str(), circuit.get(), network.get(), part.out()));
    } else {
      check(dqcp_static_partition(circuit.get(), network.get(), base_seed.resolve(base_json),
                                  base_threads, part.out()));
    }
    ScheduleHandle schedule;
    check(dqcp_partition_lift(part.get(), dqcp_circuit_depth(circuit.get()), schedule.out()));
    dqcp_cost_report report{};
    check(dqcp_evaluate(schedule.get(), circuit.get(), network.get(), base_wstate, base_wgate,
                        &report));
    char* text = nullptr;
    check(dqcp_schedule_to_json(schedule.get(), &text));
    write_file(base_out, take_string(text) + "\n");
    if (!base_partition_out.empty()) {
      char* ptext = nullptr;
      check(dqcp_partition_to_text(part.get(), &ptext));
      write_file(base_partition_out, take_string(ptext));
    }
    if (base_json) {
      nlohmann::json info = cost_json(report);
      info["cut_weight"] = dqcp_partition_cut_weight(part.get());
      info["out"] = base_out;
      std::printf("%s\n", info.dump().c_str());
    } else {
      std::printf("%s cut=%lld\n", cost_line(report).c_str(),
                  static_cast<long long>(dqcp_partition_cut_weight(part.get())));
      (void)base_emit_cost;
    }
    return 0;
  }

  if (cost->parsed()) {
    CircuitHandle circuit;
    circuit.ptr = cost_circuit.load(cost_json_flag);
    NetworkHandle network;
    network.ptr = cost_topology.load();
    ScheduleHandle schedule;
    const std::string text = read_file(cost_schedule_path);
    check(dqcp_schedule_parse_json(text.c_str(), schedule.out()));
    dqcp_cost_report report{};
    check(dqcp_evaluate(schedule.get(), circuit.get(), network.get(), cost_wstate, cost_wgate,
                        &report));
    const bool valid =
        dqcp_schedule_validate(schedule.get(), network.get(), nullptr, nullptr) == DQCP_OK;
    if (cost_json_flag) {
      nlohmann::json info = cost_json(report);
      info["valid"] = valid;
      std::printf("%s\n", info.dump().c_str());
    } else {
      std::printf("%s\n", cost_line(report).c_str());
      std::printf("valid=%s\n", valid ? "true" : "false");
    }
    return 0;
  }

  if (validate->parsed()) {
    NetworkHandle network;
    network.ptr = val_topology.load();
    ScheduleHandle schedule;
    const std::string text = read_file(val_schedule_path);
    check(dqcp_schedule_parse_json(text.c_str(), schedule.out()));
    std::int32_t step = -1, qpu = -1;
    const dqcp_status status =
        dqcp_schedule_validate(schedule.get(), network.get(), &step, &qpu);
    if (status == DQCP_OK) {
      if (val_json)
        std::printf("{\"valid\":true}\n");
      else
        std::printf("valid\n");
      return 0;
    }
    if (status != DQCP_ERROR_INFEASIBLE) die(status);
    if (val_json)
      std::printf("{\"valid\":false,\"time_step\":%d,\"qpu\":%d}\n", step, qpu);
    else
      std::printf("invalid: time step %d, QPU %d over capacity\n", step, qpu);
    return kExitInfeasible;
  }

  if (oracle->parsed()) {
    CircuitHandle circuit;
    circuit.ptr = oracle_circuit.load(oracle_json);
    NetworkHandle network;
    network.ptr = oracle_topology.load();
    ScheduleHandle schedule;
    double optimum = 0.0;
    check(dqcp_exact_optimum(circuit.get(), network.get(), oracle_wstate, oracle_wgate,
                             state_limit, oracle_threads, schedule.out(), &optimum));
    char* text = nullptr;
    check(dqcp_schedule_to_json(schedule.get(), &text));
    write_file(oracle_out, take_string(text) + "\n");
    if (oracle_json) {
      nlohmann::json info{{"optimum", optimum}, {"out", oracle_out}};
      std::printf("%s\n", info.dump().c_str());
    } else {
      std::printf("optimum=%s\n", fmt_num(optimum).c_str());
    }
    return 0;
  }

  if (bench->parsed()) {
    std::string grid_text = read_file(grid_path);
    if (bench_timings) {
      // Force timing capture regardless of the grid file setting.
      auto doc = nlohmann::json::parse(grid_text, nullptr, false);
      if (doc.is_discarded()) {
        std::fprintf(stderr, "error: %s is not valid JSON\n", grid_path.c_str());
        return kExitIo;
      }
      doc["include_timings"] = true;
      grid_text = doc.dump();
    }
    char* csv = nullptr;
    char* summary = nullptr;
    check(dqcp_bench_run_grid(grid_text.c_str(), bench_threads, &csv, &summary));
    write_file(bench_out, take_string(csv));
    std::printf("%s", take_string(summary).c_str());
    return 0;
  }

  return kExitUsage;
}

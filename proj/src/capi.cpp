#include "dqcp.h"

#include <cstring>
#include <new>
#include <string>

#include "dqcp/baseline.hpp"
#include "dqcp/beam.hpp"
#include "dqcp/bench.hpp"
#include "dqcp/circuit.hpp"
#include "dqcp/cost.hpp"
#include "dqcp/errors.hpp"
#include "dqcp/network.hpp"
#include "dqcp/oracle.hpp"

struct dqcp_circuit {
  dqcp::TemporalCircuit value;
};
struct dqcp_network {
  dqcp::QpuNetwork value;
};
struct dqcp_schedule {
  dqcp::Schedule value;
};
struct dqcp_partition {
  dqcp::StaticPartition value;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

dqcp_status fail(dqcp_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
dqcp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const dqcp::ParseError& e) {
    return fail(DQCP_ERROR_PARSE, e.what());
  } catch (const dqcp::InfeasibleError& e) {
    return fail(DQCP_ERROR_INFEASIBLE, e.what());
  } catch (const dqcp::LimitError& e) {
    return fail(DQCP_ERROR_LIMIT, e.what());
  } catch (const dqcp::Error& e) {
    return fail(DQCP_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DQCP_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DQCP_ERROR_INTERNAL, e.what());
  }
}

dqcp_status require(bool ok, const char* message) {
  return ok ? DQCP_OK : fail(DQCP_ERROR_INVALID_ARGUMENT, message);
}

}  // namespace

extern "C" {

const char* dqcp_status_name(dqcp_status status) {
  switch (status) {
    case DQCP_OK: return "ok";
    case DQCP_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case DQCP_ERROR_PARSE: return "parse error";
    case DQCP_ERROR_INFEASIBLE: return "infeasible";
    case DQCP_ERROR_LIMIT: return "limit exceeded";
    case DQCP_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* dqcp_last_error(void) { return g_last_error.c_str(); }

void dqcp_string_free(char* text) { delete[] text; }

dqcp_status dqcp_circuit_parse_json(const char* text, dqcp_circuit** out) {
  if (auto s = require(text && out, "text and out must be non-null")) return s;
  return guarded([&] {
    *out = new dqcp_circuit{dqcp::parse_circuit_json(text)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_circuit_to_json(const dqcp_circuit* circuit, char** out) {
  if (auto s = require(circuit && out, "circuit and out must be non-null")) return s;
  return guarded([&] {
    *out = dup_string(dqcp::circuit_to_json(circuit->value));
    return DQCP_OK;
  });
}

dqcp_status dqcp_circuit_random(int32_t num_qubits, int32_t depth, double gate_probability,
                                uint64_t seed, dqcp_circuit** out) {
  if (auto s = require(out != nullptr, "out must be non-null")) return s;
  return guarded([&] {
    *out = new dqcp_circuit{
        dqcp::generate_random_circuit(num_qubits, depth, gate_probability, seed)};
    return DQCP_OK;
  });
}

void dqcp_circuit_free(dqcp_circuit* circuit) { delete circuit; }

int32_t dqcp_circuit_num_qubits(const dqcp_circuit* circuit) {
  return circuit ? circuit->value.num_qubits : 0;
}

int32_t dqcp_circuit_depth(const dqcp_circuit* circuit) {
  return circuit ? circuit->value.depth() : 0;
}

int64_t dqcp_circuit_num_gates(const dqcp_circuit* circuit) {
  return circuit ? circuit->value.num_two_qubit_gates() : 0;
}

dqcp_status dqcp_network_build(const char* kind, int32_t num_qpus, const int32_t* capacities,
                               dqcp_network** out) {
  if (auto s = require(kind && capacities && out, "kind, capacities and out must be non-null"))
    return s;
  return guarded([&] {
    const dqcp::TopologyKind topology = dqcp::topology_kind_from_string(kind);
    std::vector<int32_t> caps(capacities, capacities + (num_qpus > 0 ? num_qpus : 0));
    *out = new dqcp_network{dqcp::build_topology(topology, num_qpus, std::move(caps))};
    return DQCP_OK;
  });
}

dqcp_status dqcp_network_parse_json(const char* text, dqcp_network** out) {
  if (auto s = require(text && out, "text and out must be non-null")) return s;
  return guarded([&] {
    *out = new dqcp_network{dqcp::parse_network_json(text)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_network_to_json(const dqcp_network* network, char** out) {
  if (auto s = require(network && out, "network and out must be non-null")) return s;
  return guarded([&] {
    *out = dup_string(dqcp::network_to_json(network->value));
    return DQCP_OK;
  });
}

void dqcp_network_free(dqcp_network* network) { delete network; }

int32_t dqcp_network_num_qpus(const dqcp_network* network) {
  return network ? network->value.num_qpus : 0;
}

int32_t dqcp_network_distance(const dqcp_network* network, int32_t from, int32_t to) {
  if (!network || from < 0 || to < 0 || from >= network->value.num_qpus ||
      to >= network->value.num_qpus)
    return -1;
  return network->value.dist(from, to);
}

dqcp_status dqcp_schedule_parse_json(const char* text, dqcp_schedule** out) {
  if (auto s = require(text && out, "text and out must be non-null")) return s;
  return guarded([&] {
    *out = new dqcp_schedule{dqcp::parse_schedule_json(text)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_schedule_to_json(const dqcp_schedule* schedule, char** out) {
  if (auto s = require(schedule && out, "schedule and out must be non-null")) return s;
  return guarded([&] {
    *out = dup_string(dqcp::schedule_to_json(schedule->value));
    return DQCP_OK;
  });
}

void dqcp_schedule_free(dqcp_schedule* schedule) { delete schedule; }

int32_t dqcp_schedule_depth(const dqcp_schedule* schedule) {
  return schedule ? schedule->value.depth() : 0;
}

int32_t dqcp_schedule_num_qubits(const dqcp_schedule* schedule) {
  return schedule ? schedule->value.num_qubits() : 0;
}

dqcp_status dqcp_schedule_validate(const dqcp_schedule* schedule, const dqcp_network* network,
                                   int32_t* violating_step, int32_t* violating_qpu) {
  if (auto s = require(schedule && network, "schedule and network must be non-null")) return s;
  return guarded([&] {
    const auto& assignments = schedule->value.assignments;
    for (std::size_t t = 0; t < assignments.size(); ++t) {
      if (const auto qpu = dqcp::first_overfull_qpu(assignments[t], network->value)) {
        if (violating_step) *violating_step = static_cast<int32_t>(t);
        if (violating_qpu) *violating_qpu = *qpu;
        return fail(DQCP_ERROR_INFEASIBLE,
                    ("time step " + std::to_string(t) + ": QPU " + std::to_string(*qpu) +
                     " over capacity")
                        .c_str());
      }
    }
    return DQCP_OK;
  });
}

dqcp_status dqcp_evaluate(const dqcp_schedule* schedule, const dqcp_circuit* circuit,
                          const dqcp_network* network, double w_state, double w_gate,
                          dqcp_cost_report* out) {
  if (auto s = require(schedule && circuit && network && out, "null argument")) return s;
  return guarded([&] {
    dqcp::CostWeights weights{w_state, w_gate};
    dqcp::validate_weights(weights);
    const int64_t state = dqcp::state_cost(schedule->value, network->value);
    const int64_t gate = dqcp::gate_cost(schedule->value, circuit->value, network->value);
    out->state_cost = static_cast<double>(state);
    out->gate_cost = static_cast<double>(gate);
    out->total_cost = w_state * static_cast<double>(state) + w_gate * static_cast<double>(gate);
    return DQCP_OK;
  });
}

dqcp_status dqcp_search_params_init(int32_t num_qubits, dqcp_search_params* out) {
  if (auto s = require(out != nullptr, "out must be non-null")) return s;
  if (auto s = require(num_qubits > 0, "num_qubits must be positive")) return s;
  const dqcp::SearchParams defaults = dqcp::default_search_params(num_qubits);
  out->beam_width = defaults.beam_width;
  out->num_swaps = defaults.num_swaps;
  out->num_random = defaults.num_random;
  out->w_state = defaults.weights.state;
  out->w_gate = defaults.weights.gate;
  out->seed = 0;
  out->threads = 0;
  return DQCP_OK;
}

dqcp_status dqcp_beam_search(const dqcp_circuit* circuit, const dqcp_network* network,
                             const dqcp_search_params* params, dqcp_schedule** out,
                             dqcp_cost_report* report) {
  if (auto s = require(circuit && network && params && out, "null argument")) return s;
  return guarded([&] {
    dqcp::SearchParams sp;
    sp.beam_width = params->beam_width;
    sp.num_swaps = params->num_swaps;
    sp.num_random = params->num_random;
    sp.weights = {params->w_state, params->w_gate};
    sp.seed = params->seed;
    sp.threads = params->threads;
    dqcp::Schedule schedule = dqcp::search(circuit->value, network->value, sp);
    if (report) {
      const int64_t state = dqcp::state_cost(schedule, network->value);
      const int64_t gate = dqcp::gate_cost(schedule, circuit->value, network->value);
      report->state_cost = static_cast<double>(state);
      report->gate_cost = static_cast<double>(gate);
      report->total_cost = schedule.total_cost.value_or(
          params->w_state * static_cast<double>(state) +
          params->w_gate * static_cast<double>(gate));
    }
    *out = new dqcp_schedule{std::move(schedule)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_static_partition(const dqcp_circuit* circuit, const dqcp_network* network,
                                  uint64_t seed, int32_t threads, dqcp_partition** out) {
  if (auto s = require(circuit && network && out, "null argument")) return s;
  return guarded([&] {
    *out = new dqcp_partition{
        dqcp::static_partition(dqcp::aggregate(circuit->value), network->value, seed, threads)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_partition_parse(const char* text, const dqcp_circuit* circuit,
                                 const dqcp_network* network, dqcp_partition** out) {
  if (auto s = require(text && circuit && network && out, "null argument")) return s;
  return guarded([&] {
    *out = new dqcp_partition{
        dqcp::import_partition(text, dqcp::aggregate(circuit->value), network->value)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_partition_to_text(const dqcp_partition* partition, char** out) {
  if (auto s = require(partition && out, "partition and out must be non-null")) return s;
  return guarded([&] {
    *out = dup_string(dqcp::partition_to_text(partition->value));
    return DQCP_OK;
  });
}

void dqcp_partition_free(dqcp_partition* partition) { delete partition; }

int64_t dqcp_partition_cut_weight(const dqcp_partition* partition) {
  return partition ? partition->value.cut_weight : -1;
}

int32_t dqcp_partition_block_of(const dqcp_partition* partition, int32_t qubit) {
  if (!partition || qubit < 0 ||
      qubit >= static_cast<int32_t>(partition->value.qpu_of.size()))
    return -1;
  return partition->value.qpu_of[static_cast<std::size_t>(qubit)];
}

dqcp_status dqcp_partition_lift(const dqcp_partition* partition, int32_t depth,
                                dqcp_schedule** out) {
  if (auto s = require(partition && out, "partition and out must be non-null")) return s;
  return guarded([&] {
    *out = new dqcp_schedule{dqcp::lift_to_schedule(partition->value, depth)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_exact_optimum(const dqcp_circuit* circuit, const dqcp_network* network,
                               double w_state, double w_gate, int64_t state_limit,
                               int32_t threads, dqcp_schedule** out, double* optimum) {
  if (auto s = require(circuit && network && out, "null argument")) return s;
  return guarded([&] {
    dqcp::CostWeights weights{w_state, w_gate};
    dqcp::OracleResult result =
        dqcp::exact_optimum(circuit->value, network->value, weights, state_limit, threads);
    if (optimum) *optimum = result.optimum;
    *out = new dqcp_schedule{std::move(result.schedule)};
    return DQCP_OK;
  });
}

dqcp_status dqcp_bench_run_grid(const char* grid_json, int32_t threads, char** csv_out,
                                char** summary_out) {
  if (auto s = require(grid_json != nullptr, "grid_json must be non-null")) return s;
  return guarded([&] {
    const dqcp::ExperimentGrid grid = dqcp::parse_grid_json(grid_json);
    const std::vector<dqcp::BenchRow> rows = dqcp::run_grid(grid, threads);
    if (csv_out) *csv_out = dup_string(dqcp::rows_to_csv(rows));
    if (summary_out) *summary_out = dup_string(dqcp::summarize(rows));
    return DQCP_OK;
  });
}

}  // extern "C"

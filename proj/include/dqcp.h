/*
 * dqcp — distributed quantum circuit partitioning toolkit, C API.
 *
 * A thin handle-based wrapper over the C++ core. Every function returns a
 * dqcp_status; on failure a human-readable message is available from
 * dqcp_last_error() until the next failing call on the same thread.
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function. Strings returned through
 * char** out-parameters are released with dqcp_string_free().
 */

#ifndef DQCP_H
#define DQCP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dqcp_status {
  DQCP_OK = 0,
  DQCP_ERROR_INVALID_ARGUMENT = 1, /* bad parameters or misuse */
  DQCP_ERROR_PARSE = 2,            /* malformed input text */
  DQCP_ERROR_INFEASIBLE = 3,       /* capacity constraints cannot be met */
  DQCP_ERROR_LIMIT = 4,            /* a configured resource limit was exceeded */
  DQCP_ERROR_INTERNAL = 5
} dqcp_status;

const char* dqcp_status_name(dqcp_status status);

/* Message describing the most recent failure on this thread. */
const char* dqcp_last_error(void);

void dqcp_string_free(char* text);

/* ---------------------------------------------------------------- circuits */

typedef struct dqcp_circuit dqcp_circuit;

/* Circuit file format:
 *   { "num_qubits": N, "depth": T, "layers": [ [[i,j], ...], ... ] }
 */
dqcp_status dqcp_circuit_parse_json(const char* text, dqcp_circuit** out);
dqcp_status dqcp_circuit_to_json(const dqcp_circuit* circuit, char** out);

/* Seeded random circuit: per layer, qubits are paired into floor(N/2)
 * disjoint candidate pairs and each pair becomes a two-qubit gate with
 * probability gate_probability. */
dqcp_status dqcp_circuit_random(int32_t num_qubits, int32_t depth, double gate_probability,
                                uint64_t seed, dqcp_circuit** out);
void dqcp_circuit_free(dqcp_circuit* circuit);

int32_t dqcp_circuit_num_qubits(const dqcp_circuit* circuit);
int32_t dqcp_circuit_depth(const dqcp_circuit* circuit);
int64_t dqcp_circuit_num_gates(const dqcp_circuit* circuit);

/* ---------------------------------------------------------------- networks */

typedef struct dqcp_network dqcp_network;

/* kind is one of "complete", "cycle", "star" (hub = node 0), "path".
 * capacities points at num_qpus entries. */
dqcp_status dqcp_network_build(const char* kind, int32_t num_qpus, const int32_t* capacities,
                               dqcp_network** out);

/* Topology file format:
 *   { "num_qpus": k, "capacities": [c0, ...], "edges": [[i,j], ...] }
 */
dqcp_status dqcp_network_parse_json(const char* text, dqcp_network** out);
dqcp_status dqcp_network_to_json(const dqcp_network* network, char** out);
void dqcp_network_free(dqcp_network* network);

int32_t dqcp_network_num_qpus(const dqcp_network* network);
int32_t dqcp_network_distance(const dqcp_network* network, int32_t from, int32_t to);

/* --------------------------------------------------------------- schedules */

typedef struct dqcp_schedule dqcp_schedule;

/* Schedule file format: { "depth": T, "assignments": [[...], ... T rows] } */
dqcp_status dqcp_schedule_parse_json(const char* text, dqcp_schedule** out);
dqcp_status dqcp_schedule_to_json(const dqcp_schedule* schedule, char** out);
void dqcp_schedule_free(dqcp_schedule* schedule);

int32_t dqcp_schedule_depth(const dqcp_schedule* schedule);
int32_t dqcp_schedule_num_qubits(const dqcp_schedule* schedule);

/* DQCP_OK when every time step respects the capacities. On a violation
 * returns DQCP_ERROR_INFEASIBLE and, when the pointers are non-null, the
 * first offending time step and QPU. */
dqcp_status dqcp_schedule_validate(const dqcp_schedule* schedule, const dqcp_network* network,
                                   int32_t* violating_step, int32_t* violating_qpu);

/* -------------------------------------------------------------------- cost */

typedef struct dqcp_cost_report {
  double state_cost; /* unweighted state-teleportation distance */
  double gate_cost;  /* unweighted gate-teleportation distance */
  double total_cost; /* w_state * state + w_gate * gate */
} dqcp_cost_report;

dqcp_status dqcp_evaluate(const dqcp_schedule* schedule, const dqcp_circuit* circuit,
                          const dqcp_network* network, double w_state, double w_gate,
                          dqcp_cost_report* out);

/* ------------------------------------------------------------- beam search */

typedef struct dqcp_search_params {
  int32_t beam_width;
  int32_t num_swaps;
  int32_t num_random;
  double w_state;
  double w_gate;
  uint64_t seed;
  int32_t threads; /* 0 = all hardware threads */
} dqcp_search_params;

/* Fills the recommended defaults for a circuit of num_qubits qubits:
 * beam_width 8N, num_swaps 4N, num_random 2N, unit weights, seed 0,
 * threads 0. */
dqcp_status dqcp_search_params_init(int32_t num_qubits, dqcp_search_params* out);

/* Time-aware beam search. Deterministic for a fixed seed. The optional
 * report receives the cost of the returned schedule. */
dqcp_status dqcp_beam_search(const dqcp_circuit* circuit, const dqcp_network* network,
                             const dqcp_search_params* params, dqcp_schedule** out,
                             dqcp_cost_report* report);

/* -------------------------------------------------------- static baseline */

typedef struct dqcp_partition dqcp_partition;

/* Topology-agnostic k-way partition of the aggregated interaction graph.
 * threads controls the worker pool (0 = all hardware threads); the result
 * is independent of it. */
dqcp_status dqcp_static_partition(const dqcp_circuit* circuit, const dqcp_network* network,
                                  uint64_t seed, int32_t threads, dqcp_partition** out);

/* Partition file format: whitespace-separated block indices, one per qubit. */
dqcp_status dqcp_partition_parse(const char* text, const dqcp_circuit* circuit,
                                 const dqcp_network* network, dqcp_partition** out);
dqcp_status dqcp_partition_to_text(const dqcp_partition* partition, char** out);
void dqcp_partition_free(dqcp_partition* partition);

int64_t dqcp_partition_cut_weight(const dqcp_partition* partition);
int32_t dqcp_partition_block_of(const dqcp_partition* partition, int32_t qubit);

/* Constant schedule repeating the partition for depth steps. */
dqcp_status dqcp_partition_lift(const dqcp_partition* partition, int32_t depth,
                                dqcp_schedule** out);

/* ------------------------------------------------------------------ oracle */

/* Exact optimal schedule by layered dynamic programming. Fails with
 * DQCP_ERROR_LIMIT when the instance has more than state_limit feasible
 * assignments. */
dqcp_status dqcp_exact_optimum(const dqcp_circuit* circuit, const dqcp_network* network,
                               double w_state, double w_gate, int64_t state_limit,
                               int32_t threads, dqcp_schedule** out, double* optimum);

/* ------------------------------------------------------------------- bench */

/* Runs an experiment grid described by grid_json (see the documentation for
 * the grid schema) and returns the schema=1 CSV table and a per-cell text
 * summary. Either output pointer may be null. */
dqcp_status dqcp_bench_run_grid(const char* grid_json, int32_t threads, char** csv_out,
                                char** summary_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DQCP_H */

#ifndef DCNET_H
#define DCNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DCNET_API __declspec(dllexport)
#else
#define DCNET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcnet_status {
    DCNET_OK = 0,
    DCNET_E_INVALID_ARGUMENT = 1,
    DCNET_E_DECODE,
    DCNET_E_AUTHENTICATION,
    DCNET_E_RANGE,
    DCNET_E_INCOMPLETE_ROUND,
    DCNET_E_LENGTH_CAP,
    DCNET_E_OWN_ANNOUNCEMENT_LOST,
    DCNET_E_CANNOT_VERIFY,
    DCNET_E_CANNOT_ADJUDICATE,
    DCNET_E_PROTOCOL_LOGIC,
    DCNET_E_ROUTING,
    DCNET_E_DEADLOCK,
    DCNET_E_INFEASIBLE,
    DCNET_E_IO,
    DCNET_E_INTERNAL = 100
} dcnet_status;

typedef enum dcnet_mode {
    DCNET_MODE_AUTO = 0,
    DCNET_MODE_SECURED = 1,
    DCNET_MODE_UNSECURED = 2
} dcnet_mode;

typedef enum dcnet_crypto {
    DCNET_CRYPTO_MODELLED = 0,
    DCNET_CRYPTO_REAL = 1
} dcnet_crypto;

typedef enum dcnet_attack {
    DCNET_ATTACK_FLOOD_SLOTS = 1,
    DCNET_ATTACK_WRONG_VALUE = 2,
    DCNET_ATTACK_WRONG_BLINDING = 3,
    DCNET_ATTACK_WRONG_SLOT = 4
} dcnet_attack;

/* Message of the last failed call on this thread, "" if none. */
DCNET_API const char* dcnet_last_error(void);
DCNET_API const char* dcnet_status_name(dcnet_status s);
DCNET_API const char* dcnet_version(void);

/* ---- experiments ---- */

typedef struct dcnet_spec dcnet_spec;
typedef struct dcnet_result dcnet_result;

typedef struct dcnet_row {
    int baseline; /* 0 protocol, 1 baseline */
    int summary;  /* 1 for the per-series summary row */
    uint32_t iteration;
    size_t k;
    size_t senders;
    size_t msg_size;
    double sim_runtime_ms;
    uint64_t bytes_total;
    uint64_t commitments_generated;
    uint64_t commitments_precomputed;
    uint64_t commitments_verified;
    size_t delivered;
    double runtime_min_ms;
    double runtime_median_ms;
    double runtime_max_ms;
} dcnet_row;

DCNET_API dcnet_status dcnet_spec_new(dcnet_spec** out);
DCNET_API void dcnet_spec_free(dcnet_spec* spec);

/* A sender count of 0 means k/2. */
DCNET_API dcnet_status dcnet_spec_set_nodes(dcnet_spec* spec, const size_t* k, size_t n);
DCNET_API dcnet_status dcnet_spec_set_senders(dcnet_spec* spec, const size_t* senders, size_t n);
DCNET_API dcnet_status dcnet_spec_set_msg_sizes(dcnet_spec* spec, const size_t* sizes, size_t n);
DCNET_API dcnet_status dcnet_spec_set_mode(dcnet_spec* spec, dcnet_mode mode);
/* "none" or a comma-separated subset of deferred, precompute, direct. */
DCNET_API dcnet_status dcnet_spec_set_optimisations(dcnet_spec* spec, const char* opts);
DCNET_API dcnet_status dcnet_spec_set_iterations(dcnet_spec* spec, uint32_t iterations);
DCNET_API dcnet_status dcnet_spec_set_seed(dcnet_spec* spec, uint64_t seed);
DCNET_API dcnet_status dcnet_spec_set_fixed_slots(dcnet_spec* spec, int on);
DCNET_API dcnet_status dcnet_spec_set_baseline(dcnet_spec* spec, int on);
DCNET_API dcnet_status dcnet_spec_set_network(dcnet_spec* spec, double latency_ms, double bandwidth_bps);
DCNET_API dcnet_status dcnet_spec_set_compute(dcnet_spec* spec, double scalar_mul_ms, double point_add_ms,
                                              unsigned threads);
DCNET_API dcnet_status dcnet_spec_set_crypto(dcnet_spec* spec, dcnet_crypto crypto);

/* Runs the protocol series, plus the baseline series when the flag is set. */
DCNET_API dcnet_status dcnet_run(const dcnet_spec* spec, dcnet_result** out);
DCNET_API void dcnet_result_free(dcnet_result* result);
DCNET_API size_t dcnet_result_rows(const dcnet_result* result);
DCNET_API dcnet_status dcnet_result_row(const dcnet_result* result, size_t index, dcnet_row* out);
/* Header line plus one LF-terminated line per row. Owned by the result. */
DCNET_API const char* dcnet_result_csv(const dcnet_result* result, size_t* len);

/* ---- single scenarios ---- */

typedef struct dcnet_scenario dcnet_scenario;
typedef struct dcnet_run_result dcnet_run_result;

DCNET_API dcnet_status dcnet_scenario_new(size_t k, dcnet_scenario** out);
DCNET_API void dcnet_scenario_free(dcnet_scenario* sc);
DCNET_API dcnet_status dcnet_scenario_add_message(dcnet_scenario* sc, size_t node, const uint8_t* data, size_t len);
DCNET_API dcnet_status dcnet_scenario_add_attacker(dcnet_scenario* sc, size_t node, dcnet_attack attack,
                                                   uint32_t from_instance, uint32_t times);
DCNET_API dcnet_status dcnet_scenario_set_mode(dcnet_scenario* sc, dcnet_mode mode);
DCNET_API dcnet_status dcnet_scenario_set_crypto(dcnet_scenario* sc, dcnet_crypto crypto);
DCNET_API dcnet_status dcnet_scenario_set_optimisations(dcnet_scenario* sc, const char* opts);
DCNET_API dcnet_status dcnet_scenario_set_network(dcnet_scenario* sc, double latency_ms, double bandwidth_bps);
DCNET_API dcnet_status dcnet_scenario_set_max_instances(dcnet_scenario* sc, uint32_t n);
DCNET_API dcnet_status dcnet_scenario_set_seed(dcnet_scenario* sc, uint64_t seed);

DCNET_API dcnet_status dcnet_scenario_run(const dcnet_scenario* sc, dcnet_run_result** out);
DCNET_API void dcnet_run_free(dcnet_run_result* run);
/* Log lines in (time, node) order, LF-terminated. Owned by the run. */
DCNET_API const char* dcnet_run_log(const dcnet_run_result* run, size_t* len);
DCNET_API uint32_t dcnet_run_exclusions(const dcnet_run_result* run);
DCNET_API size_t dcnet_run_instances(const dcnet_run_result* run);
DCNET_API double dcnet_run_end_ms(const dcnet_run_result* run);
DCNET_API uint64_t dcnet_run_bytes_total(const dcnet_run_result* run);
DCNET_API size_t dcnet_run_nodes(const dcnet_run_result* run);
/* Messages the node extracted, counting every instance. */
DCNET_API dcnet_status dcnet_run_delivered(const dcnet_run_result* run, size_t node, size_t* count);
DCNET_API dcnet_status dcnet_run_node_excluded(const dcnet_run_result* run, size_t node, int* excluded);

#ifdef __cplusplus
}
#endif

#endif

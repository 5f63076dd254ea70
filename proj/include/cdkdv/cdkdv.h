#ifndef CDKDV_H
#define CDKDV_H

/* C interface to the Cayley-Dickson KdV library.
 *
 * Every fallible call returns a cdkdv_status; on failure a one-line message
 * is available from cdkdv_last_error() on the same thread. Strings returned
 * through char** are owned by the caller and released with
 * cdkdv_string_free. Handles are opaque and released by their _destroy
 * function; destroy functions accept NULL. */

#include <stddef.h>
#include <stdint.h>

#if defined(CDKDV_BUILDING)
#define CDKDV_API __attribute__((visibility("default")))
#else
#define CDKDV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdkdv_status {
  CDKDV_OK = 0,
  CDKDV_ERR_INVALID_ARGUMENT = 1,
  CDKDV_ERR_DIMENSION = 2,
  CDKDV_ERR_LEVEL = 3,
  CDKDV_ERR_CONFIG = 4,
  CDKDV_ERR_BLOWUP = 5,
  CDKDV_ERR_POLE = 6,
  CDKDV_ERR_IO = 7,
  CDKDV_ERR_INTERNAL = 99
} cdkdv_status;

typedef struct cdkdv_algebra cdkdv_algebra;
typedef struct cdkdv_config cdkdv_config;
typedef struct cdkdv_run cdkdv_run;

CDKDV_API const char* cdkdv_version(void);
/* Message of the last failed call on this thread ("" if none). */
CDKDV_API const char* cdkdv_last_error(void);
CDKDV_API const char* cdkdv_status_name(cdkdv_status status);
CDKDV_API void cdkdv_string_free(char* s);

/* ---------------------------------------------------------------- algebra */

/* Algebra of dimension 2^level, 0 <= level <= 8. */
CDKDV_API cdkdv_status cdkdv_algebra_create(int level, cdkdv_algebra** out);
/* Copy with basis labels permuted: new e_{perm[k]} is old e_k (perm[0] = 0). */
CDKDV_API cdkdv_status cdkdv_algebra_relabel(const cdkdv_algebra* alg, const size_t* perm,
                                             size_t n, cdkdv_algebra** out);
CDKDV_API void cdkdv_algebra_destroy(cdkdv_algebra* alg);
CDKDV_API int cdkdv_algebra_level(const cdkdv_algebra* alg);
CDKDV_API size_t cdkdv_algebra_dim(const cdkdv_algebra* alg);
/* e_i e_j = sign * e_index. */
CDKDV_API cdkdv_status cdkdv_algebra_basis_product(const cdkdv_algebra* alg, size_t i, size_t j,
                                                   int* sign, size_t* index);
/* out = x y; all three arrays have dim entries. */
CDKDV_API cdkdv_status cdkdv_algebra_multiply(const cdkdv_algebra* alg, const double* x,
                                              const double* y, double* out);
/* Signed target indices, rows i, columns j. */
CDKDV_API cdkdv_status cdkdv_algebra_table_csv(const cdkdv_algebra* alg, char** csv);
/* property: commutative | associative | alternative | norm_multiplicative |
 * power_associative | antisymmetric_structure_constants.
 * JSON {property, level, holds, counterexample, deviation}. */
CDKDV_API cdkdv_status cdkdv_algebra_audit(const cdkdv_algebra* alg, const char* property,
                                           char** json);
/* Every property plus the zero-divisor search, as JSON. */
CDKDV_API cdkdv_status cdkdv_algebra_classify(const cdkdv_algebra* alg, char** json);
/* Zero-divisor pairs (e_i + e_j)(e_k + e_l) = 0; limit 0 means all. */
CDKDV_API cdkdv_status cdkdv_algebra_zero_divisors(const cdkdv_algebra* alg, size_t limit,
                                                   char** json);

/* ----------------------------------------------------------------- config */

CDKDV_API cdkdv_status cdkdv_config_parse(const char* json, cdkdv_config** out);
CDKDV_API cdkdv_status cdkdv_config_parse_file(const char* path, cdkdv_config** out);
CDKDV_API void cdkdv_config_destroy(cdkdv_config* cfg);
CDKDV_API cdkdv_status cdkdv_config_set_seed(cdkdv_config* cfg, uint64_t seed);
CDKDV_API uint64_t cdkdv_config_seed(const cdkdv_config* cfg);
/* Either path may be NULL to keep the current value. */
CDKDV_API cdkdv_status cdkdv_config_set_outputs(cdkdv_config* cfg, const char* run_csv,
                                                const char* conserved_csv);
CDKDV_API cdkdv_status cdkdv_config_outputs(const cdkdv_config* cfg, char** run_csv,
                                            char** conserved_csv);
/* Normalized config with defaults filled in. */
CDKDV_API cdkdv_status cdkdv_config_to_json(const cdkdv_config* cfg, char** json);

/* -------------------------------------------------------------------- run */

/* Integrates the configured equation. On CDKDV_ERR_BLOWUP *out still
 * receives the partial run up to the last valid time. */
CDKDV_API cdkdv_status cdkdv_simulate(const cdkdv_config* cfg, cdkdv_run** out);
/* Loads a run CSV (t, x, c_0..) or field CSV (x, c_0..). */
CDKDV_API cdkdv_status cdkdv_run_load_csv(const char* path, cdkdv_run** out);
CDKDV_API void cdkdv_run_destroy(cdkdv_run* run);
CDKDV_API size_t cdkdv_run_records(const cdkdv_run* run);
CDKDV_API size_t cdkdv_run_points(const cdkdv_run* run);
CDKDV_API size_t cdkdv_run_dim(const cdkdv_run* run);
CDKDV_API cdkdv_status cdkdv_run_time(const cdkdv_run* run, size_t record, double* t);
/* Copies record `record` into out[k * points + j] (component k, point j). */
CDKDV_API cdkdv_status cdkdv_run_snapshot(const cdkdv_run* run, size_t record, double* out);
/* JSON summary: records, final time, conserved drifts, residuals, blow-up. */
CDKDV_API cdkdv_status cdkdv_run_report(const cdkdv_run* run, char** json);
/* Writes the run and conserved CSVs; either path may be NULL. */
CDKDV_API cdkdv_status cdkdv_run_write_csv(const cdkdv_run* run, const char* run_csv,
                                           const char* conserved_csv);
CDKDV_API cdkdv_status cdkdv_run_csv(const cdkdv_run* run, char** csv);
/* Recomputes H1..H3 and the step residual of every record of a loaded run
 * under the given evolution parameters (JSON {equation, v, epsilon, dt};
 * NULL means cdkdv, v = 0, dt = 1e-4). Writes the conserved CSV to
 * `conserved_csv` when non-NULL and returns a JSON report. */
CDKDV_API cdkdv_status cdkdv_run_conserved(cdkdv_run* run, const char* params_json,
                                           const char* conserved_csv, char** json);

/* --------------------------------------------------------------- solitons */

/* spec JSON: {lambda, alpha, [lambda2, beta, orientation], [v], [t],
 * [N, L]}. Field CSV of the closed form on the grid. */
CDKDV_API cdkdv_status cdkdv_soliton_field_csv(const char* spec_json, char** csv);
/* JSON certificate of the closed-form residuals. */
CDKDV_API cdkdv_status cdkdv_soliton_certify(const char* spec_json, char** json);

/* ----------------------------------------------------------- verification */

/* Newline-separated list of verification kinds. */
CDKDV_API cdkdv_status cdkdv_verify_kinds(char** names);
/* Runs one verification family; params_json may be NULL. *passed is set to
 * 1 when every asserted check passes. */
CDKDV_API cdkdv_status cdkdv_verify(const char* kind, const char* params_json, char** json,
                                    int* passed);

/* --------------------------------------------------------------- symmetry */

/* The 14 derivation matrices spanning g2: columns basis, row, c_0..c_7. */
CDKDV_API cdkdv_status cdkdv_symmetry_basis_csv(char** csv);
/* Stabilizer of an octonion v (8 coefficients): dimension and null-space
 * basis as JSON. */
CDKDV_API cdkdv_status cdkdv_symmetry_stabilizer(const double* v, size_t n, char** json);
/* Invariance slopes on a stored run: records record-1, record, record+1 form
 * the centered window. mu holds two or more amplitudes. */
CDKDV_API cdkdv_status cdkdv_symmetry_invariance(const cdkdv_run* run, size_t record,
                                                 const double* v, size_t n, const double* mu,
                                                 size_t n_mu, char** json);

#ifdef __cplusplus
}
#endif

#endif

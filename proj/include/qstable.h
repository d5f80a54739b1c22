/* qstable — local stability of orthogonal state sets.
 *
 * C interface to the shared library. All functions are thread-safe; error
 * messages are thread-local. Strings returned through char** out-parameters
 * are malloc'd; release them with qstable_string_free. Party indices in this
 * interface are 1-based, matching the JSON documents the library emits.
 */
#ifndef QSTABLE_H
#define QSTABLE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qstable_set qstable_set; /* opaque: an orthogonal state set */

typedef enum qstable_status {
    QSTABLE_OK = 0,
    QSTABLE_ERR_INVALID_ARGUMENT = 1,
    QSTABLE_ERR_PARSE = 2,
    QSTABLE_ERR_ORTHOGONALITY = 3, /* inputs not pairwise orthogonal */
    QSTABLE_ERR_DEGENERATE_SET = 4,
    QSTABLE_ERR_NO_CERTIFICATE = 5, /* side is stable; no witness exists */
    QSTABLE_ERR_LIMIT_EXCEEDED = 6, /* instance above a size cap */
    QSTABLE_ERR_INTERNAL = 7
} qstable_status;

/* Numerical and execution knobs. Zero-initialize via qstable_options_init;
 * zeros mean "library default" for every field. */
typedef struct qstable_options {
    double rank_eps;    /* relative singular-value cutoff scale */
    double orth_eps;    /* relative overlap tolerated as orthogonal */
    int gram_row_factor; /* rows > factor*cols switches rank to the Gram route */
    int threads;        /* worker cap; 0 = auto (QSTABLE_THREADS caps further) */
    unsigned long long seed;       /* search determinism */
    int trials;                    /* search restarts; 0 = default (20) */
    size_t target_size;            /* search floor; 0 = down to the bound */
    double time_budget_seconds;    /* search budget; 0 = unlimited */
} qstable_options;

void qstable_options_init(qstable_options* opts);

const char* qstable_version(void);
const char* qstable_status_name(qstable_status status);

/* Message for the last failing call on this thread ("" if none). The pointer
 * stays valid until the next library call on the same thread. */
const char* qstable_last_error(void);

void qstable_string_free(char* s);
void qstable_set_free(qstable_set* set);

/* ---- state sets ------------------------------------------------------- */

/* Parses { "dims": [...], "label": "...", "states": [{"amps": [[re,im],...]},...] }.
 * orth_eps <= 0 uses the default tolerance. */
qstable_status qstable_set_from_json(const char* json_text, double orth_eps, qstable_set** out);
qstable_status qstable_set_to_json(const qstable_set* set, char** json_out);
qstable_status qstable_set_cardinality(const qstable_set* set, size_t* out);

/* Weight-class Fourier set over the given local dimensions; genuine = 1
 * swaps the weight-0 family for the pair |0...0> +- |1...1>. */
qstable_status qstable_construct_weight_fourier(const int* dims, int n_parties, int genuine,
                                                qstable_set** out);
/* The 2^n images of the computational basis under the n-qubit W operator
 * (3 <= n <= 12). */
qstable_status qstable_construct_w_basis(int n, qstable_set** out);
/* {|00> + |11>, |00> - |11>, |01> + |10>}. */
qstable_status qstable_construct_bell(qstable_set** out);
/* First `size` columns of a Haar-random unitary on the joint space. */
qstable_status qstable_random_orthogonal_set(const int* dims, int n_parties, size_t size,
                                             unsigned long long seed, qstable_set** out);

/* ---- stability -------------------------------------------------------- */

/* mode: "single-party" or "all-bipartitions"; exhaustive != 0 sweeps both
 * sides of every bipartition instead of the one-vs-rest shortcut.
 * verdict_out: 0 = stable, 1 = not stable, 2 = some rank decision was within
 * the marginal band of the cutoff (takes precedence over 0/1).
 * report_json_out may be NULL. */
qstable_status qstable_verify(const qstable_set* set, const char* mode, int exhaustive,
                              const qstable_options* opts, int* verdict_out,
                              char** report_json_out);

/* Two-outcome orthogonality-preserving POVM on the measured side of the
 * given bipartition (left_parties: 1-based, the complement forms the right
 * side; measuring: "left" or "right"). Fails with
 * QSTABLE_ERR_NO_CERTIFICATE when that side is stable. */
qstable_status qstable_certify(const qstable_set* set, const int* left_parties, int left_count,
                               const char* measuring, const qstable_options* opts,
                               char** certificate_json_out);

/* Cardinality floors implied by the local dimensions. */
qstable_status qstable_bounds(const int* dims, int n_parties, char** json_out);

/* Schmidt ranks across every bipartition for each state, plus genuine-
 * entanglement verdicts. */
qstable_status qstable_entanglement(const qstable_set* set, const qstable_options* opts,
                                    char** json_out);

/* ---- search ----------------------------------------------------------- */

/* Shrinks a stable set to a small stable subset (greedy with restarts, or
 * the full subset lattice when exhaustive_enumeration != 0; the latter
 * requires cardinality <= 12). */
qstable_status qstable_search_minimize(const qstable_set* set, const char* mode,
                                       int exhaustive_enumeration, const qstable_options* opts,
                                       char** outcome_json_out);

/* Hunts for a stable set saturating the cardinality bound (or target_size
 * if larger) from random draws and perturbations. */
qstable_status qstable_search_probe(const int* dims, int n_parties, const char* mode,
                                    const qstable_options* opts, char** outcome_json_out);

/* ---- one-shot verification suite -------------------------------------- */

/* Runs the desk-scale check battery. table_out (human text) and
 * report_json_out may each be NULL; failures_out receives the number of
 * failing checks. include_n6 != 0 adds the six-qubit sweep. */
qstable_status qstable_reproduce(int include_n6, const qstable_options* opts, char** table_out,
                                 char** report_json_out, int* failures_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QSTABLE_H */

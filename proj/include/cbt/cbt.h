/* cbt — concurrent behavior tree engine, C interface.
 *
 * Everything is exposed through opaque handles and integer status codes so
 * the shared library can back bindings and tools without a C++ toolchain.
 * Handles are single-threaded objects; distinct handles may be used from
 * distinct threads freely.
 */
#ifndef CBT_H
#define CBT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbt_status {
    CBT_OK = 0,
    CBT_ERROR_PARSE = 1,       /* tree text has error-level diagnostics */
    CBT_ERROR_IO = 2,          /* file could not be read or written */
    CBT_ERROR_INVALID_ARG = 3, /* null handle, bad name, bad grid string */
    CBT_ERROR_RUN_ABORTED = 4, /* cycle cap hit before the run completed */
    CBT_ERROR_INTERNAL = 5
} cbt_status;

/* Stable message for a status code. Never NULL. */
const char* cbt_status_message(cbt_status status);

const char* cbt_version(void);

/* ------------------------------------------------------------------ */
/* Trees                                                               */

typedef struct cbt_tree cbt_tree;

/* Parses tree text. *out is always set when out is non-NULL (even on
 * CBT_ERROR_PARSE) so diagnostics stay readable; a tree that did not
 * parse cleanly cannot be run or printed. */
cbt_status cbt_tree_parse(const char* text, cbt_tree** out);
cbt_status cbt_tree_parse_file(const char* path, cbt_tree** out);
void cbt_tree_free(cbt_tree* tree);

/* Parse and lint findings, formatted as file:line:col: code: message. */
int cbt_tree_diagnostic_count(const cbt_tree* tree);
const char* cbt_tree_diagnostic(const cbt_tree* tree, int index);

/* Canonical text form. Free the result with cbt_string_free. Returns NULL
 * for an invalid tree. */
char* cbt_tree_print(const cbt_tree* tree);
void cbt_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Runs                                                                */

typedef struct cbt_run cbt_run;

/* Executes the tree until every finite action completes. max_cycles of 0
 * picks a cap from the tree's slowest action. On CBT_ERROR_RUN_ABORTED a
 * run handle carrying the partial trace is still returned. */
cbt_status cbt_tree_run(const cbt_tree* tree, uint64_t seed, uint64_t max_cycles,
                        cbt_run** out);
void cbt_run_free(cbt_run* run);

uint64_t cbt_run_cycles(const cbt_run* run);
int cbt_run_completed(const cbt_run* run);
cbt_status cbt_run_write_trace_csv(const cbt_run* run, const char* path);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

/* Runs a named study and writes <name>_runs.csv / <name>_summary.csv
 * (dining studies also write <name>_trace.csv) into out_dir. Names:
 * absolute, relative, scaling-absolute, scaling-relative, predictability,
 * dining-greedy, dining-fair. runs of 0 keeps the default (10000). grid
 * optionally overrides parameter axes, e.g. "barriers=0,3,9;omega=0.01";
 * pass NULL for the defaults. Rerunning with the same arguments emits
 * byte-identical files. */
cbt_status cbt_experiment_run(const char* name, uint64_t runs, uint64_t seed,
                              const char* out_dir, const char* grid);

/* Most recent error detail for this thread (empty string when none). */
const char* cbt_last_error(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CBT_H */

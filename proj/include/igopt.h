/* C interface to the igopt experiment runner. All state lives behind the
 * opaque igopt_experiment handle; functions return IGOPT_OK (0) or an error
 * code, with a human-readable message available via igopt_error_message. */
#ifndef IGOPT_H
#define IGOPT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define IGOPT_OK 0
#define IGOPT_ERR_CONFIG 1
#define IGOPT_ERR_IO 2
#define IGOPT_ERR_SELFTEST 3

typedef struct igopt_experiment_s igopt_experiment;

igopt_experiment *igopt_experiment_new(void);
void igopt_experiment_free(igopt_experiment *exp);

/* Configure one field by name. Keys: function, d, variant, lambda, K, eta,
 * T, alpha, trials, seed, budget, target. Values are parsed from the string;
 * lambda accepts "default" (4 + floor(3 ln d), resolved at run time). */
int igopt_experiment_set(igopt_experiment *exp, const char *key, const char *value);

/* Last error message for this handle; empty string when none. */
const char *igopt_error_message(const igopt_experiment *exp);

/* Validates the configuration and runs all trials on up to `jobs` threads.
 * Results are independent of the parallelism level. */
int igopt_experiment_run(igopt_experiment *exp, int jobs);

/* Result accessors; only meaningful after a successful run. */
int igopt_trial_count(const igopt_experiment *exp);
int igopt_success_count(const igopt_experiment *exp);
double igopt_success_probability(const igopt_experiment *exp);
/* Mean evaluations over successful trials; NaN when none succeeded. */
double igopt_mean_evaluations(const igopt_experiment *exp);
/* Writes the performance metric (mean successful evaluations divided by the
 * success probability) into *out. Returns IGOPT_OK, or IGOPT_ERR_CONFIG when
 * the metric is undefined because no trial succeeded. */
int igopt_performance_metric(const igopt_experiment *exp, double *out);

/* Per-trial row access for tabular output. Returns the number of characters
 * that would have been written (snprintf semantics), or a negative value on a
 * bad index. Row format matches igopt_csv_header. */
int igopt_csv_header(char *buf, size_t len);
int igopt_csv_row(const igopt_experiment *exp, int trial, char *buf, size_t len);

int igopt_write_csv(igopt_experiment *exp, const char *path);
int igopt_write_json(igopt_experiment *exp, const char *path);

/* Runs the fast invariant suite; prints one line per check when verbose is
 * nonzero. Returns IGOPT_OK or IGOPT_ERR_SELFTEST. */
int igopt_selftest(int verbose);

#ifdef __cplusplus
}
#endif

#endif

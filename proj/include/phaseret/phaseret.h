/* Public C interface of the phaseret library.
 *
 * Every object is an opaque handle created by a pr_*_create/load/generate
 * call and released with the matching pr_*_free. Functions that can fail
 * return a pr_status; on failure pr_last_error() describes the problem for
 * the calling thread until that thread's next failing call.
 */
#ifndef PHASERET_PHASERET_H
#define PHASERET_PHASERET_H

#include <stddef.h>
#include <stdint.h>

#if defined(PHASERET_BUILDING_LIBRARY)
#define PR_API __attribute__((visibility("default")))
#else
#define PR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pr_status {
  PR_OK = 0,
  PR_ERR_INVALID_ARGUMENT = 1,
  PR_ERR_DIMENSION = 2,
  PR_ERR_POLE = 3,
  PR_ERR_DOMAIN = 4,
  PR_ERR_NOT_READY = 5,
  PR_ERR_DIVERGED = 6,
  PR_ERR_PARSE = 7,
  PR_ERR_IO = 8,
  PR_ERR_INTERNAL = 9
} pr_status;

typedef struct pr_config pr_config;
typedef struct pr_dataset pr_dataset;
typedef struct pr_results pr_results;
typedef struct pr_model pr_model;

/* Progress sink for long runs; `line` is valid only during the call. */
typedef void (*pr_progress_fn)(const char* line, void* user);

PR_API const char* pr_version(void);
PR_API const char* pr_last_error(void);
PR_API const char* pr_status_name(pr_status status);

/* ---- experiment configuration (JSON, see docs/config.md) ---- */

PR_API pr_status pr_config_load(const char* path, pr_config** out);
PR_API pr_status pr_config_parse(const char* json_text, pr_config** out);
/* Config with every default and the given method list (comma separated). */
PR_API pr_status pr_config_default(const char* methods, pr_config** out);
PR_API void pr_config_free(pr_config* config);
/* Also reseeds the dataset generator unless the config pins its own seed. */
PR_API pr_status pr_config_set_seed(pr_config* config, uint64_t seed);
PR_API pr_status pr_config_set_output_dir(pr_config* config, const char* dir);
PR_API pr_status pr_config_set_jobs(pr_config* config, size_t jobs);
/* Selects a generator ("lorentzian" or "ode") with its default sizes. */
PR_API pr_status pr_config_set_generator(pr_config* config, const char* name);
/* Copies the output directory into `buf` (NUL-terminated, truncated to `size`). */
PR_API size_t pr_config_output_dir(const pr_config* config, char* buf, size_t size);

/* ---- datasets ---- */

/* Generates (or loads, for file-backed configs) the configured train/test pair. */
PR_API pr_status pr_dataset_from_config(const pr_config* config, pr_dataset** train, pr_dataset** test);
PR_API pr_status pr_dataset_load(const char* path, pr_dataset** out);
PR_API pr_status pr_dataset_save(const pr_dataset* data, const char* path);
PR_API void pr_dataset_free(pr_dataset* data);
PR_API size_t pr_dataset_num_samples(const pr_dataset* data);
PR_API size_t pr_dataset_num_freqs(const pr_dataset* data);
/* Copies the frequency grid (num_freqs values). */
PR_API pr_status pr_dataset_omegas(const pr_dataset* data, double* out);
/* Copies one sample as separate real and imaginary arrays (num_freqs each). */
PR_API pr_status pr_dataset_sample(const pr_dataset* data, size_t row, double* re, double* im);

/* ---- experiments ---- */

/* Full sweep over sizes, methods and seeds. `progress` may be NULL. */
PR_API pr_status pr_experiment_run(const pr_config* config, pr_progress_fn progress, void* user, pr_results** out);
/* Writes results.csv, plot.svg and timings.csv into the config's output directory. */
PR_API pr_status pr_experiment_write(const pr_config* config, const pr_results* results);
/* Runs the config's piecewise (segments x roots) sweep, writing heatmap.csv
 * and heatmap.svg into the output directory. PR_ERR_INVALID_ARGUMENT when
 * the config has no such block. */
PR_API pr_status pr_piecewise_sweep_run(const pr_config* config, pr_progress_fn progress, void* user);
PR_API int pr_config_has_piecewise_sweep(const pr_config* config);

/* One method at one training size and seed. For bpnn, piecewise-bpnn and
 * linear-bp `model` (if non-NULL) receives the trained model; other methods
 * set it to NULL. */
PR_API pr_status pr_train(const pr_config* config, const char* method, size_t train_size, uint64_t seed,
                          pr_results** rows, pr_model** model);

PR_API pr_status pr_results_load_csv(const char* path, pr_results** out);
PR_API pr_status pr_results_save_csv(const pr_results* results, const char* path);
PR_API pr_status pr_results_save_svg(const pr_results* results, const char* path, const char* title);
PR_API size_t pr_results_num_rows(const pr_results* results);
/* Best MSE of one row; NaN for failed rows. */
PR_API double pr_results_best_mse(const pr_results* results, size_t row);
PR_API void pr_results_free(pr_results* results);

/* ---- trained BPNN models ---- */

PR_API pr_status pr_model_save(const pr_model* model, const char* path);
PR_API pr_status pr_model_load(const char* path, pr_model** out);
PR_API size_t pr_model_num_freqs(const pr_model* model);
/* Reconstructs a spectrum from `n` magnitudes on the model's grid. */
PR_API pr_status pr_model_predict(const pr_model* model, const double* magnitudes, size_t n, double* re, double* im);
PR_API void pr_model_free(pr_model* model);

#ifdef __cplusplus
}
#endif

#endif /* PHASERET_PHASERET_H */

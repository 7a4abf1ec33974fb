/* repaint C API: opaque handles, integer error codes, JSON-string results.
 *
 * Every function returns REPAINT_OK (0) on success or an error code below.
 * String results are heap-allocated JSON/text; release them with
 * repaint_string_free(). repaint_last_error(ctx) returns the message of the
 * most recent failing call on that handle (pass NULL for context-free
 * functions; the message is then thread-local).
 */
#ifndef REPAINT_CAPI_H
#define REPAINT_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

#define REPAINT_OK 0
#define REPAINT_ERR_CONFIG 1
#define REPAINT_ERR_VALIDATION 2
#define REPAINT_ERR_IO 3
#define REPAINT_ERR_MANIFEST 4
#define REPAINT_ERR_BACKEND_UNAVAILABLE 5
#define REPAINT_ERR_SCHEMA_VIOLATION 6
#define REPAINT_ERR_PROTOCOL 7
#define REPAINT_ERR_DEGENERATE_EMBEDDING 8
#define REPAINT_ERR_DEGENERATE_SCENE 9
#define REPAINT_ERR_EMPTY_ITERATION 10
#define REPAINT_ERR_AGGREGATE 11
#define REPAINT_ERR_INSUFFICIENT_DATA 12
#define REPAINT_ERR_BUILD 13
#define REPAINT_ERR_ENCODING 14
#define REPAINT_ERR_RUN 15
#define REPAINT_ERR_ARGUMENT 16
#define REPAINT_ERR_UNKNOWN 99

typedef struct repaint_ctx repaint_ctx;

const char* repaint_version(void);

/* Configuration precedence: defaults < config file < REPAINT_* environment
 * (when use_env != 0) < overrides_json. Either path argument may be NULL. */
int repaint_ctx_create(const char* config_path, const char* overrides_json, int use_env,
                       repaint_ctx** out_ctx);
void repaint_ctx_destroy(repaint_ctx* ctx);

const char* repaint_last_error(const repaint_ctx* ctx);
void repaint_string_free(char* s);

int repaint_resolved_config(repaint_ctx* ctx, char** out_json);

/* Stage 1 only: builds the understanding tree and the initial prompt.
 * Result: {"run_id", "run_dir", "iut", "initial_prompt", "warnings"} */
int repaint_understand(repaint_ctx* ctx, const char* image_path, const char* run_id,
                       char** out_json);

/* Full image-regeneration pipeline for one reference image.
 * Result: {"run_id", "run_dir", "result"} */
int repaint_regenerate(repaint_ctx* ctx, const char* image_path, const char* run_id, int resume,
                       char** out_json);

/* Batch run over a manifest; emits report files into the run directory.
 * Result: {"run_id", "run_dir", "summary", "report"} */
int repaint_bench(repaint_ctx* ctx, const char* manifest_path, const char* run_id, int resume,
                  char** out_json);

/* Aggregates one or more finished bench runs (JSON array of directories) into
 * report files under out_dir; optional human-study CSV adds rank correlation
 * on the chosen metric ("gpt_per" or "gpt_con"). */
int repaint_report(repaint_ctx* ctx, const char* bench_dirs_json, const char* humans_csv,
                   const char* metric, const char* out_dir, char** out_json);

/* Rank correlation between a report.csv column and the human study. Writes
 * correlation.json to out_path when given. */
int repaint_correlate(repaint_ctx* ctx, const char* report_csv, const char* humans_csv,
                      const char* metric, const char* out_path, char** out_json);

/* Backend capability probe. */
int repaint_doctor(repaint_ctx* ctx, char** out_json);

int repaint_cache_stats(repaint_ctx* ctx, char** out_json);
int repaint_cache_gc(repaint_ctx* ctx, long long max_age_seconds, char** out_json);

/* Context-free helpers. */
int repaint_validate_iut(const char* iut_json, char** out_report_json);
int repaint_canonical_json(const char* json_text, char** out_canonical);
int repaint_cosine_similarity(const double* a, const double* b, int dim, double* out);
int repaint_spearman(const double* a, const double* b, int n, double* out);
int repaint_kendall(const double* a, const double* b, int n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* REPAINT_CAPI_H */

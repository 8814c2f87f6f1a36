/* C interface to the CASA-SDR evaluation library.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_destroy function. Functions that can fail return a casa_status;
 * on failure casa_last_error() describes the problem for the calling thread.
 */
#ifndef CASA_SDR_H
#define CASA_SDR_H

#include <stddef.h>
#include <stdint.h>

#if defined(CASA_SDR_BUILDING)
#define CASA_SDR_API __attribute__((visibility("default")))
#else
#define CASA_SDR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum casa_status {
  CASA_OK = 0,
  CASA_ERROR_DIMENSION = 1, /* length, rate or count mismatch */
  CASA_ERROR_DOMAIN = 2,    /* undefined quantity, e.g. silent reference */
  CASA_ERROR_CONFIG = 3,    /* inconsistent metric configuration */
  CASA_ERROR_PARAMETER = 4, /* argument out of range */
  CASA_ERROR_FORMAT = 5,    /* malformed WAV, manifest or report */
  CASA_ERROR_IO = 6,
  CASA_ERROR_INTERNAL = 7
} casa_status;

typedef enum casa_variant { CASA_VARIANT_CLASSICAL = 0, CASA_VARIANT_CA = 1, CASA_VARIANT_CASA = 2 } casa_variant;
typedef enum casa_penalty { CASA_PENALTY_NONE = 0, CASA_PENALTY_INPUT = 1, CASA_PENALTY_OUTPUT = 2 } casa_penalty;
typedef enum casa_application { CASA_APPLY_NON_TP = 0, CASA_APPLY_ERROR_BASED = 1 } casa_application;
typedef enum casa_tag { CASA_TAG_TP = 0, CASA_TAG_FN = 1, CASA_TAG_FP = 2, CASA_TAG_FN_PLUS_FP = 3 } casa_tag;

typedef struct casa_signal casa_signal;
typedef struct casa_report casa_report;
typedef struct casa_sweep casa_sweep;

CASA_SDR_API const char* casa_last_error(void);
CASA_SDR_API const char* casa_status_string(casa_status status);

/* ---- signals ---------------------------------------------------------- */

CASA_SDR_API casa_status casa_signal_create(const double* samples, size_t length, uint32_t sample_rate,
                                            casa_signal** out);
/* channel < 0 accepts mono files only. */
CASA_SDR_API casa_status casa_signal_load(const char* path, int channel, casa_signal** out);
/* float32 != 0 writes IEEE float samples, otherwise 16-bit PCM. */
CASA_SDR_API casa_status casa_signal_save(const casa_signal* signal, const char* path, int float32);
CASA_SDR_API size_t casa_signal_length(const casa_signal* signal);
CASA_SDR_API uint32_t casa_signal_sample_rate(const casa_signal* signal);
CASA_SDR_API const double* casa_signal_samples(const casa_signal* signal);
CASA_SDR_API void casa_signal_destroy(casa_signal* signal);

CASA_SDR_API casa_status casa_sdr(const casa_signal* estimate, const casa_signal* reference, double cap_db,
                                  double* out_db);

/* ---- metrics ---------------------------------------------------------- */

typedef struct casa_metric_config {
  casa_variant variant;
  casa_penalty penalty;
  casa_application application;
  double sdr_cap_db;
} casa_metric_config;

/* CASA variant, no penalty, non-TP application, 100 dB cap. */
CASA_SDR_API void casa_metric_config_init(casa_metric_config* config);

/* label NULL or "none" is the None-label. */
typedef struct casa_labeled_source {
  const casa_signal* signal;
  const char* label;
} casa_labeled_source;

/* mixture may be NULL unless the input-level penalty is requested. */
CASA_SDR_API casa_status casa_evaluate(const casa_labeled_source* predictions, size_t n_predictions,
                                       const casa_labeled_source* references, size_t n_references,
                                       const casa_signal* mixture, const casa_metric_config* config,
                                       casa_report** out);

/* cap_override may be NULL; otherwise it replaces the manifest's cap_db. */
CASA_SDR_API casa_status casa_evaluate_manifest(const char* manifest_path, const double* cap_override,
                                                casa_report** out);

typedef struct casa_source_record {
  long reference_index; /* -1 when absent */
  const char* reference_label; /* NULL when absent; owned by the report */
  long estimate_index;
  const char* estimate_label;
  casa_tag tag;
  int has_raw_sdr;
  double raw_sdr_db;
  double penalty_db;
  double contribution_db;
} casa_source_record;

CASA_SDR_API double casa_report_final_db(const casa_report* report);
CASA_SDR_API size_t casa_report_denominator(const casa_report* report);
CASA_SDR_API void casa_report_counts(const casa_report* report, size_t* tp, size_t* fn, size_t* fp);
CASA_SDR_API size_t casa_report_source_count(const casa_report* report);
CASA_SDR_API casa_status casa_report_source(const casa_report* report, size_t index, casa_source_record* out);
/* Zero pairs for the CA variant, which has no signal assignment. */
CASA_SDR_API size_t casa_report_pair_count(const casa_report* report);
CASA_SDR_API casa_status casa_report_pair(const casa_report* report, size_t index, size_t* estimate,
                                          size_t* reference);
CASA_SDR_API casa_status casa_report_write(const casa_report* report, const char* path);
CASA_SDR_API void casa_report_destroy(casa_report* report);

/* ---- synthetic studies ------------------------------------------------ */

typedef struct casa_study_params {
  const char* name; /* "classification", "contamination" or "penalties" */
  uint64_t seed;
  const double* snrs_db; /* classification uses the first entry; NULL selects the defaults */
  size_t n_snrs;
  const double* alphas; /* contamination grid; NULL selects 0:0.05:1 */
  size_t n_alphas;
  size_t n_scenes;
  size_t n_targets;
  size_t n_interferences;
  double duration_s;
  uint32_t sample_rate;
  double sdr_cap_db;
} casa_study_params;

CASA_SDR_API void casa_study_params_init(casa_study_params* params);
CASA_SDR_API casa_status casa_study_run(const casa_study_params* params, casa_sweep** out);
CASA_SDR_API size_t casa_sweep_row_count(const casa_sweep* sweep);
CASA_SDR_API casa_status casa_sweep_write_csv(const casa_sweep* sweep, const char* path);
/* Text table owned by the sweep. */
CASA_SDR_API const char* casa_sweep_summary(const casa_sweep* sweep);
CASA_SDR_API void casa_sweep_destroy(casa_sweep* sweep);

/* Writes references, predictions, mixture and a manifest for one synthetic
 * scene, with an optional labelling error applied to the predictions. */
typedef struct casa_scene_export_params {
  uint64_t seed;
  size_t n_targets;
  size_t n_interferences;
  double duration_s;
  uint32_t sample_rate;
  double snr_db;
  const char* error; /* "none", "deletion", "substitution" or "swapping" */
  int float32;
} casa_scene_export_params;

CASA_SDR_API void casa_scene_export_params_init(casa_scene_export_params* params);
CASA_SDR_API casa_status casa_export_scene(const casa_scene_export_params* params, const char* directory);

#ifdef __cplusplus
}
#endif

#endif /* CASA_SDR_H */

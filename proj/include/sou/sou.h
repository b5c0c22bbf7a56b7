#ifndef SOU_SOU_H
#define SOU_SOU_H

/* C interface to the sum-of-Ornstein-Uhlenbeck toolkit.
 *
 * Every fallible call returns a sou_status; on failure sou_last_error()
 * describes the problem (thread-local, valid until the next call on the
 * same thread). Strings returned through char** are owned by the caller
 * and released with sou_string_free. Handles are immutable once created
 * and may be shared across threads. */

#include <stddef.h>
#include <stdint.h>

#if defined(SOU_BUILDING_LIBRARY)
#define SOU_API __attribute__((visibility("default")))
#else
#define SOU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sou_status {
  SOU_OK = 0,
  SOU_INVALID_ARGUMENT = 1,
  SOU_NUMERIC_FAILURE = 2,
  SOU_RESOURCE_LIMIT = 3,
  SOU_IO_ERROR = 4,
  SOU_INTERNAL_ERROR = 5
} sou_status;

typedef enum sou_regime { SOU_REGIME_SHORT = 0, SOU_REGIME_INTERMEDIATE = 1, SOU_REGIME_LONG = 2 } sou_regime;

typedef struct sou_graph sou_graph;
typedef struct sou_model sou_model;
typedef struct sou_curve sou_curve;

typedef struct sou_fit {
  double nu;
  double intercept;
  double t_lo;
  double t_hi;
  double stderr_nu;
  double r_squared;
  sou_regime regime;
  size_t n_points;
} sou_fit;

SOU_API const char* sou_version(void);
SOU_API const char* sou_last_error(void);
SOU_API void sou_string_free(char* s);

/* Graphs. Specs are JSON documents, e.g. {"family":"rouse","n":8,"kappa":1}. */
SOU_API sou_status sou_graph_from_spec(const char* spec_json, sou_graph** out);
SOU_API void sou_graph_free(sou_graph* g);
SOU_API size_t sou_graph_n_vertices(const sou_graph* g);
SOU_API sou_status sou_graph_to_json(const sou_graph* g, char** out);
/* Row-major Laplacian; `out` must hold n_vertices^2 doubles. */
SOU_API sou_status sou_graph_laplacian(const sou_graph* g, double* out, size_t capacity);

/* Spectrum document {values, multiplicities}. `method` is "auto", "dense" or
 * "closed"; when shape_spec_json is non-null the document also carries the
 * sup distance between the indexed spectrum and the shape. */
SOU_API sou_status sou_spectrum_json(const char* graph_spec_json, const char* method, const char* shape_spec_json,
                                     char** out);

/* Models. */
SOU_API sou_status sou_model_from_spec(const char* spec_json, sou_model** out);
SOU_API sou_status sou_model_from_json(const char* model_json, sou_model** out);
SOU_API void sou_model_free(sou_model* m);
SOU_API sou_status sou_model_to_json(const sou_model* m, char** out);
SOU_API sou_status sou_model_acf(const sou_model* m, double t, double s, double* out);
SOU_API sou_status sou_model_windows_json(const sou_model* m, char** out);

/* MSD curves. */
SOU_API sou_status sou_msd_finite(const sou_model* m, const double* times, size_t n, sou_curve** out);
/* measure_spec_json may be null for the Lebesgue measure. */
SOU_API sou_status sou_msd_limit(const char* shape_spec_json, const char* measure_spec_json, const double* times,
                                 size_t n, sou_curve** out);
SOU_API sou_status sou_msd_simulate(const sou_model* m, const double* times, size_t n, size_t n_paths, uint64_t seed,
                                    size_t chunk_paths, sou_curve** out);
/* Full ensemble as CSV path_id,t,x. */
SOU_API sou_status sou_sample_paths_csv(const sou_model* m, const double* times, size_t n, size_t n_paths,
                                        uint64_t seed, char** out);

SOU_API void sou_curve_free(sou_curve* c);
SOU_API size_t sou_curve_size(const sou_curve* c);
SOU_API int sou_curve_has_stderr(const sou_curve* c);
/* Copies sou_curve_size() entries into each non-null buffer. */
SOU_API sou_status sou_curve_data(const sou_curve* c, double* times, double* values, double* std_errors);
/* header_lines_json: optional JSON array of strings written as '#' lines. */
SOU_API sou_status sou_curve_to_csv(const sou_curve* c, const char* header_lines_json, char** out);
SOU_API sou_status sou_curve_to_json(const sou_curve* c, char** out);
SOU_API sou_status sou_curve_from_csv(const char* text, sou_curve** out);

/* Exponent fits. */
SOU_API sou_status sou_fit_exponent(const sou_curve* c, double t_lo, double t_hi, sou_regime regime, sou_fit* out);
SOU_API sou_status sou_fit_to_json(const sou_fit* fit, char** out);

/* Experiments. When out_dir is non-null the msd and fit files are written
 * there. The result document carries summary, family, fits and warnings. */
SOU_API sou_status sou_run_config(const char* config_json, const char* out_dir, char** result_json);
/* options_json: {"only": [...], "seed": 7, "mc_paths": 10000}, or null. */
SOU_API sou_status sou_report(const char* options_json, char** result_json, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif

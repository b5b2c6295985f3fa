/* C interface to the tgv1d solver. Every call returns a status code; on
 * failure tgv1d_last_error() describes the problem (thread-local). Strings
 * handed out by the library are released with tgv1d_string_free. */
#ifndef TGV1D_H
#define TGV1D_H

#include <stddef.h>

#if defined(_WIN32)
#define TGV1D_API __declspec(dllexport)
#else
#define TGV1D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  TGV1D_OK = 0,
  TGV1D_ERR_INVALID_ARGUMENT = 1,
  TGV1D_ERR_DOMAIN = 2,
  TGV1D_ERR_CONFIG = 3,
  TGV1D_ERR_IO = 4,
  TGV1D_ERR_SOLVER = 5,
  TGV1D_ERR_ORACLE = 6,
  TGV1D_ERR_INTERNAL = 7
} tgv1d_status;

typedef struct tgv1d_function tgv1d_function;
typedef struct tgv1d_run tgv1d_run;

TGV1D_API const char* tgv1d_version(void);
TGV1D_API const char* tgv1d_last_error(void);
TGV1D_API const char* tgv1d_status_name(tgv1d_status status);
TGV1D_API void tgv1d_string_free(char* s);

/* Sparse functions */
TGV1D_API tgv1d_status tgv1d_function_from_json(const char* json, tgv1d_function** out);
TGV1D_API tgv1d_status tgv1d_function_load(const char* path, tgv1d_function** out);
TGV1D_API void tgv1d_function_free(tgv1d_function* f);
TGV1D_API tgv1d_status tgv1d_function_eval(const tgv1d_function* f, double x, double* out);
TGV1D_API tgv1d_status tgv1d_function_atom_count(const tgv1d_function* f, size_t* out);
TGV1D_API tgv1d_status tgv1d_function_to_json(const tgv1d_function* f, char** out);

/* {"closed_form"?: v, "upper": sum lambda, "oracle": v, "gap": g, ...} */
TGV1D_API tgv1d_status tgv1d_tgv_eval(const tgv1d_function* f, size_t grid_n, double tol,
                                      char** out_json);

/* Experiment runs */
TGV1D_API tgv1d_status tgv1d_run_from_config(const char* config_path, tgv1d_run** out);
TGV1D_API void tgv1d_run_free(tgv1d_run* run);
TGV1D_API tgv1d_status tgv1d_run_stationary(const tgv1d_run* run, int* out);
TGV1D_API tgv1d_status tgv1d_run_iterations(const tgv1d_run* run, int* out);
TGV1D_API tgv1d_status tgv1d_run_output_dir(const tgv1d_run* run, char** out);
TGV1D_API tgv1d_status tgv1d_run_solution(const tgv1d_run* run, tgv1d_function** out);
TGV1D_API tgv1d_status tgv1d_run_report_json(const tgv1d_run* run, char** out);
TGV1D_API tgv1d_status tgv1d_run_write_outputs(const tgv1d_run* run, const char* dir);

/* Counterexample fixture summary as JSON. */
TGV1D_API tgv1d_status tgv1d_counterexample(double lambda1, double lambda2, char** out_json);

/* CSV "x,p,P" for the solution against the measurements of the config. */
TGV1D_API tgv1d_status tgv1d_dump_duals(const char* solution_path, const char* config_path,
                                        size_t samples, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif

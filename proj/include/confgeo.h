/* C interface to the confgeo library. All strings are UTF-8. Functions that
 * return a status give 0 on success or a CG_E_* code; the message for the
 * last failure on the calling thread is available from cg_last_error(). */
#ifndef CONFGEO_H
#define CONFGEO_H

#include <stddef.h>
#include <stdint.h>

#if defined(CONFGEO_BUILDING_LIBRARY)
#define CG_API __attribute__((visibility("default")))
#else
#define CG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CG_OK = 0,
  CG_E_SYNTAX = 1,
  CG_E_UNKNOWN_IDENTIFIER,
  CG_E_DOMAIN,
  CG_E_DEGENERATE_METRIC,
  CG_E_SIGNATURE_MISMATCH,
  CG_E_VARIANCE_MISMATCH,
  CG_E_NULL_SEED,
  CG_E_DEGENERATE_FLAG,
  CG_E_DOMAIN_TOO_SMALL,
  CG_E_DIMENSION_TOO_LOW,
  CG_E_FRAME_NOT_ORTHONORMAL,
  CG_E_LORENTZIAN_UNSUPPORTED,
  CG_E_NOT_A_PLANE,
  CG_E_RANK_DEFICIENT,
  CG_E_DEGENERATE_INDUCED_METRIC,
  CG_E_NULL_NORMAL,
  CG_E_NOT_UMBILIC,
  CG_E_NON_CONSTANT_GAUGE,
  CG_E_AMBIENT_NOT_SELF_DUAL,
  CG_E_NO_NULL_VECTORS,
  CG_E_LEFT_DOMAIN,
  CG_E_STEP_FAILURE,
  CG_E_HYPOTHESIS_VIOLATED,
  CG_E_NOT_ISOTROPIC,
  CG_E_NOT_PREGEODESIC,
  CG_E_PARSE,
  CG_E_SCHEMA,
  CG_E_UNRESOLVED_REFERENCE,
  CG_E_INVALID_ARGUMENT,
  CG_E_IO,
  CG_E_INTERNAL = 99
};

typedef struct cg_manifest cg_manifest;
typedef struct cg_report cg_report;

typedef struct cg_run_options {
  const char* only; /* comma-separated check names, NULL for all */
  int has_seed;
  uint64_t seed;
  int fd;    /* -1 keeps the manifest setting */
  int order; /* 0 keeps the manifest setting */
  int jobs;  /* worker threads, 0 or 1 for serial */
} cg_run_options;

CG_API const char* cg_version(void);
CG_API const char* cg_error_name(int status);
CG_API const char* cg_last_error(void);

CG_API int cg_manifest_load(const char* path, cg_manifest** out);
CG_API int cg_manifest_load_string(const char* text, cg_manifest** out);
CG_API void cg_manifest_free(cg_manifest* manifest);

CG_API void cg_run_options_init(cg_run_options* options);
CG_API int cg_run_suite(const cg_manifest* manifest, const cg_run_options* options, cg_report** out);
CG_API int cg_report_exit_code(const cg_report* report);
CG_API char* cg_report_json(const cg_report* report);
CG_API char* cg_report_text(const cg_report* report);
CG_API char* cg_report_digest(const cg_report* report);
CG_API void cg_report_free(cg_report* report);

/* Writes one JSON line per sample and a closing status line. Returns 0 when
 * the integration reached the end, otherwise the failure code. */
CG_API int cg_trace_geodesic(const cg_manifest* manifest, const char* run, const char* out_path);

/* Curvature quantities of a chart at a point as a JSON document. im may be
 * NULL for real points. */
CG_API int cg_curvature_json(const cg_manifest* manifest, const char* chart, const double* re,
                             const double* im, size_t n, char** out);

CG_API void cg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

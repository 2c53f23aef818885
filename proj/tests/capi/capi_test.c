/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "confgeo.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kSphere =
    "{\"schema_version\": 1, \"settings\": {\"seed\": 3},"
    " \"charts\": [{\"name\": \"s3\", \"coordinates\": [\"x\", \"y\", \"z\"],"
    " \"metric\": [[\"4/(1+x^2+y^2+z^2)^2\", \"0\", \"0\"], [\"0\", \"4/(1+x^2+y^2+z^2)^2\", \"0\"],"
    " [\"0\", \"0\", \"4/(1+x^2+y^2+z^2)^2\"]],"
    " \"sample_points\": [[0.1, 0.2, 0.3], [-0.4, 0.1, 0.0]]}],"
    " \"checks\": [{\"name\": \"weyl3_vanish\"}, {\"name\": \"star_ricci_3d\"}, {\"name\": \"div_weyl\"}]}";

int main(void) {
  cg_manifest* m = NULL;
  cg_report* r = NULL;
  cg_run_options o;
  char* s = NULL;

  EXPECT(strlen(cg_version()) > 0);
  EXPECT(strcmp(cg_error_name(CG_E_SCHEMA), "SchemaError") == 0);

  EXPECT(cg_manifest_load_string("{\"schema_version\": 1, \"charts\": [], \"bogus\": 1}", &m) == CG_E_SCHEMA);
  EXPECT(m == NULL);
  EXPECT(strstr(cg_last_error(), "/bogus") != NULL);
  EXPECT(cg_manifest_load_string("{", &m) == CG_E_PARSE);
  EXPECT(cg_manifest_load("/nonexistent.json", &m) == CG_E_IO);

  EXPECT(cg_manifest_load_string(kSphere, &m) == CG_OK);
  if (!m) return 1;

  cg_run_options_init(&o);
  o.only = "nope";
  EXPECT(cg_run_suite(m, &o, &r) == CG_E_INVALID_ARGUMENT);

  cg_run_options_init(&o);
  EXPECT(cg_run_suite(m, &o, &r) == CG_OK);
  EXPECT(cg_report_exit_code(r) == 0);
  s = cg_report_json(r);
  EXPECT(s && strstr(s, "\"verdict\":\"skipped\"") != NULL);
  EXPECT(s && strstr(s, "\"verdict\":\"pass\"") != NULL);
  cg_string_free(s);
  s = cg_report_text(r);
  EXPECT(s && strstr(s, "weyl3_vanish") != NULL);
  cg_string_free(s);
  {
    char* d1 = cg_report_digest(r);
    cg_report* r2 = NULL;
    char* d2;
    o.jobs = 2;
    EXPECT(cg_run_suite(m, &o, &r2) == CG_OK);
    d2 = cg_report_digest(r2);
    EXPECT(d1 && d2 && strlen(d1) == 16 && strcmp(d1, d2) == 0);
    cg_string_free(d1);
    cg_string_free(d2);
    cg_report_free(r2);
  }
  cg_report_free(r);

  {
    const double x[3] = {0.1, 0.2, 0.3};
    EXPECT(cg_curvature_json(m, "s3", x, NULL, 3, &s) == CG_OK);
    EXPECT(s && strstr(s, "scalar_curvature") != NULL);
    cg_string_free(s);
    EXPECT(cg_curvature_json(m, "s4", x, NULL, 3, &s) == CG_E_UNRESOLVED_REFERENCE);
    EXPECT(cg_curvature_json(m, "s3", x, NULL, 2, &s) == CG_E_INVALID_ARGUMENT);
  }
  EXPECT(cg_trace_geodesic(m, "missing", "/dev/null") == CG_E_UNRESOLVED_REFERENCE);

  cg_manifest_free(m);
  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("capi: all checks passed\n");
  return failures ? 1 : 0;
}

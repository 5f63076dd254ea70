#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cdkdv/cdkdv.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static void algebra(void) {
  cdkdv_algebra* h = NULL;
  EXPECT(cdkdv_algebra_create(2, &h) == CDKDV_OK);
  EXPECT(cdkdv_algebra_level(h) == 2);
  EXPECT(cdkdv_algebra_dim(h) == 4);

  /* i j = k, j i = -k */
  int sign = 0;
  size_t index = 0;
  EXPECT(cdkdv_algebra_basis_product(h, 1, 2, &sign, &index) == CDKDV_OK);
  EXPECT(sign == 1 && index == 3);
  EXPECT(cdkdv_algebra_basis_product(h, 2, 1, &sign, &index) == CDKDV_OK);
  EXPECT(sign == -1 && index == 3);
  EXPECT(cdkdv_algebra_basis_product(h, 4, 1, &sign, &index) == CDKDV_ERR_DIMENSION);

  /* (1 + 2i + 3j + 4k)(5 + 6i + 7j + 8k) = -60 + 12i + 30j + 24k */
  const double x[4] = {1, 2, 3, 4}, y[4] = {5, 6, 7, 8};
  double z[4];
  EXPECT(cdkdv_algebra_multiply(h, x, y, z) == CDKDV_OK);
  EXPECT(z[0] == -60 && z[1] == 12 && z[2] == 30 && z[3] == 24);

  char* json = NULL;
  EXPECT(cdkdv_algebra_audit(h, "commutative", &json) == CDKDV_OK);
  EXPECT(json && strstr(json, "\"holds\": false"));
  cdkdv_string_free(json);
  json = NULL;
  EXPECT(cdkdv_algebra_audit(h, "triality", &json) == CDKDV_ERR_INVALID_ARGUMENT);
  EXPECT(json == NULL);
  EXPECT(strlen(cdkdv_last_error()) > 0);

  char* csv = NULL;
  EXPECT(cdkdv_algebra_table_csv(h, &csv) == CDKDV_OK);
  EXPECT(csv && strncmp(csv, "i,e0,e1,e2,e3", 13) == 0);
  cdkdv_string_free(csv);
  cdkdv_algebra_destroy(h);

  cdkdv_algebra* bad = NULL;
  EXPECT(cdkdv_algebra_create(9, &bad) == CDKDV_ERR_LEVEL);
  EXPECT(bad == NULL);
  EXPECT(strcmp(cdkdv_status_name(CDKDV_ERR_LEVEL), "level") == 0);

  cdkdv_algebra* sed = NULL;
  EXPECT(cdkdv_algebra_create(4, &sed) == CDKDV_OK);
  EXPECT(cdkdv_algebra_zero_divisors(sed, 3, &json) == CDKDV_OK);
  EXPECT(json && strstr(json, "e"));
  cdkdv_string_free(json);
  cdkdv_algebra_destroy(sed);
}

static void config_and_run(void) {
  cdkdv_config* cfg = NULL;
  EXPECT(cdkdv_config_parse("{not json", &cfg) == CDKDV_ERR_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(cdkdv_config_parse("{\"level\":3,\"N\":64,\"L\":20,\"dt\":1e-3,\"t_end\":0.1,"
                            "\"equation\":\"cdkdv\",\"v\":[0,1,0]}",
                            &cfg) == CDKDV_ERR_DIMENSION);

  const char* text =
      "{\"level\":2,\"N\":64,\"L\":30,\"dt\":1e-3,\"t_end\":0.05,\"equation\":\"cdkdv\","
      "\"v\":[0,0.5,0,0],\"record_every\":10,"
      "\"initial\":{\"kind\":\"soliton\",\"lambda\":1,\"alpha\":[1,0.3,0,0]}}";
  EXPECT(cdkdv_config_parse(text, &cfg) == CDKDV_OK);
  EXPECT(cdkdv_config_set_seed(cfg, 42) == CDKDV_OK);
  EXPECT(cdkdv_config_seed(cfg) == 42);

  cdkdv_run* run = NULL;
  EXPECT(cdkdv_simulate(cfg, &run) == CDKDV_OK);
  EXPECT(cdkdv_run_records(run) == 6);
  EXPECT(cdkdv_run_points(run) == 64);
  EXPECT(cdkdv_run_dim(run) == 4);
  double t = -1;
  EXPECT(cdkdv_run_time(run, 5, &t) == CDKDV_OK);
  EXPECT(fabs(t - 0.05) < 1e-12);
  EXPECT(cdkdv_run_time(run, 6, &t) == CDKDV_ERR_INVALID_ARGUMENT);

  double* snap = malloc(sizeof(double) * 64 * 4);
  EXPECT(cdkdv_run_snapshot(run, 0, snap) == CDKDV_OK);
  double peak = 0;
  for (int j = 0; j < 64; ++j) peak = fmax(peak, snap[j]);
  EXPECT(peak > 1.0);
  free(snap);

  char* report = NULL;
  EXPECT(cdkdv_run_report(run, &report) == CDKDV_OK);
  EXPECT(report && strstr(report, "\"blew_up\": false"));
  cdkdv_string_free(report);

  char *a = NULL, *b = NULL;
  cdkdv_run* again = NULL;
  EXPECT(cdkdv_simulate(cfg, &again) == CDKDV_OK);
  EXPECT(cdkdv_run_csv(run, &a) == CDKDV_OK);
  EXPECT(cdkdv_run_csv(again, &b) == CDKDV_OK);
  EXPECT(a && b && strcmp(a, b) == 0);
  cdkdv_string_free(a);
  cdkdv_string_free(b);
  cdkdv_run_destroy(again);
  cdkdv_run_destroy(run);
  cdkdv_config_destroy(cfg);

  /* A large step blows up and still returns the partial run. */
  EXPECT(cdkdv_config_parse("{\"level\":0,\"N\":64,\"L\":20,\"dt\":2e-3,\"t_end\":50,\"equation\":\"cdkdv\","
                            "\"record_every\":1,\"initial\":{\"kind\":\"profile\",\"coeffs\":[200],"
                            "\"width\":0.5}}",
                            &cfg) == CDKDV_OK);
  if (cfg) {
    run = NULL;
    const cdkdv_status s = cdkdv_simulate(cfg, &run);
    EXPECT(s == CDKDV_ERR_BLOWUP);
    EXPECT(run != NULL && cdkdv_run_records(run) >= 1);
    cdkdv_run_destroy(run);
    cdkdv_config_destroy(cfg);
  }
}

static void solitons_and_symmetry(void) {
  char* json = NULL;
  EXPECT(cdkdv_soliton_certify("{\"lambda\":1,\"alpha\":[1,0.2,0.1,0,0,0,0,0.3]}", &json) == CDKDV_OK);
  EXPECT(json && strstr(json, "\"passed\": true"));
  cdkdv_string_free(json);
  json = NULL;
  EXPECT(cdkdv_soliton_certify("{\"lambda\":-1,\"alpha\":[1,0]}", &json) != CDKDV_OK);

  const double e1[8] = {0, 1, 0, 0, 0, 0, 0, 0};
  EXPECT(cdkdv_symmetry_stabilizer(e1, 8, &json) == CDKDV_OK);
  EXPECT(json && strstr(json, "\"dimension\": 8"));
  cdkdv_string_free(json);
  EXPECT(cdkdv_symmetry_stabilizer(e1, 4, &json) == CDKDV_ERR_DIMENSION);

  char* kinds = NULL;
  EXPECT(cdkdv_verify_kinds(&kinds) == CDKDV_OK);
  EXPECT(kinds && strstr(kinds, "symmetry"));
  cdkdv_string_free(kinds);
  int passed = 0;
  EXPECT(cdkdv_verify("symmetry", NULL, &json, &passed) == CDKDV_OK);
  EXPECT(passed == 1);
  cdkdv_string_free(json);
  EXPECT(cdkdv_verify("nope", NULL, &json, &passed) == CDKDV_ERR_CONFIG);
}

int main(void) {
  EXPECT(cdkdv_version() && strlen(cdkdv_version()) > 0);
  algebra();
  config_and_run();
  solitons_and_symmetry();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}

#ifndef PFORM_PFORM_H
#define PFORM_PFORM_H

#include <stddef.h>

#if defined(PFORM_BUILDING)
#define PFORM_API __attribute__((visibility("default")))
#else
#define PFORM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes. Nonzero values match the library's internal error codes. */
enum {
  PFORM_OK = 0,
  PFORM_ERR_INVALID_ARGUMENT = 1,
  PFORM_ERR_DEGREE_MISMATCH = 2,
  PFORM_ERR_CFL_VIOLATION = 3,
  PFORM_ERR_TOPOLOGICAL_OBSTRUCTION = 4,
  PFORM_ERR_PRECONDITION = 5,
  PFORM_ERR_SOLVER_FAILURE = 6,
  PFORM_ERR_MODE_LEAKAGE = 7,
  PFORM_ERR_AMPLITUDE_GUARD = 8,
  PFORM_ERR_CONFIG = 9,
  PFORM_ERR_IO = 10,
  PFORM_ERR_INTERNAL = 99
};

typedef struct pform_config pform_config;
typedef struct pform_report pform_report;

/* Message for the last failing call on this thread ("" if none). */
PFORM_API const char* pform_last_error(void);
PFORM_API const char* pform_version(void);

/* Strings returned through char** are owned by the caller. */
PFORM_API void pform_string_free(char* s);

PFORM_API int pform_config_default(pform_config** out);
PFORM_API int pform_config_load(const char* path, pform_config** out);
PFORM_API int pform_config_parse(const char* text, pform_config** out);
PFORM_API int pform_config_set_suite(pform_config* cfg, const char* suite);
PFORM_API int pform_config_set_seed(pform_config* cfg, unsigned long long seed);
/* Changing d resets L to 2 pi per axis and the degrees to all of 0..d. */
PFORM_API int pform_config_set_dimension(pform_config* cfg, int d);
PFORM_API int pform_config_set_resolution(pform_config* cfg, int N);
PFORM_API int pform_config_text(const pform_config* cfg, char** out);
PFORM_API void pform_config_free(pform_config* cfg);

PFORM_API int pform_run(const pform_config* cfg, pform_report** out);
PFORM_API int pform_report_all_pass(const pform_report* r);
PFORM_API size_t pform_report_size(const pform_report* r);
PFORM_API int pform_report_check(const pform_report* r, size_t i, const char** name,
                                 double* residual, double* tolerance, int* pass);
PFORM_API int pform_report_json(const pform_report* r, int timings, char** out);
PFORM_API int pform_report_csv(const pform_report* r, int timings, char** out);
PFORM_API void pform_report_free(pform_report* r);

PFORM_API size_t pform_check_count(void);
PFORM_API int pform_check_info(size_t i, const char** name, const char** suite,
                               const char** anchor, double* tolerance);

/* CSV table m,lambda,omega,harmonic for degree p on the configured lattice. */
PFORM_API int pform_dump_modes(const pform_config* cfg, int p, char** out);

/* Seeded Lorenz-gauge data of degree p, evolved to the given slice, written
   as <base>.csv and <base>.json. */
PFORM_API int pform_export_cauchy(const pform_config* cfg, int p, int slice, const char* base);

#ifdef __cplusplus
}
#endif

#endif

/*
 * C interface to the HHO solver library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every function that can fail returns an hho_status; on failure the message
 * is available from hho_last_error() until the next failing call on the same
 * thread.
 */

#ifndef HHO_H
#define HHO_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(HHO_BUILDING_LIBRARY)
#    define HHO_API __declspec(dllexport)
#  else
#    define HHO_API __declspec(dllimport)
#  endif
#else
#  define HHO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hho_status {
  HHO_OK = 0,
  HHO_ERR_INVALID_ARGUMENT = 1,
  HHO_ERR_IO = 2,
  HHO_ERR_MESH = 3,
  HHO_ERR_NUMERICAL = 4,
  HHO_ERR_INVALID_PROBLEM = 5,
  HHO_ERR_INTERNAL = 6
} hho_status;

typedef struct hho_mesh hho_mesh;
typedef struct hho_study hho_study;

HHO_API const char* hho_version(void);
HHO_API const char* hho_last_error(void);
HHO_API const char* hho_status_string(hho_status status);

/* Meshes */

/* family: "triangular", "cartesian", "kershaw" or "hexagonal"; level >= 0. */
HHO_API hho_status hho_mesh_generate(const char* family, int level, hho_mesh** out);
HHO_API hho_status hho_mesh_read(const char* path, hho_mesh** out);
HHO_API hho_status hho_mesh_write(const hho_mesh* mesh, const char* path);
HHO_API hho_status hho_mesh_counts(const hho_mesh* mesh, size_t* n_vertices, size_t* n_faces, size_t* n_cells);
HHO_API hho_status hho_mesh_diameter(const hho_mesh* mesh, double* h);
HHO_API void hho_mesh_free(hho_mesh* mesh);

/* Convergence studies */

typedef enum hho_weight_policy {
  HHO_WEIGHTS_CURRENT_ITERATE = 0,
  HHO_WEIGHTS_UPPER_BOUND = 1
} hho_weight_policy;

typedef struct hho_study_config {
  const char* problem;     /* "poisson", "nonselfadjoint" or "quasilinear" */
  const char* family;      /* ignored when mesh_path is set */
  const int* degrees;
  size_t n_degrees;
  int level_min;
  int level_max;
  double tol;
  int max_iter;
  int weight_policy;       /* hho_weight_policy */
  const char* mesh_path;   /* NULL or "" to generate meshes */
} hho_study_config;

/* Fills defaults: quasilinear, cartesian, no degrees, levels 0..0, tol 1e-10, 25 iterations. */
HHO_API void hho_study_config_init(hho_study_config* config);

typedef struct hho_study_row {
  const char* family;  /* owned by the study */
  int k;
  int level;
  double h;
  size_t ndof;
  double error;
  double rate;         /* valid when has_rate != 0 */
  int has_rate;
  int iterations;      /* quasilinear only */
  int converged;
} hho_study_row;

HHO_API hho_status hho_study_run(const hho_study_config* config, hho_study** out);
HHO_API size_t hho_study_size(const hho_study* study);
HHO_API hho_status hho_study_row_get(const hho_study* study, size_t index, hho_study_row* row);
HHO_API hho_status hho_study_write_csv(const hho_study* study, const char* path);
HHO_API hho_status hho_study_write_plotdata(const hho_study* study, const char* path);
HHO_API void hho_study_free(hho_study* study);

/* Check suites */

typedef enum hho_suite {
  HHO_SUITE_PROPERTIES = 0,
  HHO_SUITE_ACCEPTANCE = 1
} hho_suite;

typedef void (*hho_check_callback)(const char* name, int passed, const char* detail, void* user);

/* Runs a suite, reporting each check through callback (may be NULL). */
HHO_API hho_status hho_check_run(int suite, unsigned long long seed, hho_check_callback callback, void* user,
                                 size_t* n_checks, size_t* n_failed);

#ifdef __cplusplus
}
#endif

#endif

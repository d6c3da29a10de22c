#ifndef GEOMK_H
#define GEOMK_H

/* C interface to the geometry library: opaque handles, status codes, and a
 * per-thread error message. All functions returning geomk_status set the
 * message retrievable via geomk_last_error() on failure. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    GEOMK_OK = 0,
    GEOMK_ERR_INPUT = 1,    /* bad arguments, bad files, degenerate input */
    GEOMK_ERR_INTERNAL = 2  /* a runtime-verified internal invariant failed */
} geomk_status;

/* Message describing the most recent failure on this thread. */
const char* geomk_last_error(void);

typedef struct geomk_points geomk_points; /* finite point set */
typedef struct geomk_poly geomk_poly;     /* bounded halfspace intersection */
typedef struct geomk_apm geomk_apm;       /* approximate membership index */
typedef struct geomk_width geomk_width;   /* directional width index */

/* ------------------------------------------------------------------ points */
/* coords: n*dim doubles, point-major. */
geomk_status geomk_points_create(int dim, const double* coords, size_t n,
                                 geomk_points** out);
geomk_status geomk_points_read(const char* path, geomk_points** out);
geomk_status geomk_points_write(const char* path, const geomk_points* pts);
int geomk_points_dim(const geomk_points* pts);
size_t geomk_points_size(const geomk_points* pts);
/* writes dim doubles */
geomk_status geomk_points_get(const geomk_points* pts, size_t i, double* coords);
void geomk_points_free(geomk_points* pts);

/* --------------------------------------------------------------- polytopes */
/* rows: n*(dim+1) doubles, each row "a_1 .. a_d b" meaning a.x <= b. */
geomk_status geomk_poly_create(int dim, const double* rows, size_t n, int check_bounded,
                               geomk_poly** out);
geomk_status geomk_poly_read(const char* path, geomk_poly** out);
int geomk_poly_dim(const geomk_poly* p);
size_t geomk_poly_size(const geomk_poly* p);
void geomk_poly_free(geomk_poly* p);

/* ------------------------------------------------------------------ kernel */
/* eps-kernel subset; *out_indices is allocated by the library (free with
 * geomk_indices_free) and holds *out_n sorted input indices.
 * rounds < 0 selects the default bootstrap depth. */
geomk_status geomk_kernel(const geomk_points* pts, double eps, int rounds,
                          int32_t** out_indices, size_t* out_n);
void geomk_indices_free(int32_t* indices);

/* Build statistics from the most recent bootstrap run. */
#define GEOMK_MAX_ROUNDS 16
typedef struct {
    uint64_t input_size;
    uint64_t discarded;     /* points routed to no shadow (deep interior) */
    uint64_t leaves;        /* leaf groups that received points */
    int rounds_used;
    int delta_count;        /* entries used in delta_schedule */
    double delta_schedule[GEOMK_MAX_ROUNDS]; /* outermost round first */
} geomk_kernel_stats;

/* Same as geomk_kernel, additionally filling *stats (may be NULL). */
geomk_status geomk_kernel_stats_run(const geomk_points* pts, double eps, int rounds,
                                    int32_t** out_indices, size_t* out_n,
                                    geomk_kernel_stats* stats);

/* Default worker count for internal parallel loops; <= 0 means hardware
 * concurrency. Results never depend on it. */
void geomk_set_threads(int threads);

/* ------------------------------------------------------------------ extent */
geomk_status geomk_diameter(const geomk_points* pts, double eps, int32_t* i, int32_t* j,
                            double* dist);
geomk_status geomk_bcp(const geomk_points* red, const geomk_points* blue, double eps,
                       uint64_t seed, int32_t* i, int32_t* j, double* dist,
                       double* estimate);

geomk_status geomk_width_build(const geomk_points* pts, double eps, geomk_width** out);
geomk_status geomk_width_query(const geomk_width* idx, const double* v, double* value);
void geomk_width_free(geomk_width* idx);

/* -------------------------------------------------------------- membership */
geomk_status geomk_apm_build(const geomk_poly* p, double eps, int rounds, geomk_apm** out);
geomk_status geomk_apm_query(const geomk_apm* idx, const double* q, int* inside,
                             int* path_length);
geomk_status geomk_apm_save(const geomk_apm* idx, const char* path);
geomk_status geomk_apm_load(const char* path, geomk_apm** out);
int geomk_apm_dim(const geomk_apm* idx);
geomk_status geomk_apm_stats(const geomk_apm* idx, uint64_t* total_nodes,
                             uint64_t* sub_indices, int* rounds, double* eps);
void geomk_apm_free(geomk_apm* idx);

/* ------------------------------------------------------------------ oracle */
/* Brute-force references for verification modes. */
geomk_status geomk_exact_diameter(const geomk_points* pts, int32_t* i, int32_t* j,
                                  double* dist);
geomk_status geomk_exact_bcp(const geomk_points* red, const geomk_points* blue, int32_t* i,
                             int32_t* j, double* dist);
geomk_status geomk_exact_width(const geomk_points* pts, const double* v, double* value);

#ifdef __cplusplus
}
#endif

#endif /* GEOMK_H */

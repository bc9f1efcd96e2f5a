#ifndef HOLOATTR_H
#define HOLOATTR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. `HA_STATUS_OK` is zero; domain failures follow the
 library's error conditions.
 */
typedef enum HaStatus {
  HA_STATUS_OK = 0,
  HA_STATUS_NULL_POINTER = 1,
  HA_STATUS_INVALID_UTF8 = 2,
  HA_STATUS_MAP_FORMAT = 3,
  HA_STATUS_INVALID_PARAMS = 4,
  HA_STATUS_OVERFLOW = 5,
  HA_STATUS_NO_CONVERGENCE = 6,
  HA_STATUS_SINGULAR_DIFFERENTIAL = 7,
  HA_STATUS_NOT_A_SADDLE = 8,
  HA_STATUS_DELTA_TOO_LARGE = 9,
  HA_STATUS_NOT_TANGENT_TO_IDENTITY = 10,
  HA_STATUS_POLE_HIT = 11,
  HA_STATUS_NOT_INVERTIBLE = 12,
  HA_STATUS_BUFFER_TOO_SMALL = 13,
  HA_STATUS_PANIC = 14,
  HA_STATUS_OTHER = 15,
} HaStatus;

typedef enum HaClassification {
  HA_CLASSIFICATION_ATTRACTING = 0,
  HA_CLASSIFICATION_REPELLING = 1,
  HA_CLASSIFICATION_SADDLE = 2,
  HA_CLASSIFICATION_TANGENT_TO_IDENTITY = 3,
  HA_CLASSIFICATION_NEUTRAL_OTHER = 4,
} HaClassification;

/*
 A local stable graph together with the map it was computed for.
 */
typedef struct HaGraph HaGraph;

/*
 A polynomial automorphism or forward-only polynomial map.
 */
typedef struct HaMap HaMap;

typedef struct HaFixedPoint {
  double location[4];
  /*
   `{re l1, im l1, re l2, im l2}`, increasing modulus.
   */
  double eigenvalues[4];
  enum HaClassification classification;
  double residual;
} HaFixedPoint;

typedef struct HaExpansionReport {
  size_t admissible;
  size_t violations;
  double min_ratio;
} HaExpansionReport;

typedef struct HaDirection {
  double direction[4];
  double lambda_re;
  double lambda_im;
  bool degenerate;
  double residual;
} HaDirection;

/*
 Static, NUL-terminated name of a status code.
 */
const char *ha_status_name(enum HaStatus status);

/*
 Message of the last failure on this thread. Valid until the next call
 into the library from the same thread.
 */
const char *ha_last_error(void);

/*
 Parses a map definition (JSON text).

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HaStatus ha_map_from_json(const char *json, struct HaMap **out);

/*
 `(x, y) -> (x^2 + c - y, x)`.
 */
struct HaMap *ha_map_henon(double c);

/*
 # Safety
 `map` must come from this library and not be used afterwards.
 */
void ha_map_free(struct HaMap *map);

/*
 Evaluates the map at `input[4]`, writing `output[4]`.

 # Safety
 `map` must be a live handle; `input` and `output` must hold four doubles.
 */
enum HaStatus ha_map_apply(const struct HaMap *map, const double *input, double *output);

/*
 Newton search from `seed[4]`.

 # Safety
 `map` must be a live handle, `seed` must hold four doubles and `out` be valid.
 */
enum HaStatus ha_fixed_point(const struct HaMap *map, const double *seed, struct HaFixedPoint *out);

/*
 Local stable graph of the saddle found from `seed[4]`, over the disc of
 radius `delta`.

 # Safety
 `map` must be a live handle, `seed` must hold four doubles and `out` be valid.
 */
enum HaStatus ha_stable_graph(const struct HaMap *map,
                              const double *seed,
                              double delta,
                              struct HaGraph **out);

/*
 Invariance residual of the graph under its map.

 # Safety
 `graph` must be a live handle.
 */
double ha_graph_residual(const struct HaGraph *graph);

/*
 Number of graph-transform iterations used.

 # Safety
 `graph` must be a live handle.
 */
size_t ha_graph_iterations(const struct HaGraph *graph);

/*
 Number of sample points of the graph.

 # Safety
 `graph` must be a live handle.
 */
size_t ha_graph_len(const struct HaGraph *graph);

/*
 Copies up to `cap` sample points into `buf` (four doubles each);
 `written` receives the number of points.

 # Safety
 `graph` must be a live handle and `buf` must hold `4 * cap` doubles.
 */
enum HaStatus ha_graph_points(const struct HaGraph *graph,
                              double *buf,
                              size_t cap,
                              size_t *written);

/*
 # Safety
 `graph` must come from this library and not be used afterwards.
 */
void ha_graph_free(struct HaGraph *graph);

/*
 `m`-th iterate of `z -> z / (1 + z)` in closed form.

 # Safety
 `out_re` and `out_im` must be valid.
 */
enum HaStatus ha_sphere_map(uint64_t m, double z_re, double z_im, double *out_re, double *out_im);

/*
 Sampled expansion inequality of the blow-up map at sector width `epsilon`.

 # Safety
 `map` must be a live handle and `out` valid.
 */
enum HaStatus ha_expansion_check(const struct HaMap *map,
                                 double epsilon,
                                 size_t trials,
                                 uint64_t seed,
                                 struct HaExpansionReport *out);

/*
 Characteristic directions of `(x^2 + 2xy + c y^2, -2xy - y^2)`.
 Writes up to `cap` entries; `count` receives the number found, or
 `SIZE_MAX` when every direction is characteristic.

 # Safety
 `buf` must hold `cap` entries and `count` must be valid.
 */
enum HaStatus ha_normal_form_directions(double c_re,
                                        double c_im,
                                        struct HaDirection *buf,
                                        size_t cap,
                                        size_t *count);

#endif  /* HOLOATTR_H */

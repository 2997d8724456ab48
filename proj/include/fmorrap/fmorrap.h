#ifndef FMORRAP_FMORRAP_H
#define FMORRAP_FMORRAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FMORRAP_BUILDING_LIBRARY)
#    define FMORRAP_API __declspec(dllexport)
#  else
#    define FMORRAP_API __declspec(dllimport)
#  endif
#else
#  define FMORRAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fmorrap_status {
  FMORRAP_OK = 0,
  FMORRAP_E_INVALID_ARGUMENT = 1,
  FMORRAP_E_DEGENERATE = 2,
  FMORRAP_E_PARSE = 3,
  FMORRAP_E_IO = 4,
  FMORRAP_E_INTERNAL = 5
} fmorrap_status;

/* Message for the most recent failure on the calling thread; "" if none. */
FMORRAP_API const char* fmorrap_last_error(void);
FMORRAP_API const char* fmorrap_status_string(fmorrap_status status);
FMORRAP_API const char* fmorrap_version(void);

/* ---- enumerations ---------------------------------------------------- */

enum { FMORRAP_SERIES_PARALLEL = 0, FMORRAP_PARALLEL_SERIES = 1 };
enum { FMORRAP_PSO = 0, FMORRAP_GA = 1 };
enum { FMORRAP_DATASET_CONSISTENT = 0, FMORRAP_AS_WRITTEN = 1 };
enum { FMORRAP_FITNESS_NORMALIZED = 0, FMORRAP_FITNESS_RAW = 1 };
enum { FMORRAP_AGGREGATION_EXTENSION = 0, FMORRAP_AGGREGATION_POINTWISE = 1 };

/* Parses an option value. `category` is one of "algorithm", "topology",
   "weight-formula", "volume-formula", "fitness", "aggregation". */
FMORRAP_API fmorrap_status fmorrap_parse_enum(const char* category, const char* text, int* out);

/* ---- datasets -------------------------------------------------------- */

typedef struct fmorrap_dataset fmorrap_dataset;

typedef struct fmorrap_dataset_info {
  int topology;
  size_t subsystems;
  double mission_time;
  double weight_limit;
  double volume_limit;
  double cost_limit;
  double r_lo;
  double r_hi;
  int n_lo;
  int n_hi;
  size_t bounds_count;
} fmorrap_dataset_info;

FMORRAP_API fmorrap_status fmorrap_dataset_load(const char* path, fmorrap_dataset** out);
FMORRAP_API void fmorrap_dataset_free(fmorrap_dataset* dataset);
FMORRAP_API fmorrap_status fmorrap_dataset_get_info(const fmorrap_dataset* dataset, fmorrap_dataset_info* out);
/* weights[2] = (xi1, xi2); bounds[4] = (r_left, r_right, c_left, c_right). */
FMORRAP_API fmorrap_status fmorrap_dataset_get_bounds(const fmorrap_dataset* dataset, size_t index,
                                                      double weights[2], double bounds[4]);

/* ---- crisp metrics --------------------------------------------------- */

typedef struct fmorrap_metrics {
  double reliability;
  double cost;
  double weight_dataset_consistent;
  double weight_as_written;
  double volume_dataset_consistent;
  double volume_as_written;
  /* Feasibility under the dataset-consistent weight and volume. */
  int feasible;
  double violation;
} fmorrap_metrics;

FMORRAP_API fmorrap_status fmorrap_evaluate(const fmorrap_dataset* dataset, const double* r, const int* n,
                                            size_t m, fmorrap_metrics* out);

/* ---- solving --------------------------------------------------------- */

typedef struct fmorrap_solve_options {
  int algorithm;
  size_t population;
  size_t iterations; /* generations for the GA */
  size_t grid_size;
  int weight_formula;
  int volume_formula;
  int fitness;
  int aggregation;
  double c1;
  double c2;
  int k_fixed; /* nonzero: use `k`; zero: draw k once per run */
  double k;
  double velocity_clamp;
  double crossover;
  double mutation;
  size_t tournament;
} fmorrap_solve_options;

FMORRAP_API void fmorrap_solve_options_init(fmorrap_solve_options* options);

typedef struct fmorrap_run fmorrap_run;
typedef struct fmorrap_run_set fmorrap_run_set;

typedef struct fmorrap_run_summary {
  double xi1;
  double xi2;
  uint64_t seed;
  int feasible;
  double violation;
  double reliability;
  double cost;
  double weight;
  double volume;
  double y_r;
  double y_c;
  double fitness;
  double k;
  size_t subsystems;
  size_t trace_length;
} fmorrap_run_summary;

/* Runs one search for weight vector (xi1, xi2). The dataset must carry
   ideal bounds for exactly that weight vector. */
FMORRAP_API fmorrap_status fmorrap_solve(const fmorrap_dataset* dataset, const fmorrap_solve_options* options,
                                         double xi1, double xi2, uint64_t seed, fmorrap_run** out);
FMORRAP_API void fmorrap_run_free(fmorrap_run* run);
FMORRAP_API fmorrap_status fmorrap_run_get_summary(const fmorrap_run* run, fmorrap_run_summary* out);
FMORRAP_API fmorrap_status fmorrap_run_get_decision(const fmorrap_run* run, double* r, int* n, size_t m);
FMORRAP_API fmorrap_status fmorrap_run_get_trace(const fmorrap_run* run, double* out, size_t length);

/* One run per (weight vector, seed), ordered weight-major. `weights` holds
   2 * weight_count values. Runs are spread over `threads` workers (0 picks
   the hardware concurrency); the result does not depend on the count. */
FMORRAP_API fmorrap_status fmorrap_solve_batch(const fmorrap_dataset* dataset, const fmorrap_solve_options* options,
                                               const double* weights, size_t weight_count, const uint64_t* seeds,
                                               size_t seed_count, unsigned threads, fmorrap_run_set** out);
FMORRAP_API void fmorrap_run_set_free(fmorrap_run_set* set);
FMORRAP_API size_t fmorrap_run_set_size(const fmorrap_run_set* set);
/* Borrowed pointer, valid until the set is freed. */
FMORRAP_API const fmorrap_run* fmorrap_run_set_get(const fmorrap_run_set* set, size_t index);
/* Writes <algorithm>_results.json, _pareto.csv and _trace.csv into out_dir.
   With `front_only`, the Pareto CSV keeps only non-dominated feasible rows. */
FMORRAP_API fmorrap_status fmorrap_run_set_write(const fmorrap_run_set* set, const char* out_dir,
                                                 const char* dataset_label, int front_only);

/* ---- replication statistics ----------------------------------------- */

/* Compares two results files. Writes the CSV to csv_path when non-null and
   returns a text table in *table_out (free with fmorrap_string_free). */
FMORRAP_API fmorrap_status fmorrap_compare_files(const char* path_a, const char* path_b, const char* label_a,
                                                 const char* label_b, int welch, const char* csv_path,
                                                 char** table_out);
FMORRAP_API void fmorrap_string_free(char* text);

FMORRAP_API fmorrap_status fmorrap_t_test(const double* a, size_t na, const double* b, size_t nb, int welch,
                                          double* t, double* df, double* p);
FMORRAP_API fmorrap_status fmorrap_anova_f(const double* const* groups, const size_t* sizes, size_t group_count,
                                           double* f, double* p);

#ifdef __cplusplus
}
#endif

#endif

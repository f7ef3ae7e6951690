/* qsolve: 1D scattering and quasi-bound states of piecewise-constant potentials.
 *
 * Plain C interface over the C++ library. Handles are opaque; every fallible call returns a
 * qs_status and leaves a message retrievable with qs_last_error() on the calling thread.
 * Strings returned through char** are owned by the caller and released with qs_string_free().
 */
#ifndef QSOLVE_H
#define QSOLVE_H

#include <stddef.h>

#if defined(_WIN32)
#define QS_API __declspec(dllexport)
#else
#define QS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_INVALID = 1,
  QS_ERR_SOLVER = 2,
  QS_ERR_IO = 3,
  QS_ERR_PARSE = 4,
  QS_ERR_INTERNAL = 5
} qs_status;

typedef enum qs_engine { QS_ENGINE_RECURSIVE = 0, QS_ENGINE_TM = 1 } qs_engine;
typedef enum qs_detector { QS_DETECTOR_A1_DIP = 0, QS_DETECTOR_PT_PEAK = 1 } qs_detector;
typedef enum qs_sampling { QS_SAMPLING_MIDPOINT = 0, QS_SAMPLING_AVERAGE = 1 } qs_sampling;
typedef enum qs_localization {
  QS_LOC_NONE = -1,
  QS_LOC_LEFT = 0,
  QS_LOC_RIGHT = 1,
  QS_LOC_DELOCALIZED = 2
} qs_localization;

typedef struct qs_potential qs_potential;
typedef struct qs_spectrum qs_spectrum;
typedef struct qs_states qs_states;

QS_API const char* qs_version(void);
/* Message of the last failed call on this thread ("" if none). */
QS_API const char* qs_last_error(void);
QS_API void qs_string_free(char* s);

/* ---- potentials ------------------------------------------------------------------------------
 * A potential is either a step profile or a smooth potential. Smooth potentials are discretized
 * (2000 segments, midpoint by default) whenever a solver needs a step profile. */
QS_API qs_status qs_potential_load(const char* source, qs_potential** out); /* "builtin:name?k=v" or file */
QS_API qs_status qs_potential_from_json(const char* text, qs_potential** out);
QS_API qs_status qs_potential_from_steps(const double* breakpoints, const double* values, size_t layers,
                                         qs_potential** out);
QS_API qs_status qs_potential_from_expr(const char* expr, double lo, double hi, qs_potential** out);
/* well + uplift with flat flanks of width `flank` on both sides. */
QS_API qs_status qs_potential_uplift(const qs_potential* well, double uplift, double flank, qs_potential** out);
QS_API qs_status qs_potential_set_discretization(qs_potential* p, int segments, qs_sampling sampling);
QS_API int qs_potential_is_smooth(const qs_potential* p);
/* Additive constant recorded by the model construction (0 for plain potentials). */
QS_API double qs_potential_uplift_value(const qs_potential* p);
QS_API size_t qs_potential_layers(const qs_potential* p);
/* Outermost breakpoints of the step profile. */
QS_API qs_status qs_potential_extent(const qs_potential* p, double* lo, double* hi);
QS_API double qs_potential_eval(const qs_potential* p, double x);
/* JSON of the (discretized) step profile. */
QS_API qs_status qs_potential_to_json(const qs_potential* p, char** json);
QS_API void qs_potential_free(qs_potential* p);
/* Comma-separated builtin potential names. */
QS_API qs_status qs_builtin_names(char** names);

/* ---- scattering ------------------------------------------------------------------------------ */
typedef struct qs_scattering {
  double energy; /* energy actually used after any degenerate nudge */
  double r_re, r_im;
  double t_re, t_im;
  double log_t_re, log_t_im;
  double p_r, p_t, ln_p_t;
  double ln_a1; /* NaN for an identically zero potential */
} qs_scattering;

QS_API qs_status qs_scatter(const qs_potential* p, double energy, qs_engine engine, qs_scattering* out);

/* psi on `n` grid points for a unit incident wave; re/im receive n values each. */
QS_API qs_status qs_wavefunction(const qs_potential* p, double energy, const double* grid, size_t n, double* re,
                                 double* im);
QS_API qs_status qs_wavefunction_write_csv(const qs_potential* p, double energy, const double* grid, size_t n,
                                           const char* path);
/* Largest relative jump of psi and of a finite-difference psi' across the breakpoints. */
QS_API qs_status qs_continuity(const qs_potential* p, double energy, double* max_psi_jump, double* max_dpsi_jump);

/* ---- spectra --------------------------------------------------------------------------------- */
/* threads = 0 uses QSOLVE_THREADS or the hardware concurrency. */
QS_API qs_status qs_sweep(const qs_potential* p, double emin, double emax, size_t points, qs_engine engine,
                          unsigned threads, qs_spectrum** out);
QS_API size_t qs_spectrum_size(const qs_spectrum* s);
QS_API qs_status qs_spectrum_point(const qs_spectrum* s, size_t i, double* energy, double* p_t, double* ln_p_t,
                                   double* ln_a1);
QS_API const char* qs_spectrum_digest(const qs_spectrum* s);
QS_API qs_status qs_spectrum_write_csv(const qs_spectrum* s, const char* path);
QS_API void qs_spectrum_free(qs_spectrum* s);

typedef struct qs_resonance {
  double energy;
  double ln_a1_min;
  double ln_p_t;
  double refinement_width;
  double depth;
} qs_resonance;

/* Writes up to `capacity` resonances into `out` (may be NULL when capacity is 0); *count receives the total. */
QS_API qs_status qs_find_resonances(const qs_potential* p, const qs_spectrum* s, qs_detector detector, double tol_e,
                                    qs_resonance* out, size_t capacity, size_t* count);

/* ---- bound states ---------------------------------------------------------------------------- */
typedef struct qs_eigen_options {
  double emin, emax; /* both 0 selects (1e-3 top, top), top being the lower flank barrier */
  size_t points;
  double tol_e;
  qs_detector detector;
  int refine_grid;
  int well_points;
  int flank_points;
  int has_split;
  double split_point;
  double step_uplift; /* uplift subtracted for step-profile models */
  unsigned threads;
} qs_eigen_options;

QS_API void qs_eigen_options_init(qs_eigen_options* o);
/* Smooth potentials are treated as already-uplifted models; step profiles use their outer layers as flanks. */
QS_API qs_status qs_eigen_solve(const qs_potential* model, const qs_eigen_options* o, qs_states** out);
QS_API size_t qs_states_count(const qs_states* s);
QS_API qs_status qs_states_get(const qs_states* s, size_t i, int* index, double* eigenvalue, double* resonance_energy,
                               int* node_count, int* imaginary_part, qs_localization* loc);
/* Grid and psi of state i; the pointers stay valid until qs_states_free. */
QS_API qs_status qs_states_wave(const qs_states* s, size_t i, const double** grid, const double** psi, size_t* n);
QS_API size_t qs_states_warning_count(const qs_states* s);
QS_API const char* qs_states_warning(const qs_states* s, size_t i);
QS_API qs_status qs_states_to_json(const qs_states* s, char** json);
QS_API void qs_states_free(qs_states* s);

/* ---- misc ------------------------------------------------------------------------------------ */
QS_API qs_status qs_gnuplot_script(int wavefunction, const char* csv_path, const char* title, char** script);
QS_API qs_status qs_write_text(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* QSOLVE_H */

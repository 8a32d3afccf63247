#ifndef PHASES_H
#define PHASES_H

#include <stddef.h>
#include <stdint.h>

typedef enum PhasesLabel {
  PHASES_LABEL_SUPERFLUID = 0,
  PHASES_LABEL_MOTT_INSULATOR = 1,
  /*
   Ground superfluid, excited Mott.
   */
  PHASES_LABEL_SUPERFLUID_MOTT = 2,
  /*
   Ground Mott, excited superfluid.
   */
  PHASES_LABEL_MOTT_SUPERFLUID = 3,
} PhasesLabel;

typedef enum PhasesSpecies {
  PHASES_SPECIES_GROUND = 0,
  PHASES_SPECIES_EXCITED = 1,
} PhasesSpecies;

/*
 Result of every call.
 */
typedef enum PhasesStatus {
  PHASES_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  PHASES_STATUS_NULL_POINTER = 1,
  /*
   An argument failed validation.
   */
  PHASES_STATUS_INVALID_ARGUMENT = 2,
  /*
   A pole was hit or the interaction matrix is singular.
   */
  PHASES_STATUS_NUMERICAL = 3,
  /*
   The requested species has no atoms in the occupation.
   */
  PHASES_STATUS_EMPTY_SPECIES = 4,
  PHASES_STATUS_UNKNOWN_FIGURE = 5,
  /*
   Oracle verification failed for at least one draw.
   */
  PHASES_STATUS_ORACLE_FAILED = 6,
  /*
   The library panicked; this is a bug.
   */
  PHASES_STATUS_INTERNAL = 7,
} PhasesStatus;

typedef enum PhasesVariant {
  PHASES_VARIANT_SINGLE = 0,
  PHASES_VARIANT_TWO = 1,
  PHASES_VARIANT_CAVITY = 2,
  PHASES_VARIANT_GENERAL = 3,
} PhasesVariant;

/*
 Phase labels of a figure scan.
 */
typedef struct PhasesGrid PhasesGrid;

/*
 Scaled model parameters.
 */
typedef struct PhasesModel PhasesModel;

/*
 Parameters in absolute energy units.
 */
typedef struct PhasesPhysical {
  double j_g;
  double j_e;
  double u_g;
  double u_e;
  double u_eg;
  double f_sq;
  double eps_g;
  double eps_e;
  double eps_c;
  uint32_t z;
} PhasesPhysical;

/*
 Chemical-potential window; the bounds are meaningful only when `present` is nonzero.
 */
typedef struct PhasesWindow {
  uint8_t present;
  double mu_minus;
  double mu_plus;
} PhasesWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static description of a `PhasesStatus` code.
 */
const char *phases_status_message(uint32_t status);

/*
 Detail of the last failure on this thread; empty after a successful call.
 The pointer stays valid until the next call into the library from this thread.
 */
const char *phases_last_error(void);

/*
 Create a model from scaled parameters.

 # Safety
 `out` must be valid for writes.
 */
enum PhasesStatus phases_model_new_scaled(double u_g,
                                          double u_e,
                                          double u_eg_g,
                                          double u_eg_e,
                                          double f,
                                          double eps_c_g,
                                          double eps_c_e,
                                          double eps_g,
                                          double eps_e,
                                          struct PhasesModel **out);

/*
 Create a model from physical parameters, dividing by the hopping scales.

 # Safety
 `physical` must be valid for reads and `out` valid for writes.
 */
enum PhasesStatus phases_model_from_physical(const struct PhasesPhysical *physical,
                                             struct PhasesModel **out);

/*
 Release a model. Null is ignored.

 # Safety
 `model` must be null or a handle not yet freed.
 */
void phases_model_free(struct PhasesModel *model);

/*
 Single-component lobe of filling `n` at `u = U/zJ` (unbarred).

 # Safety
 `out` must be valid for writes.
 */
enum PhasesStatus phases_single_window(uint32_t n, double u, struct PhasesWindow *out);

/*
 Window of species `which` (a `PhasesSpecies`) in variant `kind` (a
 `PhasesVariant`) for the occupation `(n_g, n_e, n_c)`, including the level
 offset of the species. For `Single` only `n_g` and the ground species are used.

 # Safety
 `model` must be a live handle and `out` valid for writes.
 */
enum PhasesStatus phases_window(const struct PhasesModel *model,
                                uint32_t kind,
                                uint32_t which,
                                uint32_t n_g,
                                uint32_t n_e,
                                double n_c,
                                struct PhasesWindow *out);

/*
 Both boundary coefficients at unbarred potentials `(mu_g, mu_e)`.
 The point is on the superfluid side of a boundary where a coefficient is negative.

 # Safety
 `model` must be a live handle; `c_g` and `c_e` valid for writes.
 */
enum PhasesStatus phases_residual(const struct PhasesModel *model,
                                  uint32_t n_g,
                                  uint32_t n_e,
                                  double n_c,
                                  double mu_g,
                                  double mu_e,
                                  double *c_g,
                                  double *c_e);

/*
 Check the closed-form second-order energy against the explicit state sum
 on `count` random draws starting at `seed`. `passed` receives the number
 of passing draws; the status is `OracleFailed` unless all pass.

 # Safety
 `passed` must be valid for writes.
 */
enum PhasesStatus phases_oracle_verify(uint64_t seed, uint64_t count, uint64_t *passed);

/*
 Scan a built-in figure (`"fig7"`, ...) on an `nx` by `nmu` grid.

 # Safety
 `figure` must be a NUL-terminated string; `out` valid for writes.
 */
enum PhasesStatus phases_figure_scan(const char *figure,
                                     uintptr_t nx,
                                     uintptr_t nmu,
                                     struct PhasesGrid **out);

/*
 Grid dimensions: horizontal nodes, vertical nodes and occupation layers.

 # Safety
 `grid` must be a live handle; out pointers valid for writes.
 */
enum PhasesStatus phases_grid_shape(const struct PhasesGrid *grid,
                                    uintptr_t *nx,
                                    uintptr_t *nmu,
                                    uintptr_t *layers);

/*
 Horizontal coordinate `i` and vertical coordinate `j` of a node.

 # Safety
 `grid` must be a live handle; `x` and `mu` valid for writes.
 */
enum PhasesStatus phases_grid_node(const struct PhasesGrid *grid,
                                   uintptr_t i,
                                   uintptr_t j,
                                   double *x,
                                   double *mu);

/*
 Label of node `(i, j)` in occupation layer `layer`.

 # Safety
 `grid` must be a live handle; `out` valid for writes.
 */
enum PhasesStatus phases_grid_label(const struct PhasesGrid *grid,
                                    uintptr_t layer,
                                    uintptr_t i,
                                    uintptr_t j,
                                    enum PhasesLabel *out);

/*
 Release a grid. Null is ignored.

 # Safety
 `grid` must be null or a handle not yet freed.
 */
void phases_grid_free(struct PhasesGrid *grid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASES_H */

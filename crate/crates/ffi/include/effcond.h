#ifndef EFFCOND_H
#define EFFCOND_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdint.h>

// Result code of every fallible call.
typedef enum EffcondStatus {
  EFFCOND_STATUS_OK = 0,
  EFFCOND_STATUS_INVALID_ARGUMENT = 1,
  EFFCOND_STATUS_CONVERGENCE_FAILURE = 2,
  EFFCOND_STATUS_SINGULAR_SYSTEM = 3,
  EFFCOND_STATUS_DOMAIN_ERROR = 4,
  EFFCOND_STATUS_POLE = 5,
  EFFCOND_STATUS_IO_ERROR = 6,
  EFFCOND_STATUS_NULL_POINTER = 7,
  EFFCOND_STATUS_PANIC = 8,
} EffcondStatus;

// Closed-form formula selector.
typedef enum EffcondFormula {
  EFFCOND_FORMULA_CMA = 0,
  EFFCOND_FORMULA_PERRINS_HEX = 1,
  EFFCOND_FORMULA_KELLER_HEX = 2,
  EFFCOND_FORMULA_MATCHED_PERFECT_HEX = 3,
  EFFCOND_FORMULA_MATCHED_CONTRAST_HEX = 4,
} EffcondFormula;

typedef struct EffcondLattice EffcondLattice;

// Expansions of `σ11 - iσ12` and `σ22`.
typedef struct EffcondSeries EffcondSeries;

typedef struct EffcondSumTable EffcondSumTable;

// Effective conductivity tensor with the residual of the computation.
typedef struct EffcondTensor {
  double sigma11;
  double sigma12;
  double sigma22;
  double residual;
} EffcondTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *effcond_last_error_message(void);

// # Safety
// `out` must be valid for writes.
enum EffcondStatus effcond_lattice_square(struct EffcondLattice **out);

// # Safety
// `out` must be valid for writes.
enum EffcondStatus effcond_lattice_hexagonal(struct EffcondLattice **out);

// Rectangular cell with side ratio `aspect`.
//
// # Safety
// `out` must be valid for writes.
enum EffcondStatus effcond_lattice_rectangular(double aspect, struct EffcondLattice **out);

// Lattice spanned by `1` and `tau_re + i tau_im`, rescaled to unit area.
//
// # Safety
// `out` must be valid for writes.
enum EffcondStatus effcond_lattice_general(double tau_re,
                                           double tau_im,
                                           struct EffcondLattice **out);

// Concentration at which neighbouring disks touch; NaN for a null handle.
//
// # Safety
// `lattice` must be null or a live handle.
double effcond_lattice_touching_concentration(const struct EffcondLattice *lattice);

// # Safety
// `lattice` must be null or a handle not yet freed.
void effcond_lattice_free(struct EffcondLattice *lattice);

// Lattice sums `S_2 ..= S_max_order` to absolute accuracy `tolerance`.
//
// # Safety
// `lattice` must be a live handle and `out` valid for writes.
enum EffcondStatus effcond_sum_table_build(const struct EffcondLattice *lattice,
                                           uint32_t max_order,
                                           double tolerance,
                                           struct EffcondSumTable **out);

// # Safety
// `table` must be null or a live handle.
uint32_t effcond_sum_table_max_order(const struct EffcondSumTable *table);

// # Safety
// `table` must be a live handle; `re` and `im` valid for writes.
enum EffcondStatus effcond_sum_table_get(const struct EffcondSumTable *table,
                                         uint32_t order,
                                         double *re,
                                         double *im);

// # Safety
// `table` must be null or a handle not yet freed.
void effcond_sum_table_free(struct EffcondSumTable *table);

// Solves the truncated system at truncation order `truncation`; LU when
// `max_iter` is 0, successive approximations otherwise.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum EffcondStatus effcond_solve(const struct EffcondSumTable *table,
                                 double f,
                                 double rho,
                                 uint32_t truncation,
                                 uint32_t max_iter,
                                 double iter_tol,
                                 struct EffcondTensor *out);

// Expansions of both principal conductivities through `f^order`.
//
// # Safety
// `table` must be a live handle and `out` valid for writes.
enum EffcondStatus effcond_series_expand(const struct EffcondSumTable *table,
                                         uint32_t order,
                                         struct EffcondSeries **out);

// Coefficient of `rho^k f^j` in `σ11 - iσ12`.
//
// # Safety
// `series` must be a live handle; `re` and `im` valid for writes.
enum EffcondStatus effcond_series_coefficient(const struct EffcondSeries *series,
                                              uint32_t j,
                                              uint32_t k,
                                              double *re,
                                              double *im);

// # Safety
// `series` must be a live handle and `out` valid for writes.
enum EffcondStatus effcond_series_evaluate(const struct EffcondSeries *series,
                                           double f,
                                           double rho,
                                           struct EffcondTensor *out);

// # Safety
// `series` must be null or a handle not yet freed.
void effcond_series_free(struct EffcondSeries *series);

// # Safety
// `out` must be valid for writes.
enum EffcondStatus effcond_closed_form(enum EffcondFormula formula,
                                       double f,
                                       double rho,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EFFCOND_H */

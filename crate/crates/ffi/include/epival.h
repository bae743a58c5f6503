#ifndef EPIVAL_H
#define EPIVAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum EpivalStatus {
  EPIVAL_STATUS_OK = 0,
  EPIVAL_STATUS_NULL_POINTER = 1,
  EPIVAL_STATUS_INVALID_INPUT = 2,
  EPIVAL_STATUS_NUMERIC = 3,
  EPIVAL_STATUS_PANIC = 4,
} EpivalStatus;

// Convex PA function with bounded domain.
typedef struct EpivalCellPa EpivalCellPa;

// Finite maximum of affine functions.
typedef struct EpivalMaxAffine EpivalMaxAffine;

// Compactly supported weight.
typedef struct EpivalTestFunction EpivalTestFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *epival_last_error(void);

// Library version, a static string.
const char *epival_version(void);

// `max_i (<slopes[i*dim..], x> + intercepts[i])` over `count` pieces.
//
// # Safety
// `slopes` holds `count * dim` values, `intercepts` holds `count`.
enum EpivalStatus epival_max_affine_new(uintptr_t dim,
                                        uintptr_t count,
                                        const double *slopes,
                                        const double *intercepts,
                                        struct EpivalMaxAffine **out);

// Parses the JSON form `{"dim", "pieces"}`.
//
// # Safety
// `json` is a nul-terminated string.
enum EpivalStatus epival_max_affine_from_json(const char *json, struct EpivalMaxAffine **out);

// Parses the JSON form `{"dim", "cells"}`.
//
// # Safety
// `json` is a nul-terminated string.
enum EpivalStatus epival_cell_pa_from_json(const char *json, struct EpivalCellPa **out);

// Convex PA function interpolating `values` at the `count` points of
// dimension `dim`, with domain their hull.
//
// # Safety
// `points` holds `count * dim` values, `values` holds `count`.
enum EpivalStatus epival_cell_pa_from_vertex_values(uintptr_t dim,
                                                    uintptr_t count,
                                                    const double *points,
                                                    const double *values,
                                                    struct EpivalCellPa **out);

// `c (1 - |y|^2 / rho^2)_+^k`.
//
// # Safety
// `out` is a valid pointer.
enum EpivalStatus epival_test_function_bump(uintptr_t dim,
                                            double c,
                                            double rho,
                                            uint32_t k,
                                            struct EpivalTestFunction **out);

// Parses the JSON form `{"dim", "poly", "rho", "k"}`.
//
// # Safety
// `json` is a nul-terminated string.
enum EpivalStatus epival_test_function_from_json(const char *json, struct EpivalTestFunction **out);

// # Safety
// `h` is null or a handle from this library, released once.
void epival_max_affine_free(struct EpivalMaxAffine *h);

// # Safety
// `h` is null or a handle from this library, released once.
void epival_cell_pa_free(struct EpivalCellPa *h);

// # Safety
// `h` is null or a handle from this library, released once.
void epival_test_function_free(struct EpivalTestFunction *h);

// # Safety
// `h` is a valid handle, `x` holds `dim` values and `out` is valid.
enum EpivalStatus epival_max_affine_eval(const struct EpivalMaxAffine *h,
                                         const double *x,
                                         uintptr_t dim,
                                         double *out);

// Value at `x`; `+inf` outside the domain.
//
// # Safety
// `h` is a valid handle, `x` holds `dim` values and `out` is valid.
enum EpivalStatus epival_cell_pa_eval(const struct EpivalCellPa *h,
                                      const double *x,
                                      uintptr_t dim,
                                      double *out);

// # Safety
// `h` is a valid handle and `out` is valid.
enum EpivalStatus epival_max_affine_conjugate(const struct EpivalMaxAffine *h,
                                              struct EpivalCellPa **out);

// # Safety
// `h` is a valid handle and `out` is valid.
enum EpivalStatus epival_cell_pa_conjugate(const struct EpivalCellPa *h,
                                           struct EpivalMaxAffine **out);

// `∫ ζ(∇u) dx` over the domain of `u`.
//
// # Safety
// Handles are valid and `out` is valid.
enum EpivalStatus epival_zeta_valuation(const struct EpivalTestFunction *zeta,
                                        const struct EpivalCellPa *u,
                                        double *out);

// Dual form on a finite function: sum over kinks of `ζ(x) vol(∂v(x))`.
//
// # Safety
// Handles are valid and `out` is valid.
enum EpivalStatus epival_dual_zeta_valuation(const struct EpivalTestFunction *zeta,
                                             const struct EpivalMaxAffine *v,
                                             double *out);

// Hessian measures `Θ_0..Θ_n` of the box window `[b_lo, b_hi] × [c_lo, c_hi]`,
// written to `out[0..=n]`.
//
// # Safety
// The corner arrays hold `dim` values each and `out` holds `dim + 1`.
enum EpivalStatus epival_hessian_measures(const struct EpivalCellPa *u,
                                          uintptr_t dim,
                                          const double *b_lo,
                                          const double *b_hi,
                                          const double *c_lo,
                                          const double *c_hi,
                                          double *out);

// Homogeneous components `Z_0(u)..Z_n(u)` of the weight's valuation,
// written to `out[0..=n]`.
//
// # Safety
// Handles are valid and `out` holds `n + 1` values.
enum EpivalStatus epival_homogeneous_components(const struct EpivalTestFunction *zeta,
                                                const struct EpivalCellPa *u,
                                                uintptr_t n,
                                                double *out);

// JSON form of a function; release with `epival_string_free`.
//
// # Safety
// `h` is a valid handle and `out` is valid.
enum EpivalStatus epival_cell_pa_to_json(const struct EpivalCellPa *h, char **out);

// JSON form of a function; release with `epival_string_free`.
//
// # Safety
// `h` is a valid handle and `out` is valid.
enum EpivalStatus epival_max_affine_to_json(const struct EpivalMaxAffine *h, char **out);

// # Safety
// `s` is null or a string returned by this library, released once.
void epival_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPIVAL_H */

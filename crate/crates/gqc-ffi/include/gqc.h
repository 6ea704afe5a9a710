/* C interface for the gqc toolkit. Generated by cbindgen; do not edit. */

#ifndef GQC_FFI_H
#define GQC_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a C-ABI call.
typedef enum GqcStatus {
  GQC_STATUS_OK = 0,
  GQC_STATUS_NULL_POINTER = 1,
  GQC_STATUS_INVALID_UTF8 = 2,
  // Input text or numeric data failed to parse or validate.
  GQC_STATUS_PARSE_ERROR = 3,
  // Inputs are individually valid but their shapes do not match.
  GQC_STATUS_SHAPE_MISMATCH = 4,
  GQC_STATUS_INVALID_ARGUMENT = 5,
} GqcStatus;

// Probe selection for [`gqc_verify_identity`].
typedef enum GqcVerifyMode {
  GQC_VERIFY_MODE_PURE = 0,
  GQC_VERIFY_MODE_MIXED = 1,
} GqcVerifyMode;

// Opaque parametrization generator.
typedef struct GqcHamiltonian GqcHamiltonian;

// Opaque probe state (density matrix).
typedef struct GqcState GqcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null.
// The pointer stays valid until the next failing call on the same thread.
const char *gqc_last_error_message(void);

// Parse a probe state from its JSON form (state vector or density matrix).
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum GqcStatus gqc_state_from_json(const char *json, struct GqcState **out);

// Build a probe from `dim` state-vector amplitudes split into real and
// imaginary parts.
//
// # Safety
// `re` and `im` must point to `dim` readable doubles.
enum GqcStatus gqc_state_pure_new(size_t dim,
                                  const double *re,
                                  const double *im,
                                  struct GqcState **out);

// Build a probe from a row-major `dim x dim` density matrix split into
// real and imaginary parts.
//
// # Safety
// `re` and `im` must point to `dim * dim` readable doubles.
enum GqcStatus gqc_state_density_new(size_t dim,
                                     const double *re,
                                     const double *im,
                                     struct GqcState **out);

// Hilbert-space dimension of a probe.
//
// # Safety
// `state` must be a live handle from this library.
enum GqcStatus gqc_state_dim(const struct GqcState *state, size_t *out);

// # Safety
// `state` must be a handle from this library, not yet freed; null is a no-op.
void gqc_state_free(struct GqcState *state);

// Parse a generator from JSON (`{"diag": [...]}` or a matrix literal).
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum GqcStatus gqc_hamiltonian_from_json(const char *json, struct GqcHamiltonian **out);

// Diagonal generator from `dim` levels.
//
// # Safety
// `levels` must point to `dim` readable doubles.
enum GqcStatus gqc_hamiltonian_diagonal_new(size_t dim,
                                            const double *levels,
                                            struct GqcHamiltonian **out);

// Hermitian generator from a row-major `dim x dim` matrix split into real
// and imaginary parts.
//
// # Safety
// `re` and `im` must point to `dim * dim` readable doubles.
enum GqcStatus gqc_hamiltonian_matrix_new(size_t dim,
                                          const double *re,
                                          const double *im,
                                          struct GqcHamiltonian **out);

// # Safety
// `h` must be a handle from this library, not yet freed; null is a no-op.
void gqc_hamiltonian_free(struct GqcHamiltonian *h);

// Quantum Fisher information through the closed eigendecomposition form.
//
// # Safety
// `state` and `h` must be live handles; `out` must be writable.
enum GqcStatus gqc_qfi(const struct GqcState *state, const struct GqcHamiltonian *h, double *out);

// Quantum Fisher information through the symmetric logarithmic derivative.
//
// # Safety
// `state` and `h` must be live handles; `out` must be writable.
enum GqcStatus gqc_qfi_sld(const struct GqcState *state,
                           const struct GqcHamiltonian *h,
                           double *out);

// l1-norm coherence, in the generator's eigenbasis when `h` is non-null.
//
// # Safety
// `state` must be a live handle; `h` may be null; `out` must be writable.
enum GqcStatus gqc_coherence_l1(const struct GqcState *state,
                                const struct GqcHamiltonian *h,
                                double *out);

// Generalized coherence `M`; its square equals the Fisher information.
//
// # Safety
// `state` and `h` must be live handles; `out` must be writable.
enum GqcStatus gqc_general_coherence(const struct GqcState *state,
                                     const struct GqcHamiltonian *h,
                                     double *out);

// Full generalized-coherence report rendered as JSON. Free the returned
// string with [`gqc_string_free`].
//
// # Safety
// `state` and `h` must be live handles; `out` must be writable.
enum GqcStatus gqc_report_json(const struct GqcState *state,
                               const struct GqcHamiltonian *h,
                               char **out);

// # Safety
// `s` must have been returned by this library and not yet freed; null is a
// no-op.
void gqc_string_free(char *s);

// Sample `trials` random probes of dimension `dim` (with uniform diagonal
// generators) and report the worst relative deviation between the Fisher
// information and the squared generalized coherence.
//
// # Safety
// `out_max_rel_dev` must be writable.
enum GqcStatus gqc_verify_identity(enum GqcVerifyMode mode,
                                   size_t dim,
                                   uint64_t trials,
                                   uint64_t seed,
                                   double *out_max_rel_dev);

// Library version as a static string.
const char *gqc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GQC_FFI_H */

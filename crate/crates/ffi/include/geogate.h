#ifndef GEOGATE_H
#define GEOGATE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Values of the `mechanism` argument of [`geogate_two_qubit_audit`].
typedef enum GeogateMechanism {
  GEOGATE_MECHANISM_BERRY = 0,
  GEOGATE_MECHANISM_AHARONOV_ANANDAN = 1,
} GeogateMechanism;

// Values of the `which` argument of [`geogate_standard_gate`].
typedef enum GeogateStandardGate {
  GEOGATE_STANDARD_GATE_PI8 = 0,
  GEOGATE_STANDARD_GATE_HADAMARD = 1,
  GEOGATE_STANDARD_GATE_CZ = 2,
  GEOGATE_STANDARD_GATE_CNOT = 3,
  GEOGATE_STANDARD_GATE_SWAP = 4,
} GeogateStandardGate;

// Result code of every fallible call.
typedef enum GeogateStatus {
  GEOGATE_STATUS_OK = 0,
  GEOGATE_STATUS_NULL_POINTER = 1,
  GEOGATE_STATUS_INVALID_ARGUMENT = 2,
  GEOGATE_STATUS_DIMENSION_MISMATCH = 3,
  GEOGATE_STATUS_NOT_UNITARY = 4,
  GEOGATE_STATUS_UNREACHABLE = 5,
  GEOGATE_STATUS_GAP_CLOSED = 6,
  GEOGATE_STATUS_NOT_CYCLIC = 7,
  GEOGATE_STATUS_NUMERICAL = 8,
  GEOGATE_STATUS_PANIC = 9,
} GeogateStatus;

// Opaque unitary gate (2 x 2 or 4 x 4).
typedef struct GeogateUnitary GeogateUnitary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Owned by the
// library; valid until the next call.
const char *geogate_last_error(void);

// Library version as a static NUL-terminated string.
const char *geogate_version(void);

// Builds a unitary from `dim * dim` row-major real and imaginary parts.
//
// # Safety
// `re` and `im` must point to `dim * dim` doubles; `out` must be writable.
enum GeogateStatus geogate_unitary_new(size_t dim,
                                       const double *re,
                                       const double *im,
                                       struct GeogateUnitary **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `u` must come from this library and not be used afterwards.
void geogate_unitary_free(struct GeogateUnitary *u);

// Dimension of the gate, or 0 for a null handle.
//
// # Safety
// `u` must be null or a live handle.
size_t geogate_unitary_dim(const struct GeogateUnitary *u);

// Copies the row-major entries into `re` and `im`, each of length `len`
// (at least dim * dim).
//
// # Safety
// `re` and `im` must be writable for `len` doubles.
enum GeogateStatus geogate_unitary_entries(const struct GeogateUnitary *u,
                                           double *re,
                                           double *im,
                                           size_t len);

// Product `first` then `second`, i.e. the matrix second * first.
//
// # Safety
// Handles must be live; `out` must be writable.
enum GeogateStatus geogate_unitary_then(const struct GeogateUnitary *first,
                                        const struct GeogateUnitary *second,
                                        struct GeogateUnitary **out);

// # Safety
// `out` must be writable.
enum GeogateStatus geogate_standard_gate(uint32_t which, struct GeogateUnitary **out);

// Global-phase-invariant distance between two gates of equal dimension.
//
// # Safety
// Handles must be live; `distance` must be writable.
enum GeogateStatus geogate_distance(const struct GeogateUnitary *a,
                                    const struct GeogateUnitary *b,
                                    double *distance);

// Makhlin invariants G1 (complex) and G2 of a two-qubit gate.
//
// # Safety
// `u` must be live; output pointers must be writable.
enum GeogateStatus geogate_makhlin(const struct GeogateUnitary *u,
                                   double *g1_re,
                                   double *g1_im,
                                   double *g2);

// Whether a two-qubit gate is a product of single-qubit gates, with the
// defect used for the verdict.
//
// # Safety
// `u` must be live; output pointers must be writable.
enum GeogateStatus geogate_factorization(const struct GeogateUnitary *u,
                                         bool *factorizable,
                                         double *defect);

// exp(-i J t (S_a . S_b)) on two spins.
//
// # Safety
// `out` must be writable.
enum GeogateStatus geogate_exchange_gate(double j, double t, struct GeogateUnitary **out);

// The five-factor exchange sequence; equals CZ up to global phase.
//
// # Safety
// `out` must be writable.
enum GeogateStatus geogate_hybrid_cnot(struct GeogateUnitary **out);

// Berry-phase gate R(chi) diag(e^{i gamma}, e^{-i gamma}) R(chi)^dagger from
// the two-cycle echo. `slowness <= 0` returns the closed form; otherwise the
// schedule is integrated at that slowness. `distance` (nullable) receives
// the distance to the ideal gate.
//
// # Safety
// `out` must be writable; `distance` may be null.
enum GeogateStatus geogate_berry_gate(double gamma,
                                      double b1,
                                      double chi,
                                      double slowness,
                                      struct GeogateUnitary **out,
                                      double *distance);

// Aharonov-Anandan gate with zero dynamical phase over one exact period.
//
// # Safety
// `out` must be writable; `distance` may be null.
enum GeogateStatus geogate_aa_gate(double gamma,
                                   double b1,
                                   double kappa,
                                   double chi,
                                   struct GeogateUnitary **out,
                                   double *distance);

// Berry phase of single-spin eigenstate `index` (0: lower energy) over one
// loop of the field, from the discretized connection on `grid` points.
//
// # Safety
// `phase` must be writable.
enum GeogateStatus geogate_single_berry_phase(double b0,
                                              double b1,
                                              double kappa,
                                              size_t index,
                                              size_t grid,
                                              double *phase);

// Geometric phases of the four two-spin eigenstates and the factorization
// defect of the two-qubit gate they generate.
//
// # Safety
// `phases` must be writable for 4 doubles; `defect` must be writable.
enum GeogateStatus geogate_two_qubit_audit(uint32_t mechanism,
                                           double b0,
                                           double b1,
                                           double omega,
                                           double kappa_alpha,
                                           double kappa_beta,
                                           double j,
                                           double *phases,
                                           double *defect);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOGATE_H */

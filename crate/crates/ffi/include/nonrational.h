#ifndef NONRATIONAL_H
#define NONRATIONAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum NrStatus {
  NR_OK = 0,
  NR_ERR_NULL = 1,
  NR_ERR_UTF8 = 2,
  NR_ERR_PARSE = 3,
  NR_ERR_INVALID = 4,
  NR_ERR_DEGENERATE = 5,
  NR_ERR_RATIONAL_ROOT = 6,
  NR_ERR_UNSUPPORTED = 7,
  NR_ERR_VERIFICATION = 8,
  NR_ERR_DIMENSION = 9,
  NR_ERR_IO = 10,
  NR_ERR_PANIC = 11,
} NrStatus;

/**
 * A derived non-rationality certificate.
 */
typedef struct NrDerivation NrDerivation;

/**
 * A Lawrence lifting.
 */
typedef struct NrLifting NrLifting;

/**
 * A quad mesh.
 */
typedef struct NrMesh NrMesh;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call on the same thread; do not free.
 */
const char *nr_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void nr_string_free(char *s);

/**
 * Runs a construction script (source text) and derives its certificate.
 *
 * # Safety
 * `script` must be a NUL-terminated string; `out` must be writable.
 */
enum NrStatus nr_derive(const char *script, struct NrDerivation **out);

/**
 * Constraint polynomial in the parameter `a`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_derivation_constraint(const struct NrDerivation *h, char **out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_derivation_radicand(const struct NrDerivation *h, uint64_t *out);

/**
 * The chosen root, e.g. `2+1*sqrt(5)`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_derivation_root(const struct NrDerivation *h, char **out);

/**
 * Realization JSON of the certificate.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_derivation_realization_json(const struct NrDerivation *h, char **out);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void nr_derivation_free(struct NrDerivation *h);

/**
 * Lifts a realization given as JSON. `h1`/`h2` are rational strings; pass
 * NULL for both to use heights 1 and 2.
 *
 * # Safety
 * String arguments must be NUL-terminated or NULL as described; `out`
 * must be writable.
 */
enum NrStatus nr_lift(const char *realization_json,
                      const char *h1,
                      const char *h2,
                      struct NrLifting **out);

/**
 * Matrix shape of the lifting.
 *
 * # Safety
 * `h` must be a live handle; `rows` and `cols` must be writable.
 */
enum NrStatus nr_lifting_shape(const struct NrLifting *h, size_t *rows, size_t *cols);

/**
 * Lifting JSON.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_lifting_json(const struct NrLifting *h, char **out);

/**
 * Computes all edge, point-facet and line-facet certificates (lines are
 * the maximal collinear sets of the source points) and reports their
 * counts and how many verified. Returns `NrErrVerification` if any failed.
 *
 * # Safety
 * `h` must be a live handle; `counts` must point to 4 writable `size_t`:
 * edges, point facets, line facets, verified.
 */
enum NrStatus nr_lifting_certify(const struct NrLifting *h, size_t *counts);

/**
 * Recovers the configuration from the lifting and checks the round trip;
 * writes the recovered realization JSON.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_lifting_recover(const struct NrLifting *h, char **out);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void nr_lifting_free(struct NrLifting *h);

/**
 * Builds `gadget`, `s48`, `s144` or `pentagon`; `per_line` selects one
 * S144 per line instead of one per collinear triple for `pentagon`.
 *
 * # Safety
 * `target` must be NUL-terminated; `out` must be writable.
 */
enum NrStatus nr_surface(const char *target, bool per_line, struct NrMesh **out);

/**
 * # Safety
 * `h` must be a live handle; `faces` and `vertices` must be writable.
 */
enum NrStatus nr_mesh_counts(const struct NrMesh *h, size_t *faces, size_t *vertices);

/**
 * Checks every face for flatness and convexity and the pairwise vertex
 * sharing rule. Returns `NrErrVerification` on failure.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum NrStatus nr_mesh_verify(const struct NrMesh *h);

/**
 * Mesh JSON with exact coordinates.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_mesh_json(const struct NrMesh *h, char **out);

/**
 * Wavefront OBJ text with `precision` decimal digits.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NrStatus nr_mesh_obj(const struct NrMesh *h, size_t precision, char **out);

/**
 * # Safety
 * `h` must be NULL or a live handle, not used afterwards.
 */
void nr_mesh_free(struct NrMesh *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONRATIONAL_H */

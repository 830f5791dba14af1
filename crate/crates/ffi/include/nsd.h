#ifndef NSD_H
#define NSD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first four match the exit codes of the `nsd` tool.
 */
typedef enum NsdStatus {
  NSD_STATUS_OK = 0,
  NSD_STATUS_PARSE = 2,
  NSD_STATUS_VALIDATION = 3,
  NSD_STATUS_UNSUPPORTED = 4,
  NSD_STATUS_NULL_POINTER = 5,
  NSD_STATUS_INVALID_UTF8 = 6,
  NSD_STATUS_PANIC = 7,
} NsdStatus;

typedef enum NsdSetOp {
  NSD_SET_OP_UNION = 0,
  NSD_SET_OP_INTERSECT = 1,
  NSD_SET_OP_COMPLEMENT = 2,
  NSD_SET_OP_DIFFERENCE = 3,
} NsdSetOp;

/**
 * A digraph family `⟨D_n⟩`.
 */
typedef struct NsdFamily NsdFamily;

/**
 * A quasi-polynomial hypernatural.
 */
typedef struct NsdHyperNat NsdHyperNat;

/**
 * An ultimately periodic subset of ℕ.
 */
typedef struct NsdIndexSet NsdIndexSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library.
 */
const char *nsd_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void nsd_string_free(char *s);

/**
 * Parses a family spec such as `{"kind":"builtin","name":"dipath"}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum NsdStatus nsd_family_from_json(const char *json, struct NsdFamily **out);

/**
 * # Safety
 * `f` must be null or a handle from [`nsd_family_from_json`], not yet freed.
 */
void nsd_family_free(struct NsdFamily *f);

/**
 * Connectedness grade of `*D` under the oracle for `tower`, written as a
 * newly allocated string (`strong`, `strictly_unilateral`, ...).
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_family_classify(const struct NsdFamily *f, uint64_t tower, char **out);

/**
 * Arc-count bounds for a hyperfinite family, as a JSON object with
 * `category`, `inequality`, `p`, `q`, `witness` and `holds`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_family_check_bounds_json(const struct NsdFamily *f, uint64_t tower, char **out);

/**
 * Parses an index set such as `{"prefix":"01","period":2,"residues":[0]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum NsdStatus nsd_index_set_from_json(const char *json, struct NsdIndexSet **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void nsd_index_set_free(struct NsdIndexSet *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_index_set_contains(const struct NsdIndexSet *s, uint64_t n, bool *out);

/**
 * Whether the set belongs to the ultrafilter fixed by `tower`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_index_set_decide(const struct NsdIndexSet *s, uint64_t tower, bool *out);

/**
 * Applies a Boolean operation. `b` is ignored for complement and may be
 * null there.
 *
 * # Safety
 * `a` (and `b` for binary operations) must be live handles; `out` must be
 * writable.
 */
enum NsdStatus nsd_index_set_op(enum NsdSetOp op,
                                const struct NsdIndexSet *a,
                                const struct NsdIndexSet *b,
                                struct NsdIndexSet **out);

/**
 * Canonical JSON form of the set.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_index_set_to_json(const struct NsdIndexSet *s, char **out);

/**
 * Parses a hypernatural such as `{"prefix":[1],"period":2,"polys":[[3],[0,1]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum NsdStatus nsd_hypernat_from_json(const char *json, struct NsdHyperNat **out);

/**
 * # Safety
 * `h` must be null or a handle from this library, not yet freed.
 */
void nsd_hypernat_free(struct NsdHyperNat *h);

/**
 * Value at index `n`; fails with `NSD_STATUS_VALIDATION` beyond `u64`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum NsdStatus nsd_hypernat_eval(const struct NsdHyperNat *h, uint64_t n, uint64_t *out);

/**
 * Standard part under the oracle for `tower`. `limited` is set to false for
 * an unlimited hypernatural, in which case `out` is left untouched.
 *
 * # Safety
 * `h` must be a live handle; `limited` and `out` must be writable.
 */
enum NsdStatus nsd_hypernat_limit(const struct NsdHyperNat *h,
                                  uint64_t tower,
                                  bool *limited,
                                  uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NSD_H */

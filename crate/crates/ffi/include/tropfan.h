#ifndef TROPFAN_H
#define TROPFAN_H

#include <stdbool.h>
#include <stddef.h>

typedef enum TfCriterion {
  TF_CRITERION_LOCAL = 0,
  TF_CRITERION_AKSNES = 1,
} TfCriterion;

typedef enum TfSpace {
  TF_SPACE_FAN = 0,
  TF_SPACE_COMPACTIFICATION = 1,
} TfSpace;

typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_UTF8 = 2,
  TF_STATUS_PARSE = 3,
  TF_STATUS_INVALID_FAN = 4,
  TF_STATUS_NOT_BALANCED = 5,
  TF_STATUS_UNSUPPORTED = 6,
  TF_STATUS_BUFFER_TOO_SMALL = 7,
  TF_STATUS_UNKNOWN_EXAMPLE = 8,
  TF_STATUS_PANIC = 9,
} TfStatus;

typedef enum TfTheory {
  TF_THEORY_ORDINARY = 0,
  TF_THEORY_BOREL_MOORE = 1,
  TF_THEORY_COMPACT = 2,
} TfTheory;

/**
 * A validated weighted fan.
 */
typedef struct TfFan TfFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a fan file.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum TfStatus tf_fan_from_json(const char *json, struct TfFan **out);

/**
 * Loads a built-in example by name.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum TfStatus tf_fan_from_example(const char *name, struct TfFan **out);

/**
 * Releases a fan; null is ignored.
 *
 * # Safety
 * `fan` must come from this library and not be used afterwards.
 */
void tf_fan_free(struct TfFan *fan);

/**
 * Ambient rank, dimension and number of rays.
 *
 * # Safety
 * `fan` must be a live handle; the out pointers must be valid.
 */
enum TfStatus tf_fan_info(const struct TfFan *fan,
                          size_t *ambient_rank,
                          size_t *dim,
                          size_t *num_rays);

/**
 * Canonical JSON of the fan, to be released with `tf_string_free`.
 *
 * # Safety
 * `fan` must be a live handle and `out` a valid pointer.
 */
enum TfStatus tf_fan_to_json(const struct TfFan *fan, char **out);

/**
 * Whether the fan's weights satisfy the balancing condition.
 *
 * # Safety
 * `fan` must be a live handle and `out` a valid pointer.
 */
enum TfStatus tf_is_balanced(const struct TfFan *fan, bool *out);

/**
 * The `(d+1) x (d+1)` table of dimensions, row-major with `p` the row.
 *
 * # Safety
 * `fan` must be a live handle, `buf` valid for `cap` entries and `len` a
 * valid pointer.
 */
enum TfStatus tf_homology(const struct TfFan *fan,
                          enum TfTheory theory,
                          enum TfSpace space,
                          size_t *buf,
                          size_t cap,
                          size_t *len);

/**
 * Whether the fan satisfies Poincaré duality.
 *
 * # Safety
 * `fan` must be a live handle and `out` a valid pointer.
 */
enum TfStatus tf_pd_check(const struct TfFan *fan, bool *out);

/**
 * Whether the fan is homologically smooth under the given criterion.
 *
 * # Safety
 * `fan` must be a live handle and `out` a valid pointer.
 */
enum TfStatus tf_smooth_check(const struct TfFan *fan, enum TfCriterion criterion, bool *out);

/**
 * Dimensions of the graded pieces of the Chow ring.
 *
 * # Safety
 * `fan` must be a live handle, `buf` valid for `cap` entries and `len` a
 * valid pointer.
 */
enum TfStatus tf_chow_dims(const struct TfFan *fan, size_t *buf, size_t cap, size_t *len);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library.
 */
const char *tf_last_error_message(void);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPFAN_H */

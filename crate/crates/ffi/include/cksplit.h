#ifndef CKSPLIT_H
#define CKSPLIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_ARGUMENT = 1,
  CK_STATUS_INVALID_UTF8 = 2,
  /**
   * Rejected input: malformed JSON, unknown vertex, invalid star, ...
   */
  CK_STATUS_INVALID_INPUT = 3,
  /**
   * A mathematical check failed.
   */
  CK_STATUS_VERIFICATION_FAILED = 4,
  CK_STATUS_PANIC = 5,
} CkStatus;

/**
 * Opaque graph handle.
 */
typedef struct CkGraph CkGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *ck_last_error(void);

/**
 * Library version as a static string.
 */
const char *ck_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ck_string_free(char *s);

/**
 * Parses a graph from its JSON text.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be writable.
 */
enum CkStatus ck_graph_from_json(const char *json, struct CkGraph **out);

/**
 * Releases a graph handle. NULL is ignored.
 *
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void ck_graph_free(struct CkGraph *g);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ck_graph_vertex_count(const struct CkGraph *g);

/**
 * Canonical JSON text of the graph.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CkStatus ck_graph_to_json(const struct CkGraph *g, char **out);

/**
 * Sinks, sources, acyclicity and amplification as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CkStatus ck_classify_json(const struct CkGraph *g, char **out);

/**
 * Valid star vertices for `sink` as a JSON array.
 *
 * # Safety
 * `g` must be a live handle, `sink` a NUL-terminated string, `out` writable.
 */
enum CkStatus ck_valid_stars_json(const struct CkGraph *g, const char *sink, char **out);

/**
 * Builds and verifies the splitting for `sink`. A NULL `star` selects the
 * non-unital embedding. The JSON holds the generator images, the symbolic
 * checklist and the K₀ matrices.
 *
 * # Safety
 * `g` must be a live handle, `sink` a NUL-terminated string, `star` NULL
 * or a NUL-terminated string, `out` writable.
 */
enum CkStatus ck_split_json(const struct CkGraph *g,
                            const char *sink,
                            const char *star,
                            char **out);

/**
 * KK chain under a named policy (`first`, `last`, `source`, `embed`; NULL
 * means `first`), with its K₀ matrices.
 *
 * # Safety
 * `g` must be a live handle, `policy` NULL or a NUL-terminated string,
 * `out` writable.
 */
enum CkStatus ck_chain_json(const struct CkGraph *g, const char *policy, char **out);

/**
 * K-groups of an acyclic amplified graph as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CkStatus ck_k_groups_json(const struct CkGraph *g, char **out);

/**
 * Flag-manifold graph of the type-A diagram of `rank` with `tags` marked.
 *
 * # Safety
 * `tags` must point to `ntags` readable values; `out` must be writable.
 */
enum CkStatus ck_flag_graph(size_t rank, const size_t *tags, size_t ntags, struct CkGraph **out);

/**
 * Skeleton chain records and K₀ matrices of a flag graph as JSON.
 *
 * # Safety
 * `tags` must point to `ntags` readable values; `out` must be writable.
 */
enum CkStatus ck_cw_summary_json(size_t rank, const size_t *tags, size_t ntags, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CKSPLIT_H */

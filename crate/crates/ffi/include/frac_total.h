#ifndef FRAC_TOTAL_H
#define FRAC_TOTAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every fallible call.
 */
typedef enum FtStatus {
  FT_STATUS_OK = 0,
  FT_STATUS_NULL_POINTER = 1,
  FT_STATUS_INVALID_UTF8 = 2,
  FT_STATUS_PARSE = 3,
  FT_STATUS_INVALID_GRAPH = 4,
  FT_STATUS_PRECONDITION = 5,
  FT_STATUS_BUDGET = 6,
  FT_STATUS_INTERNAL = 7,
  FT_STATUS_IO = 8,
  FT_STATUS_OUT_OF_RANGE = 9,
} FtStatus;

/**
 * Opaque graph handle.
 */
typedef struct FtGraph FtGraph;

/**
 * Opaque level-table handle.
 */
typedef struct FtTable FtTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *ft_last_error(void);

/**
 * Static name of a status code.
 */
const char *ft_status_name(enum FtStatus status);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void ft_string_free(char *s);

/**
 * Parse a graph in the 1-indexed `p`/`e` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FtStatus ft_graph_parse(const char *text, struct FtGraph **out);

/**
 * The Petersen graph.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum FtStatus ft_graph_petersen(struct FtGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library not yet freed.
 */
void ft_graph_free(struct FtGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t ft_graph_vertex_count(const struct FtGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t ft_graph_edge_count(const struct FtGraph *g);

/**
 * Girth, or 0 for a forest.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
size_t ft_graph_girth(const struct FtGraph *g);

/**
 * Level table for `k` levels, damping `xi_num / xi_den` and maximum degree
 * `delta`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum FtStatus ft_table_new(size_t k,
                           int64_t xi_num,
                           int64_t xi_den,
                           size_t delta,
                           struct FtTable **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library not yet freed.
 */
void ft_table_free(struct FtTable *t);

/**
 * Number of levels.
 *
 * # Safety
 * `t` must be a live table handle.
 */
size_t ft_table_levels(const struct FtTable *t);

/**
 * `p(level)` and `q(level)` for `level` in `1..=k`, as doubles.
 *
 * # Safety
 * `t` must be a live table handle, `p` and `q` writable pointers.
 */
enum FtStatus ft_table_get(const struct FtTable *t, size_t level, double *p, double *q);

/**
 * Exact `p(level)` and `q(level)` as `"num/den"` strings, freed with
 * [`ft_string_free`].
 *
 * # Safety
 * `t` must be a live table handle, `p` and `q` writable pointers.
 */
enum FtStatus ft_table_get_exact(const struct FtTable *t, size_t level, char **p, char **q);

/**
 * `p*` and `q*` as doubles.
 *
 * # Safety
 * `t` must be a live table handle, `p_star` and `q_star` writable pointers.
 */
enum FtStatus ft_table_means(const struct FtTable *t, double *p_star, double *q_star);

/**
 * Exact fractional total chromatic number as a `"num/den"` string.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a writable pointer.
 */
enum FtStatus ft_fractional_total_chromatic(const struct FtGraph *g, char **out);

/**
 * Run `trials` samples on a cubic graph, with the 2-factor complementary to
 * a maximum matching and boundary edges spaced `gap` apart, and write the
 * number of structural violations found.
 *
 * # Safety
 * `g` must be a live graph handle and `violations` a writable pointer.
 */
enum FtStatus ft_sample_check(const struct FtGraph *g,
                              size_t k,
                              int64_t xi_num,
                              int64_t xi_den,
                              size_t gap,
                              uint64_t trials,
                              uint64_t seed,
                              uint64_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAC_TOTAL_H */

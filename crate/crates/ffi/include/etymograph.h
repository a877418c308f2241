#ifndef ETYMOGRAPH_H
#define ETYMOGRAPH_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EtgStatus {
  ETG_STATUS_OK = 0,
  ETG_STATUS_NULL_POINTER = 1,
  ETG_STATUS_INVALID_UTF8 = 2,
  ETG_STATUS_IO = 3,
  ETG_STATUS_PARSE = 4,
  ETG_STATUS_INVALID_ARGUMENT = 5,
  ETG_STATUS_UNKNOWN_WORD = 6,
  ETG_STATUS_ZERO_NORM = 7,
  ETG_STATUS_EMPTY = 8,
  ETG_STATUS_NUMERICAL = 9,
  ETG_STATUS_BUFFER_TOO_SMALL = 10,
  ETG_STATUS_PANIC = 11,
} EtgStatus;

typedef enum EtgMode {
  ETG_MODE_DOT = 0,
  ETG_MODE_COSINE = 1,
} EtgMode;

/**
 * Opaque set of word (or root) vectors.
 */
typedef struct EtgEmbeddings EtgEmbeddings;

/**
 * Opaque lexicon graph.
 */
typedef struct EtgGraph EtgGraph;

/**
 * Factorization settings for [`etg_embed`].
 */
typedef struct EtgEmbedOptions {
  size_t k;
  uint64_t seed;
  size_t oversampling;
  size_t power_iterations;
  /**
   * 0 = one per core, 1 = sequential and bit-reproducible
   */
  size_t threads;
} EtgEmbedOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *etg_last_error_message(void);

/**
 * Reads a `word<TAB>roots` lexicon file and builds its graph.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum EtgStatus etg_graph_from_file(const char *path, bool char_roots, struct EtgGraph **out);

/**
 * Builds a graph from lexicon text held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum EtgStatus etg_graph_from_string(const char *text, bool char_roots, struct EtgGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be freed already; NULL is ignored.
 */
void etg_graph_free(struct EtgGraph *graph);

/**
 * Word, root and edge counts; any of the out pointers may be NULL.
 *
 * # Safety
 * `graph` must be a live handle; non-NULL out pointers must be writable.
 */
enum EtgStatus etg_graph_counts(const struct EtgGraph *graph,
                                size_t *words,
                                size_t *roots,
                                size_t *edges);

/**
 * Graph statistics as a JSON object. Free the string with [`etg_string_free`].
 *
 * # Safety
 * `graph` must be a live handle and `out` a writable pointer.
 */
enum EtgStatus etg_graph_stats_json(const struct EtgGraph *graph, char **out);

/**
 * Default factorization settings: k = 300, seed 42, oversampling 10,
 * 4 power iterations, sequential.
 */
struct EtgEmbedOptions etg_embed_options_default(void);

/**
 * Factorizes the graph's biadjacency matrix and returns the word vectors.
 *
 * # Safety
 * `graph` must be a live handle, `options` readable and `out` writable.
 */
enum EtgStatus etg_embed(const struct EtgGraph *graph,
                         const struct EtgEmbedOptions *options,
                         struct EtgEmbeddings **out);

/**
 * Loads vectors in the `N k` text format (plus `.meta` sidecar if present).
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum EtgStatus etg_embeddings_load(const char *path, struct EtgEmbeddings **out);

/**
 * Writes vectors to `path` and provenance to `path.meta`.
 *
 * # Safety
 * `embeddings` must be a live handle and `path` a NUL-terminated string.
 */
enum EtgStatus etg_embeddings_save(const struct EtgEmbeddings *embeddings, const char *path);

/**
 * # Safety
 * `embeddings` must come from this library and not be freed already; NULL is ignored.
 */
void etg_embeddings_free(struct EtgEmbeddings *embeddings);

/**
 * Number of words and vector dimension; either out pointer may be NULL.
 *
 * # Safety
 * `embeddings` must be a live handle; non-NULL out pointers must be writable.
 */
enum EtgStatus etg_embeddings_shape(const struct EtgEmbeddings *embeddings,
                                    size_t *len,
                                    size_t *dimension);

/**
 * Copies the vector of `word` into `buf`, which must hold at least
 * `dimension` doubles.
 *
 * # Safety
 * `embeddings` must be a live handle, `word` a NUL-terminated string and
 * `buf` writable for `buf_len` doubles.
 */
enum EtgStatus etg_embeddings_vector(const struct EtgEmbeddings *embeddings,
                                     const char *word,
                                     double *buf,
                                     size_t buf_len);

/**
 * Similarity of two words.
 *
 * # Safety
 * `embeddings` must be a live handle, the words NUL-terminated strings and
 * `out` writable.
 */
enum EtgStatus etg_similarity(const struct EtgEmbeddings *embeddings,
                              const char *word1,
                              const char *word2,
                              enum EtgMode mode,
                              double *out);

/**
 * Evaluates the vectors against a synonym file and returns the report as
 * JSON. Free the string with [`etg_string_free`].
 *
 * # Safety
 * `embeddings` must be a live handle, `synonyms_path` a NUL-terminated
 * string and `out` writable.
 */
enum EtgStatus etg_evaluate_json(const struct EtgEmbeddings *embeddings,
                                 const char *synonyms_path,
                                 size_t n_random,
                                 uint64_t seed,
                                 enum EtgMode mode,
                                 double coverage,
                                 char **out);

/**
 * # Safety
 * `s` must be a string returned by this library and not freed already; NULL is ignored.
 */
void etg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ETYMOGRAPH_H */

/* C interface to the generalized-mean library.
 *
 * All data crosses the boundary as documents (JSON text, see document.hpp for
 * the format) held in opaque gm_document handles. Every call returns a
 * gm_status; on failure the message is available from gm_last_error_message()
 * on the calling thread and output handles are left NULL. Handles are
 * immutable and may be shared between threads.
 */
#ifndef GMEAN_GMEAN_H
#define GMEAN_GMEAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(GMEAN_BUILDING_LIBRARY)
#define GMEAN_API __attribute__((visibility("default")))
#else
#define GMEAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gm_status {
  GM_OK = 0,
  GM_ERR_INTERNAL = 1,
  GM_ERR_VALIDATION = 2,
  GM_ERR_PRECONDITION = 3,
  GM_ERR_CAPACITY = 4,
  GM_ERR_INDEX = 5,
  GM_ERR_DOMAIN = 6,
  GM_ERR_EMPTY_SUPPORT = 7,
  GM_ERR_OVERFLOW = 8,
  GM_ERR_IO = 9,
  GM_ERR_ARGUMENT = 10
} gm_status;

typedef struct gm_document gm_document;

GMEAN_API const char* gm_version(void);
GMEAN_API const char* gm_status_name(gm_status status);
GMEAN_API const char* gm_last_error_message(void);

/* Documents. */
GMEAN_API gm_status gm_document_parse(const char* text, gm_document** out);
GMEAN_API gm_status gm_document_load(const char* path, gm_document** out);
GMEAN_API gm_status gm_document_save(const gm_document* doc, const char* path);
/* Canonical text; release with gm_string_free. */
GMEAN_API gm_status gm_document_to_string(const gm_document* doc, char** out);
/* "space", "function", "density", "set" or "report". */
GMEAN_API const char* gm_document_kind(const gm_document* doc);
/* Report status ("ok", "failed", "precondition-violation", "error"); NULL for other kinds. */
GMEAN_API const char* gm_document_status(const gm_document* doc);
GMEAN_API void gm_document_free(gm_document* doc);
GMEAN_API void gm_string_free(char* text);

/* Error report document for a failed call. */
GMEAN_API gm_status gm_error_report(const char* command, gm_status status, const char* message, gm_document** out);

/* Forward operator G_{N,m}; threads = 0 or 1 runs sequentially. */
GMEAN_API gm_status gm_apply(const gm_document* space, const gm_document* kernel, unsigned N, int grouped,
                             unsigned threads, gm_document** out);

/* Kernel recovery. kernel_out may be NULL. */
GMEAN_API gm_status gm_recover(const gm_document* space, const gm_document* mean, unsigned m, int with_oracle,
                               unsigned threads, gm_document** report, gm_document** kernel_out);

GMEAN_API gm_status gm_compose_check(const gm_document* space, const gm_document* kernel, unsigned m, unsigned N,
                                     gm_document** report);

/* Set lifting; image_out may be NULL. */
GMEAN_API gm_status gm_bhat(const gm_document* space, const gm_document* set, unsigned N, int require_conull,
                            gm_document** report, gm_document** image_out);

GMEAN_API gm_status gm_marginal(const gm_document* space, const gm_document* density, unsigned m,
                                gm_document** out);

/* density may be NULL (L-infinity part only); r is "p" or "p/q", NULL means 1. */
GMEAN_API gm_status gm_norms(const gm_document* space, const gm_document* kernel, unsigned N,
                             const gm_document* density, const char* r, gm_document** report);

GMEAN_API gm_status gm_check_domination(const gm_document* space, const gm_document* density,
                                        int require_condition, gm_document** report);

/* set_out may be NULL. Fails with GM_ERR_PRECONDITION when the domination condition fails. */
GMEAN_API gm_status gm_t_set(const gm_document* space, const gm_document* mean, const gm_document* density,
                             unsigned m, const char* r, gm_document** report, gm_document** set_out);

/* alpha may be NULL (L-infinity constant only). */
GMEAN_API gm_status gm_constants(unsigned N, unsigned m, const char* r, const char* alpha, gm_document** report);

/* indices may be NULL to use {1, 2, 4, 8, 16, 32}; density_out (last step) may be NULL. */
GMEAN_API gm_status gm_regularize(const gm_document* space, const gm_document* density, const uint64_t* indices,
                                  size_t count, gm_document** report, gm_document** density_out);

GMEAN_API gm_status gm_example_4_1(uint64_t M, uint64_t dense_limit, gm_document** report);

/* Random instances; mode is "exact" or "float"; zero_atom < 0 means none. */
GMEAN_API gm_status gm_generate_space(const char* mode, uint64_t seed, unsigned n, long zero_atom,
                                      gm_document** out);
GMEAN_API gm_status gm_generate_function(const gm_document* space, uint64_t seed, unsigned order, int symmetric,
                                         gm_document** out);
GMEAN_API gm_status gm_generate_density(const gm_document* space, uint64_t seed, unsigned N, int product,
                                        gm_document** out);

#ifdef __cplusplus
}
#endif

#endif

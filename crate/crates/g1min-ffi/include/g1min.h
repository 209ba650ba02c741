/* C ABI for the g1min library: exact invariants, special-fiber
 * classification and minimisation of genus one equations of degree <= 4.
 *
 * Hand-maintained; keep in sync with src/lib.rs.
 *
 * Ownership: every g1min_equation* produced by this library is released
 * with g1min_equation_free; every char* with g1min_string_free. Strings
 * returned through out-parameters are UTF-8 JSON documents. Passing a
 * null required pointer returns G1MIN_ERR_BAD_ARGUMENT and leaves the
 * outputs untouched.
 */

#ifndef G1MIN_H
#define G1MIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
enum {
    G1MIN_OK = 0,
    G1MIN_ERR_BAD_ARGUMENT = 1,  /* null pointer, bad prime, wrong degree */
    G1MIN_ERR_PARSE = 2,         /* malformed JSON or coefficients */
    G1MIN_ERR_SINGULAR = 3,      /* delta = 0 */
    G1MIN_ERR_NOT_INTEGRAL = 4,  /* equation not integral where required */
    G1MIN_ERR_UNSUPPORTED = 5,   /* input outside the implemented cases */
    G1MIN_ERR_UNDECIDED = 6      /* bounds exceeded; no certificate */
};

/* Opaque equation handle. */
typedef struct G1minEquation G1minEquation;

/* Parse a model-file JSON document:
 * {"degree": n, "coeffs": ["num" | "num/den", ...]}. */
int32_t g1min_equation_parse(const char *json, G1minEquation **out);

/* Serialize a handle back to model-file JSON (bit-exact round-trip). */
int32_t g1min_equation_to_json(const G1minEquation *eq, char **out);

void g1min_equation_free(G1minEquation *eq);
void g1min_string_free(char *s);

/* {"c4": "...", "c6": "...", "delta": "..."} as exact rational strings. */
int32_t g1min_invariants(const G1minEquation *eq, char **out);

/* Special-fiber class at a prime, with the standard position when one
 * exists: {"prime": p, "class": "...", "standard_position": {...}|null}. */
int32_t g1min_classify_fiber(const G1minEquation *eq, uint64_t prime,
                             char **out);

/* Normality verdict at a prime:
 * {"status": "normal"|"not-normal"|"not-proved-normal", ...}. */
int32_t g1min_normality(const G1minEquation *eq, uint64_t prime, char **out);

/* Level at a prime: (nu_p(delta) - nu_p(minimal delta)) / 12. */
int32_t g1min_level(const G1minEquation *eq, uint64_t prime,
                    uint64_t *out_level);

/* Writes 1 (minimal), 0 (not minimal) or -1 (undecided). */
int32_t g1min_is_minimal(const G1minEquation *eq, uint64_t prime,
                         int32_t *out_minimal);

/* Minimise at one prime. out_min receives a new handle, out_cert the
 * certificate JSON with the full move trail. depth bounds the guided
 * search; pass 0 for the default. */
int32_t g1min_minimise_local(const G1minEquation *eq, uint64_t prime,
                             size_t depth, G1minEquation **out_min,
                             char **out_cert);

/* Minimise at every prime at once; outputs as for the local variant. */
int32_t g1min_minimise_global(const G1minEquation *eq, size_t depth,
                              G1minEquation **out_min, char **out_cert);

/* Static description of a status code; do not free. */
const char *g1min_status_message(int32_t code);

#ifdef __cplusplus
}
#endif

#endif /* G1MIN_H */

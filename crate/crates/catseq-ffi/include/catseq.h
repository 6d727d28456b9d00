/* C API for the catseq calculus.
 *
 * Operations take JSON strings (or plain integers) and return a status code:
 *
 *   0  success
 *   1  mathematically negative result (contradiction, non-formal sequence,
 *      failed covering hypothesis, trace that does not replay)
 *   2  malformed input
 *   3  internal error
 *
 * Each call that takes a `catseq_result **out` allocates a result handle
 * (unless out is NULL); read it with catseq_result_json / catseq_result_error
 * and release it with catseq_result_free. Payloads are exactly the JSON the
 * catseq command line tool prints for the same operation.
 *
 * Sequences are JSON arrays such as [0,3,7,10] (an optional trailing "inf"
 * is accepted), or {"values":[0,3],"unknown_above":14} when entries past the
 * stored prefix are only known to exceed a degree. A degree_cap or index_cap
 * argument of 0 selects the default.
 */

#ifndef CATSEQ_H
#define CATSEQ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    CATSEQ_OK = 0,
    CATSEQ_NEGATIVE = 1,
    CATSEQ_BAD_INPUT = 2,
    CATSEQ_INTERNAL = 3
};

typedef struct CatseqResult CatseqResult;

/* sequence calculus */
int catseq_seq_min(const char *s, const char *t, CatseqResult **out);
int catseq_seq_star(const char *s, const char *t, CatseqResult **out);
int catseq_seq_closure(const char *s, uint64_t index_cap, CatseqResult **out);
int catseq_seq_formal(const char *s, CatseqResult **out);
int catseq_seq_optimal(uint64_t k, uint64_t n, CatseqResult **out);

/* graded algebras */
int catseq_algebra_validate(const char *algebra_json, uint64_t degree_cap,
                            CatseqResult **out);
int catseq_algebra_seq(const char *algebra_json, uint64_t degree_cap,
                       CatseqResult **out);
int catseq_algebra_tensor(const char *left_json, const char *right_json,
                          uint64_t degree_cap, CatseqResult **out);

/* realization */
int catseq_realize(const char *sequence_json, CatseqResult **out);
int catseq_wedge_seq(const char *wedge_json, CatseqResult **out);

/* inference */
int catseq_infer(const char *problems_json, uint64_t index_cap,
                 CatseqResult **out);
int catseq_infer_traced(const char *problems_json, uint64_t index_cap,
                        CatseqResult **out);
int catseq_ganea(const char *input_json, CatseqResult **out);
int catseq_replay(const char *trace_json, const char *problems_json,
                  CatseqResult **out);

/* result handles */
const char *catseq_result_json(const CatseqResult *result);
const char *catseq_result_error(const CatseqResult *result);
void catseq_result_free(CatseqResult *result);

const char *catseq_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CATSEQ_H */

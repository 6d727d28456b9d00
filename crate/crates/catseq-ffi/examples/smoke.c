/* Minimal consumer of the catseq C API: a star product, a realization, and
 * an inference run. Exits nonzero on any unexpected status. */

#include <stdio.h>
#include <string.h>

#include "catseq.h"

static int fail(const char *what, const CatseqResult *r) {
    const char *err = catseq_result_error(r);
    fprintf(stderr, "%s failed: %s\n", what, err ? err : "(no message)");
    return 1;
}

int main(void) {
    CatseqResult *r = NULL;

    if (catseq_seq_star("[0,2,10]", "[0,2]", &r) != CATSEQ_OK)
        return fail("seq_star", r);
    printf("star: %s\n", catseq_result_json(r));
    catseq_result_free(r);

    if (catseq_realize("[0,3,7]", &r) != CATSEQ_OK)
        return fail("realize", r);
    printf("realize: %s\n", catseq_result_json(r));
    catseq_result_free(r);

    const char *sp2 =
        "{\"name\":\"sp2\",\"simply_connected\":true,\"connectivity\":3,"
        "\"nonvanishing\":{\"degrees\":[3,7,10],\"complete_up_to\":10},"
        "\"formal_dimension\":10,"
        "\"cohomology_algebras\":[{\"field\":\"Q\",\"presentation\":{\"exterior\":[3,7]}}],"
        "\"known_cat\":3,\"index_cap\":6}";
    if (catseq_infer(sp2, 0, &r) != CATSEQ_OK)
        return fail("infer", r);
    const char *json = catseq_result_json(r);
    if (!strstr(json, "\"cat\":{\"lower\":3,\"upper\":3}"))
        return fail("infer payload", r);
    printf("infer: %s\n", json);
    catseq_result_free(r);

    /* a non-formal sequence must report status 1, not crash */
    if (catseq_seq_formal("[0,3,8,11]", &r) != CATSEQ_NEGATIVE)
        return fail("seq_formal status", r);
    catseq_result_free(r);

    printf("version: %s\n", catseq_version());
    return 0;
}

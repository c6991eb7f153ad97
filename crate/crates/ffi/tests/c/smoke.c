#include <stdio.h>
#include <string.h>

#include "primseq.h"

#define CHECK(cond)                                                    \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);         \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    PrimseqDistribution *d = NULL;
    PrimseqSequence *s = NULL;
    PrimseqBound *b = NULL;
    char *lo = NULL, *hi = NULL, *x = NULL, *w = NULL;
    size_t n = 0;

    CHECK(primseq_dist_parse("uniform", &d) == PRIMSEQ_STATUS_OK);
    CHECK(primseq_dist_sequence(d, 3, &s) == PRIMSEQ_STATUS_OK);
    CHECK(primseq_cdf_bound(s, "1/2", PRIMSEQ_SIDE_UPPER, NULL, &b) == PRIMSEQ_STATUS_OK);
    CHECK(primseq_bound_enclosure(b, &lo, &hi) == PRIMSEQ_STATUS_OK);
    CHECK(strcmp(lo, "5/6") == 0 && strcmp(hi, "5/6") == 0);
    CHECK(primseq_bound_atom_count(b, &n) == PRIMSEQ_STATUS_OK && n == 3);
    CHECK(primseq_bound_atom(b, 1, &x, &w) == PRIMSEQ_STATUS_OK);
    CHECK(strcmp(x, "1/2") == 0 && strcmp(w, "2/3") == 0);

    CHECK(primseq_cdf_bound(s, "2", PRIMSEQ_SIDE_UPPER, NULL, &b) == PRIMSEQ_STATUS_DOMAIN);
    CHECK(primseq_last_error_message() != NULL);

    primseq_string_free(lo);
    primseq_string_free(hi);
    primseq_string_free(x);
    primseq_string_free(w);
    primseq_bound_free(b);
    primseq_sequence_free(s);
    primseq_dist_free(d);
    printf("ok %s\n", primseq_version());
    return 0;
}

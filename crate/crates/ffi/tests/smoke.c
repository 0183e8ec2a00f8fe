#include <stdio.h>
#include <string.h>

#include "refined_chord.h"

static int fail(const char *what) {
    const char *msg = rc_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    RcDegree *d = NULL;
    RcPolynomial *n = NULL;
    char *text = NULL;

    if (rc_degree_parse("P2:3", &d) != RC_STATUS_OK) return fail("parse");
    RcCache *cache = rc_cache_new();
    if (rc_refined_invariant(cache, d, &n) != RC_STATUS_OK) return fail("invariant");
    if (rc_polynomial_to_string(n, RC_FORMAT_TEXT, &text) != RC_STATUS_OK) return fail("render");
    printf("%s\n", text);
    int ok = strcmp(text, "q + 7 + q^-1") == 0;
    rc_string_free(text);

    RcDegree *bad = NULL;
    ok = ok && rc_degree_parse("(1,0)", &bad) == RC_STATUS_INVALID_DEGREE;
    ok = ok && bad == NULL && rc_last_error() != NULL;

    rc_polynomial_free(n);
    rc_cache_free(cache);
    rc_degree_free(d);
    return ok ? 0 : 1;
}

#include <stdio.h>
#include <string.h>

#include "sqhom.h"

#define CHECK(cond)                                            \
    do {                                                       \
        if (!(cond)) {                                         \
            fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                          \
        }                                                      \
    } while (0)

int main(void) {
    SqhomSet *set = NULL;
    const char *spec = "{\"kind\":\"ordered_complex\",\"vertex_count\":4,\"preset\":\"boundary\",\"truncation\":3}";
    CHECK(sqhom_set_from_spec(spec, &set) == SQHOM_STATUS_OK);

    size_t betti[3];
    for (size_t n = 0; n < 3; n++) {
        int flagged = -1;
        CHECK(sqhom_betti(set, SQHOM_BETTI_METHOD_NORMALIZED_HODGE, n, &betti[n], &flagged) == SQHOM_STATUS_OK);
        CHECK(flagged == 0);
    }
    CHECK(betti[0] == 1 && betti[1] == 0 && betti[2] == 1);

    size_t count = 0;
    CHECK(sqhom_set_count(set, 9, &count) == SQHOM_STATUS_DEGREE_OUT_OF_RANGE);
    char msg[256];
    CHECK(sqhom_last_error_message(msg, sizeof msg) > 1);
    CHECK(strstr(msg, "degree") != NULL);
    sqhom_set_free(set);

    const char *argv[] = {"census", "-"};
    char *report = NULL;
    int exit_code = -1;
    CHECK(sqhom_run(argv, 2, spec, NULL, &report, &exit_code) == SQHOM_STATUS_OK);
    CHECK(exit_code == 0);
    CHECK(strstr(report, "\"status\": \"ok\"") != NULL);
    sqhom_string_free(report);

    CHECK(sqhom_set_from_spec("{\"kind\":\"discrete\"}", &set) == SQHOM_STATUS_INVALID_INPUT);
    printf("sqhom %s: C smoke test passed\n", sqhom_version());
    return 0;
}

#include <math.h>
#include <stdio.h>

#include "effcond.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        EffcondStatus s_ = (call);                                         \
        if (s_ != EFFCOND_STATUS_OK) {                                     \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,              \
                    effcond_last_error_message());                         \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    EffcondLattice *hex = NULL;
    EffcondSumTable *sums = NULL;
    EffcondSeries *series = NULL;
    EffcondTensor t;
    double v, re, im;

    CHECK(effcond_lattice_hexagonal(&hex));
    CHECK(effcond_sum_table_build(hex, 26, 1e-13, &sums));
    CHECK(effcond_sum_table_get(sums, 2, &re, &im));
    if (fabs(re - M_PI) > 1e-10) return 2;

    CHECK(effcond_solve(sums, 0.5, 1.0, 12, 0, 0.0, &t));
    CHECK(effcond_series_expand(sums, 26, &series));
    CHECK(effcond_series_coefficient(series, 7, 3, &re, &im));
    CHECK(effcond_closed_form(EFFCOND_FORMULA_PERRINS_HEX, 0.5, 1.0, &v));
    printf("%.10f %.10f %.10f\n", t.sigma11, re, v);

    if (effcond_closed_form(EFFCOND_FORMULA_KELLER_HEX, 0.95, 1.0, &v) != EFFCOND_STATUS_DOMAIN_ERROR)
        return 3;

    effcond_series_free(series);
    effcond_sum_table_free(sums);
    effcond_lattice_free(hex);
    return 0;
}

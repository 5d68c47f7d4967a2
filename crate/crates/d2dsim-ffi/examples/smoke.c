#include "d2dsim.h"
#include <stdio.h>
#include <assert.h>

int main(void) {
    D2dsimConfig *cfg = NULL;
    assert(d2dsim_config_default(&cfg) == D2DSIM_STATUS_OK);

    double lit = 0, cor = 0, pod = 0, k1 = 0, lo = 0, hi = 0;
    assert(d2dsim_cellular_outage(cfg, D2DSIM_VARIANT_LITERAL, &lit) == D2DSIM_STATUS_OK);
    assert(d2dsim_cellular_outage(cfg, D2DSIM_VARIANT_CORRECTED, &cor) == D2DSIM_STATUS_OK);
    assert(d2dsim_d2d_outage(cfg, &pod) == D2DSIM_STATUS_OK);
    assert(d2dsim_bessel_k1(1.0, &k1) == D2DSIM_STATUS_OK);
    assert(d2dsim_alpha_bounds(cfg, &lo, &hi) == D2DSIM_STATUS_OK);

    D2dsimEstimate est;
    assert(d2dsim_estimate_outage(cfg, 10000, 42, 2, &est) == D2DSIM_STATUS_OK);
    printf("lit=%.6f cor=%.6f pod=%.6f K1(1)=%.6f bounds=(%.3f,%.3f) mc=%.6f\n",
           lit, cor, pod, k1, lo, hi, est.p_oc);
    assert(est.trials == 10000);
    assert(lit > 0 && lit < 1 && cor > 0 && cor < 1);

    d2dsim_config_free(cfg);
    assert(d2dsim_bessel_k1(-1.0, &k1) == D2DSIM_STATUS_INVALID_ARGUMENT);
    puts("c smoke test ok");
    return 0;
}

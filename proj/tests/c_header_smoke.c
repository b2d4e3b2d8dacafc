/* Compiles as plain C to prove the public header stays C-compatible. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "spinmech/spinmech.h"

int main(void) {
    const char* version = spinmech_version();
    if (version == NULL || strlen(version) == 0) {
        fprintf(stderr, "empty version string\n");
        return 1;
    }

    double corrected = 0.0;
    spinmech_status st = spinmech_correct_population(0.09, 0.8, &corrected);
    if (st != SPINMECH_OK) {
        fprintf(stderr, "correct_population failed: %s\n", spinmech_last_error());
        return 1;
    }
    if (fabs(corrected - 0.45) > 1e-15) {
        fprintf(stderr, "unexpected corrected population %.17g\n", corrected);
        return 1;
    }

    spinmech_model* model = NULL;
    st = spinmech_model_load(TEST_CONFIG_PATH, &model);
    if (st != SPINMECH_OK) {
        fprintf(stderr, "model load failed: %s\n", spinmech_last_error());
        return 1;
    }
    double kappa = 0.0, gamma_m = 0.0;
    int sideband = 0;
    st = spinmech_derived_rates(model, &kappa, &gamma_m, &sideband);
    spinmech_model_free(model);
    if (st != SPINMECH_OK || sideband != 1) {
        fprintf(stderr, "derived rates failed\n");
        return 1;
    }

    printf("c header smoke ok: version %s, corrected %.2f\n", version, corrected);
    return 0;
}

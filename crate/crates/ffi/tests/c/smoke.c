#include <stdio.h>
#include <string.h>
#include "clairaut.h"

int main(void) {
    ClairautScenarioHandle *sc = NULL;
    if (clairaut_scenario_load("example-ii", &sc) != CLAIRAUT_STATUS_OK) {
        fprintf(stderr, "load: %s\n", clairaut_last_error());
        return 10;
    }
    if (clairaut_scenario_configure(sc, 3, 10, 0.0) != CLAIRAUT_STATUS_OK) return 11;

    char *presets = clairaut_presets();
    if (presets == NULL || strstr(presets, "map-example-ii") == NULL) return 12;
    clairaut_string_free(presets);

    double p0[4] = {1.0, 0.0, 0.0, 0.0}, v0[4] = {0.0, 1.0, 0.0, 0.0};
    ClairautTrajectory *t = NULL;
    if (clairaut_geodesic(sc, p0, v0, 4, 1.0, 0.01, &t) != CLAIRAUT_STATUS_OK) return 13;
    double inv = 0.0, drift = 1.0;
    clairaut_trajectory_sample(t, clairaut_trajectory_len(t) - 1, NULL, NULL, NULL, NULL, &inv);
    clairaut_trajectory_drift(t, &drift, NULL);
    if (inv < 1.0 - 1e-6 || inv > 1.0 + 1e-6 || drift > 1e-6) return 14;
    clairaut_trajectory_free(t);

    ClairautExpr *e = NULL;
    size_t pos = 0;
    if (clairaut_expr_parse("x1 +", 2, &e, &pos) != CLAIRAUT_STATUS_INVALID_INPUT || pos != 5) return 15;

    clairaut_scenario_free(sc);
    printf("ok\n");
    return 0;
}

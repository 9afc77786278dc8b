/* Plans a scenario file and prints each vehicle's latest start and arrival.
 *
 *   cargo build --release -p spp-ffi
 *   cc crates/ffi/examples/plan.c -Icrates/ffi/include \
 *      target/release/libspp_ffi.a -lpthread -ldl -lm -o plan
 *   ./plan crates/core/examples/integrator_oracle.json
 */
#include <stdio.h>

#include "spp.h"

static int report(SppStatus status) {
    const char *msg = spp_last_error_message();
    fprintf(stderr, "spp error %d: %s\n", (int)status, msg ? msg : "(none)");
    return 1;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s SCENARIO.json\n", argv[0]);
        return 2;
    }
    SppScenario *scenario = NULL;
    SppStatus st = spp_scenario_from_file(argv[1], &scenario);
    if (st != SPP_STATUS_OK) return report(st);

    SppPlan *plan = NULL;
    st = spp_plan_run(scenario, &plan);
    spp_scenario_free(scenario);
    if (st != SPP_STATUS_OK) return report(st);

    size_t n = 0;
    spp_plan_vehicle_count(plan, &n);
    for (size_t i = 0; i < n; ++i) {
        double lst = 0.0, arrival = 0.0;
        if (spp_plan_latest_start(plan, i, &lst) == SPP_STATUS_OK &&
            spp_plan_arrival_time(plan, i, &arrival) == SPP_STATUS_OK) {
            printf("vehicle %zu: latest start %.6f, arrival %.6f\n", i + 1, lst, arrival);
        } else {
            printf("vehicle %zu: not planned (%s)\n", i + 1, spp_last_error_message());
        }
    }
    bool safe = false;
    spp_plan_is_safe(plan, &safe);
    printf("safe: %s\n", safe ? "yes" : "no");
    spp_plan_free(plan);
    return 0;
}

#include <stdio.h>
#include "holoshannon.h"

int main(void) {
    HcScenario *scn = hc_scenario_ground();
    HcReport *report = NULL;
    if (hc_run_scenario(scn, &report) != HC_STATUS_OK) {
        fprintf(stderr, "%s\n", hc_last_error_message());
        return 2;
    }
    double bits = 0.0;
    hc_report_metric(report, "h_total_bits", &bits);
    printf("h_total_bits %.0f passed %d\n", bits, hc_report_all_passed(report));
    hc_report_free(report);
    hc_scenario_free(scn);
    return 0;
}

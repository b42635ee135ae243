#include <stdio.h>
#include "qheat.h"

int main(void) {
    QheatState *state = NULL;
    if (qheat_state_new_scenario("correlated_phi_pi", 1000.0, &state) != QHEAT_STATUS_OK) {
        fprintf(stderr, "%s\n", qheat_last_error());
        return 1;
    }
    double discord = 0.0;
    if (qheat_geometric_discord(state, &discord) != QHEAT_STATUS_OK) return 2;
    qheat_state_free(state);

    QheatLedger *ledger = NULL;
    if (qheat_ledger_run("correlated_phi_pi", 22, 2.32, 215.1, 1000.0, &ledger) != QHEAT_STATUS_OK) return 3;
    QheatThermoRow row;
    if (qheat_ledger_row(ledger, 1, &row) != QHEAT_STATUS_OK) return 4;
    qheat_ledger_free(ledger);

    if (qheat_state_new_scenario("bogus", 1000.0, &state) != QHEAT_STATUS_INVALID_ARGUMENT) return 5;
    if (qheat_last_error() == NULL) return 6;

    printf("%.4f %.6f\n", discord, row.q_a);
    return 0;
}

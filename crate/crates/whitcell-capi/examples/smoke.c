#include <stdio.h>
#include <assert.h>
#include "whitcell.h"

int main(void) {
    WhitcellDatum *datum = NULL;
    WhitcellStatus st = whitcell_datum_new("G2", 2, &datum);
    assert(st == WHITCELL_STATUS_OK);
    char *json = NULL;
    st = whitcell_whittaker_json(datum, "all", &json);
    assert(st == WHITCELL_STATUS_OK);
    printf("whittaker(G2, Delta) = %s\n", json);
    whitcell_string_free(json);
    int ok = 0;
    st = whitcell_oracle_check(datum, 5, &ok);
    assert(st == WHITCELL_STATUS_OK && ok == 1);
    printf("oracle n=5: ok\n");
    whitcell_datum_free(datum);
    st = whitcell_datum_new("Z", 2, &datum);
    printf("bad type -> %s\n", whitcell_status_name(st));
    return 0;
}

#include "cyents/cyents.h"

/* Compiled as C to keep the header C-clean. */
int capi_c_smoke(void) {
  char* json = NULL;
  cyents_status st = cyents_schema_export("round2", &json);
  if (st != CYENTS_OK || json == NULL) return 1;
  cyents_string_free(json);
  st = cyents_schema_export("round7", &json);
  if (st == CYENTS_OK) return 2;
  if (cyents_last_error()[0] == '\0') return 3;
  return 0;
}

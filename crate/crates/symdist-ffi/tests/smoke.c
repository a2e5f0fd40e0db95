#include "symdist.h"
#include <assert.h>
#include <stdio.h>
#include <string.h>

int main(void) {
  SymdistSequence *seq = NULL;
  SymdistStatus st = symdist_sequence_parse(
      "{\"n\":3,\"k\":1,\"m\":1,\"lambda\":\"1/1\","
      "\"elements\":[[\"1\"],[\"2\"],[\"4\"]]}",
      &seq);
  assert(st == SYMDIST_STATUS_OK);
  assert(symdist_sequence_n(seq) == 3);
  int distinct = -1;
  st = symdist_verify(seq, 0, -1, &distinct, NULL);
  assert(st == SYMDIST_STATUS_OK && distinct == 1);
  char *json = NULL;
  st = symdist_min_m_search(3, 1, 1, "1", "20", 0, &json);
  assert(st == SYMDIST_STATUS_OK);
  assert(strstr(json, "\"mMin\":\"4\"") != NULL);
  symdist_string_free(json);
  symdist_sequence_free(seq);
  st = symdist_sequence_parse("{bad", &seq);
  assert(st == SYMDIST_STATUS_PARSE);
  assert(strlen(symdist_last_error_message()) > 0);
  puts("c-abi smoke ok");
  return 0;
}

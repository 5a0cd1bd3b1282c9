#include <math.h>
#include <stdio.h>
#include <string.h>

#include "asrbench.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);      \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  char *out = NULL;
  CHECK(asrbench_normalize(">nh Y ktAbp", &out) == ASR_STATUS_OK);
  CHECK(strcmp(out, "Anh ktAbh") == 0);
  asrbench_string_free(out);

  AsrErrorCounts counts;
  CHECK(asrbench_wer("u1 a b c\n", "u1 a c\n", &counts) == ASR_STATUS_OK);
  CHECK(counts.deletions == 1 && counts.substitutions == 0 && counts.ref_len == 3);

  double a[2] = {0.2, 0.2};
  double b[4] = {0.0, 0.1, 0.1, 0.0};
  double g = 0.0;
  CHECK(asrbench_gap(a, 2, b, 2, &g) == ASR_STATUS_OK);
  CHECK(fabs(g - 0.05) < 1e-15);

  AsrPosterior *post = NULL;
  CHECK(asrbench_posterior_parse("ctcpost v1 1 2 0\n- a\n0 -inf\n", &post) == ASR_STATUS_OK);
  double lp = 0.0;
  CHECK(asrbench_ctc_log_prob(post, "", &lp) == ASR_STATUS_OK);
  CHECK(lp == 0.0);
  CHECK(asrbench_ctc_log_prob(post, "q", &lp) == ASR_STATUS_INVALID_ARGUMENT);
  CHECK(asrbench_last_error() != NULL);
  asrbench_posterior_free(post);

  CHECK(asrbench_posterior_parse("garbage", &post) == ASR_STATUS_PARSE);
  printf("ok %s\n", asrbench_version());
  return 0;
}

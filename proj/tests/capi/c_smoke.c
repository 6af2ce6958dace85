#include <stdio.h>
#include <string.h>

#include "graphlb/graphlb.h"

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);  \
      return 1;                                                   \
    }                                                             \
  } while (0)

int main(void) {
  graphlb_graph_params gp;
  graphlb_graph* g = NULL;
  graphlb_sim_params sp;
  graphlb_trace* t = NULL;
  uint64_t edges = 0;
  size_t samples = 0;
  double q1 = -1.0;
  char* csv = NULL;

  graphlb_graph_params_init(&gp);
  gp.family = "clique";
  gp.n = 30;
  EXPECT(graphlb_graph_generate(&gp, &g) == GRAPHLB_OK);
  EXPECT(graphlb_graph_edge_count(g, &edges) == GRAPHLB_OK && edges == 435);

  graphlb_sim_params_init(&sp);
  sp.lambda = 0.7;
  sp.horizon = 10.0;
  sp.grid = 1.0;
  sp.buffer = 2;
  EXPECT(graphlb_simulate(g, &sp, &t) == GRAPHLB_OK);
  EXPECT(graphlb_trace_samples(t, &samples) == GRAPHLB_OK && samples == 11);
  EXPECT(graphlb_trace_q(t, 10, 1, &q1) == GRAPHLB_OK && q1 >= 0.0 && q1 <= 1.0);
  EXPECT(graphlb_trace_to_csv(t, &csv) == GRAPHLB_OK);
  EXPECT(strncmp(csv, "t,q1", 4) == 0);
  graphlb_string_free(csv);

  EXPECT(graphlb_trace_q(NULL, 0, 1, &q1) == GRAPHLB_INVALID_ARGUMENT);
  EXPECT(strlen(graphlb_last_error()) > 0);

  graphlb_trace_free(t);
  graphlb_graph_free(g);
  printf("c smoke ok\n");
  return 0;
}

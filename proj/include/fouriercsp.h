/* FourierCSP C API: finite-domain CSP solving by continuous optimization.
 *
 * All functions returning fcsp_status report FCSP_OK on success; on failure
 * fcsp_last_error() returns a thread-local description of what went wrong.
 * Objects are opaque handles released with their matching _free function.
 */
#ifndef FOURIERCSP_H
#define FOURIERCSP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FCSP_OK = 0,
  FCSP_ERR_IO = 1,       /* file missing or unreadable/unwritable */
  FCSP_ERR_PARSE = 2,    /* malformed instance, expression, or mdd file */
  FCSP_ERR_INVALID = 3,  /* bad argument or broken invariant */
  FCSP_ERR_CAP = 4,      /* enumeration or size cap exceeded */
  FCSP_ERR_INTERNAL = 5
} fcsp_status;

typedef struct fcsp_instance fcsp_instance;
typedef struct fcsp_mdd fcsp_mdd;
typedef struct fcsp_report fcsp_report;

const char* fcsp_version(void);
const char* fcsp_last_error(void);
void fcsp_string_free(char* s);

/* ---- instances ------------------------------------------------------- */

fcsp_status fcsp_instance_read(const char* path, fcsp_instance** out);
fcsp_status fcsp_instance_parse(const char* text, fcsp_instance** out);
fcsp_status fcsp_instance_write(const fcsp_instance* inst, const char* path);
char* fcsp_instance_text(const fcsp_instance* inst);
void fcsp_instance_free(fcsp_instance* inst);

int fcsp_instance_var_count(const fcsp_instance* inst);
int fcsp_instance_constraint_count(const fcsp_instance* inst);
int fcsp_instance_hard_count(const fcsp_instance* inst);
int fcsp_instance_domain(const fcsp_instance* inst, int var_index); /* 0-based index */

/* Benchmark generators. Scheduling: cycles is the t-domain, ratio sets
 * jobs = ratio*cycles and the s-domain to 2*ratio. Coloring: 2C-regular graph
 * plus |V| soft parity hashes. Same seed, same instance, byte for byte. */
fcsp_status fcsp_gen_scheduling(int cycles, int ratio, unsigned long long seed, fcsp_instance** out);
fcsp_status fcsp_gen_coloring(int nodes, int colors, unsigned long long seed, fcsp_instance** out);

/* ---- solving --------------------------------------------------------- */

typedef struct {
  double step_size;      /* <= 0 selects the automatic 1/(W*sqrt(N)) step */
  int max_iter;          /* projected-gradient iterations per restart */
  int restarts;
  double eps;            /* stop when the squared gradient-mapping norm drops below */
  int rounding_argmax;   /* 0 = randomized rounding, 1 = argmax */
  int samples;           /* rounded assignments per local optimum */
  unsigned long long seed;
  double timeout_s;
  int deterministic;     /* reproducible reports, thread-count independent */
  int threads;           /* 0 = hardware concurrency */
  int use_batch;         /* batched edge-table evaluation engine */
} fcsp_solve_options;

void fcsp_solve_options_init(fcsp_solve_options* opts);

fcsp_status fcsp_solve(const fcsp_instance* inst, const fcsp_solve_options* opts, fcsp_report** out);

int fcsp_report_fully_satisfied(const fcsp_report* r);
int fcsp_report_hard_satisfied(const fcsp_report* r);
int fcsp_report_hard_total(const fcsp_report* r);
double fcsp_report_soft_cost(const fcsp_report* r);
double fcsp_report_weighted_violation(const fcsp_report* r);
int fcsp_report_timed_out(const fcsp_report* r);
double fcsp_report_wall_time(const fcsp_report* r);
int fcsp_report_assignment_len(const fcsp_report* r);
fcsp_status fcsp_report_assignment(const fcsp_report* r, int* buf, int buf_len);
char* fcsp_report_json(const fcsp_report* r); /* one line, machine parseable */
void fcsp_report_free(fcsp_report* r);

/* Exact discrete check of an assignment (values indexed by variable). */
fcsp_status fcsp_verify(const fcsp_instance* inst, const int* assignment, int len,
                        int* hard_satisfied, int* hard_total, double* soft_cost);

/* ---- decision diagrams ------------------------------------------------ */

/* Compile one constraint (0-based index) into an ordered reduced MDD. */
fcsp_status fcsp_mdd_build(const fcsp_instance* inst, int constraint_index, fcsp_mdd** out);
/* Read and validate a .mdd edge-table file. */
fcsp_status fcsp_mdd_read(const char* path, fcsp_mdd** out);
/* Write rows "vid nid eid cid", zero-padded to pad_to (0 = no padding). */
fcsp_status fcsp_mdd_write(const fcsp_mdd* m, const char* path, int pad_to);
/* Validate a .mdd file without keeping it. */
fcsp_status fcsp_mdd_check(const char* path);

int fcsp_mdd_node_count(const fcsp_mdd* m);
int fcsp_mdd_edge_count(const fcsp_mdd* m);
int fcsp_mdd_var_count(const fcsp_mdd* m);
/* Variable ids (1-based) and domain sizes, in diagram level order. */
fcsp_status fcsp_mdd_vars(const fcsp_mdd* m, int* ids, int* domains, int len);
/* Flat probability-row length: sum of the diagram's domain sizes. */
int fcsp_mdd_point_len(const fcsp_mdd* m);
/* Circuit-output probability and, if grad is non-NULL, dCOP/dp. p and grad
 * are flat concatenations of the rows in level order (fcsp_mdd_vars). */
fcsp_status fcsp_mdd_eval(const fcsp_mdd* m, const double* p, int p_len, double* cop, double* grad);
void fcsp_mdd_free(fcsp_mdd* m);

/* ---- metrics ----------------------------------------------------------- */

/* Penalized average runtime: unsolved or over-limit entries cost 2*limit. */
double fcsp_par2(const double* time_s, const int* solved, int n, double time_limit_s);
/* (1 + cost) / (1 + best_cost). */
double fcsp_relative_score(double cost, double best_cost);

#ifdef __cplusplus
}
#endif

#endif /* FOURIERCSP_H */

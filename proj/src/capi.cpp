#include "fouriercsp.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "core/bench.hpp"
#include "core/edge_table.hpp"
#include "core/oracle.hpp"
#include "core/optimizer.hpp"

using namespace fcsp;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

fcsp_status classify(const std::exception& e) {
  const std::string what = e.what();
  set_error(what);
  if (what.find("cannot open") != std::string::npos || what.find("cannot write") != std::string::npos)
    return FCSP_ERR_IO;
  if (what.find("cap exceeded") != std::string::npos) return FCSP_ERR_CAP;
  return FCSP_ERR_PARSE;
}

template <typename Fn>
fcsp_status guard(Fn&& fn) {
  try {
    fn();
    return FCSP_OK;
  } catch (const std::exception& e) {
    return classify(e);
  } catch (...) {
    set_error("unknown error");
    return FCSP_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct fcsp_instance {
  Instance inst;
};

struct fcsp_mdd {
  Mdd mdd;
  EdgeTable table;
};

struct fcsp_report {
  SolveReport report;
};

extern "C" {

const char* fcsp_version(void) { return "1.0.0"; }

const char* fcsp_last_error(void) { return g_last_error.c_str(); }

void fcsp_string_free(char* s) { delete[] s; }

fcsp_status fcsp_instance_read(const char* path, fcsp_instance** out) {
  if (!path || !out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] { *out = new fcsp_instance{read_instance_file(path)}; });
}

fcsp_status fcsp_instance_parse(const char* text, fcsp_instance** out) {
  if (!text || !out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] { *out = new fcsp_instance{read_instance_text(text)}; });
}

fcsp_status fcsp_instance_write(const fcsp_instance* inst, const char* path) {
  if (!inst || !path) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] { write_instance_file(inst->inst, path); });
}

char* fcsp_instance_text(const fcsp_instance* inst) {
  if (!inst) return nullptr;
  return dup_string(write_instance_text(inst->inst));
}

void fcsp_instance_free(fcsp_instance* inst) { delete inst; }

int fcsp_instance_var_count(const fcsp_instance* inst) { return inst ? inst->inst.var_count() : 0; }

int fcsp_instance_constraint_count(const fcsp_instance* inst) {
  return inst ? static_cast<int>(inst->inst.constraints.size()) : 0;
}

int fcsp_instance_hard_count(const fcsp_instance* inst) { return inst ? inst->inst.hard_count() : 0; }

int fcsp_instance_domain(const fcsp_instance* inst, int var_index) {
  if (!inst || var_index < 0 || var_index >= inst->inst.var_count()) return 0;
  return inst->inst.domain(var_index + 1);
}

fcsp_status fcsp_gen_scheduling(int cycles, int ratio, unsigned long long seed, fcsp_instance** out) {
  if (!out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    SchedulingSpec spec;
    spec.cycles = cycles;
    spec.workers = 2 * ratio;  // jobs = ratio*cycles = cycles*workers/2
    spec.seed = seed;
    *out = new fcsp_instance{gen_scheduling(spec)};
  });
}

fcsp_status fcsp_gen_coloring(int nodes, int colors, unsigned long long seed, fcsp_instance** out) {
  if (!out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    ColoringSpec spec;
    spec.nodes = nodes;
    spec.colors = colors;
    spec.seed = seed;
    *out = new fcsp_instance{gen_coloring(spec)};
  });
}

void fcsp_solve_options_init(fcsp_solve_options* opts) {
  if (!opts) return;
  opts->step_size = 0;
  opts->max_iter = 10000;
  opts->restarts = 32;
  opts->eps = 1e-6;
  opts->rounding_argmax = 0;
  opts->samples = 100;
  opts->seed = 0;
  opts->timeout_s = 1000.0;
  opts->deterministic = 0;
  opts->threads = 0;
  opts->use_batch = 0;
}

fcsp_status fcsp_solve(const fcsp_instance* inst, const fcsp_solve_options* opts, fcsp_report** out) {
  if (!inst || !out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    fcsp_solve_options defaults;
    fcsp_solve_options_init(&defaults);
    const fcsp_solve_options& o = opts ? *opts : defaults;
    SolverConfig config;
    config.auto_step = o.step_size <= 0;
    config.step_size = o.step_size;
    config.max_iter = o.max_iter;
    config.restarts = o.restarts;
    config.eps = o.eps;
    config.rounding = o.rounding_argmax ? RoundingMode::Argmax : RoundingMode::Randomized;
    config.samples = o.samples;
    config.seed = o.seed;
    config.timeout_s = o.timeout_s;
    config.deterministic = o.deterministic != 0;
    config.threads = o.threads;
    config.use_batch = o.use_batch != 0;
    *out = new fcsp_report{cls_solve(inst->inst, config)};
  });
}

int fcsp_report_fully_satisfied(const fcsp_report* r) { return r && r->report.fully_satisfied ? 1 : 0; }
int fcsp_report_hard_satisfied(const fcsp_report* r) { return r ? r->report.hard_satisfied : 0; }
int fcsp_report_hard_total(const fcsp_report* r) { return r ? r->report.hard_total : 0; }
double fcsp_report_soft_cost(const fcsp_report* r) { return r ? r->report.soft_cost : 0; }
double fcsp_report_weighted_violation(const fcsp_report* r) { return r ? r->report.weighted_violation : 0; }
int fcsp_report_timed_out(const fcsp_report* r) { return r && r->report.timed_out ? 1 : 0; }
double fcsp_report_wall_time(const fcsp_report* r) { return r ? r->report.wall_time_s : 0; }
int fcsp_report_assignment_len(const fcsp_report* r) {
  return r ? static_cast<int>(r->report.assignment.size()) : 0;
}

fcsp_status fcsp_report_assignment(const fcsp_report* r, int* buf, int buf_len) {
  if (!r || !buf) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  if (buf_len < static_cast<int>(r->report.assignment.size())) {
    set_error("buffer too small");
    return FCSP_ERR_INVALID;
  }
  for (size_t i = 0; i < r->report.assignment.size(); ++i) buf[i] = r->report.assignment[i];
  return FCSP_OK;
}

char* fcsp_report_json(const fcsp_report* r) { return r ? dup_string(r->report.to_json()) : nullptr; }

void fcsp_report_free(fcsp_report* r) { delete r; }

fcsp_status fcsp_verify(const fcsp_instance* inst, const int* assignment, int len, int* hard_satisfied,
                        int* hard_total, double* soft_cost) {
  if (!inst || !assignment) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    const VerifyResult vr = verify(inst->inst, std::span<const int>(assignment, static_cast<size_t>(len)));
    if (hard_satisfied) *hard_satisfied = vr.hard_satisfied;
    if (hard_total) *hard_total = vr.hard_total;
    if (soft_cost) *soft_cost = vr.soft_cost;
  });
}

fcsp_status fcsp_mdd_build(const fcsp_instance* inst, int constraint_index, fcsp_mdd** out) {
  if (!inst || !out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  if (constraint_index < 0 || constraint_index >= static_cast<int>(inst->inst.constraints.size())) {
    set_error("constraint index out of range");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    Mdd m = build_atomic(inst->inst, inst->inst.constraints[static_cast<size_t>(constraint_index)]);
    EdgeTable t = to_edge_table(m, inst->inst);
    *out = new fcsp_mdd{std::move(m), std::move(t)};
  });
}

fcsp_status fcsp_mdd_read(const char* path, fcsp_mdd** out) {
  if (!path || !out) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    EdgeTable t = read_mdd_file(path);
    Mdd m = mdd_from_table(t);
    *out = new fcsp_mdd{std::move(m), std::move(t)};
  });
}

fcsp_status fcsp_mdd_write(const fcsp_mdd* m, const char* path, int pad_to) {
  if (!m || !path) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    if (pad_to > 0 && pad_to < m->table.rows()) throw std::runtime_error("pad_to smaller than edge count");
    EdgeTable t = m->table;
    while (pad_to > t.rows()) {
      t.vid.push_back(0);
      t.nid.push_back(0);
      t.eid.push_back(0);
      t.cid.push_back(0);
    }
    write_mdd_file(t, path);
  });
}

fcsp_status fcsp_mdd_check(const char* path) {
  if (!path) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  return guard([&] { (void)read_mdd_file(path); });
}

int fcsp_mdd_node_count(const fcsp_mdd* m) { return m ? m->table.node_count : 0; }
int fcsp_mdd_edge_count(const fcsp_mdd* m) { return m ? m->table.edges : 0; }
int fcsp_mdd_var_count(const fcsp_mdd* m) { return m ? static_cast<int>(m->table.vars.size()) : 0; }

fcsp_status fcsp_mdd_vars(const fcsp_mdd* m, int* ids, int* domains, int len) {
  if (!m) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  if (len < static_cast<int>(m->table.vars.size())) {
    set_error("buffer too small");
    return FCSP_ERR_INVALID;
  }
  for (size_t i = 0; i < m->table.vars.size(); ++i) {
    if (ids) ids[i] = m->table.vars[i];
    if (domains) domains[i] = m->table.var_domain[i];
  }
  return FCSP_OK;
}

int fcsp_mdd_point_len(const fcsp_mdd* m) {
  if (!m) return 0;
  int n = 0;
  for (int d : m->table.var_domain) n += d;
  return n;
}

fcsp_status fcsp_mdd_eval(const fcsp_mdd* m, const double* p, int p_len, double* cop, double* grad) {
  if (!m || !p || !cop) {
    set_error("null argument");
    return FCSP_ERR_INVALID;
  }
  if (p_len != fcsp_mdd_point_len(m)) {
    set_error("probability vector length mismatch");
    return FCSP_ERR_INVALID;
  }
  return guard([&] {
    // Wrap the diagram's variables in a standalone instance so the flat
    // layout is exactly the concatenation of rows in level order.
    Instance tiny;
    std::vector<int> remap(m->table.vars.empty()
                               ? size_t{1}
                               : static_cast<size_t>(*std::max_element(m->table.vars.begin(),
                                                                       m->table.vars.end())) + 1,
                           0);
    for (size_t i = 0; i < m->table.vars.size(); ++i)
      remap[static_cast<size_t>(m->table.vars[i])] =
          tiny.add_var("x" + std::to_string(m->table.vars[i]), m->table.var_domain[i]);
    Mdd local = m->mdd;
    for (auto& nd : local.nodes) nd.var = remap[static_cast<size_t>(nd.var)];
    for (auto& v : local.order) v = remap[static_cast<size_t>(v)];
    SimplexPoint point(tiny);
    for (int k = 0; k < p_len; ++k) point.flat()[static_cast<size_t>(k)] = p[k];
    if (grad) {
      std::vector<double> g(static_cast<size_t>(p_len), 0.0);
      *cop = cop_gradient(local, point, g, 1.0);
      for (int k = 0; k < p_len; ++k) grad[k] = g[static_cast<size_t>(k)];
    } else {
      *cop = top_down(local, point);
    }
  });
}

void fcsp_mdd_free(fcsp_mdd* m) { delete m; }

double fcsp_par2(const double* time_s, const int* solved, int n, double time_limit_s) {
  if (!time_s || !solved || n <= 0) return 0;
  std::vector<double> t(time_s, time_s + n);
  std::vector<bool> s(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = solved[i] != 0;
  return par2(t, s, time_limit_s);
}

double fcsp_relative_score(double cost, double best_cost) {
  return relative_score(cost, best_cost);
}

}  // extern "C"

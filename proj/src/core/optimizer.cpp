#include "optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fcsp {

SimplexPoint pga(const EvalFn& eval, SimplexPoint start, const PgaOptions& opts, PgaTrace* trace) {
  SimplexPoint p = std::move(start);
  SimplexPoint next = p;
  const size_t len = p.flat().size();
  std::vector<double> grad(len, 0.0);
  std::vector<double> g(len, 0.0);

  double value = eval(p, grad);
  int it = 0;
  bool converged = false;
  while (true) {
    const double norm2 = gradient_mapping(p, grad, opts.eta, next, g);
    if (trace) {
      trace->objective.push_back(value);
      trace->grad_norm.push_back(std::sqrt(norm2));
    }
    if (norm2 <= opts.eps) {
      converged = true;
      break;
    }
    if (it >= opts.max_iter || std::chrono::steady_clock::now() >= opts.deadline) break;
    std::swap(p.flat(), next.flat());
    std::fill(grad.begin(), grad.end(), 0.0);
    value = eval(p, grad);
    ++it;
  }
  if (trace) {
    trace->iterations = it;
    trace->converged = converged;
  }
  return p;
}

std::vector<int> round_point(const SimplexPoint& p, RoundingMode mode, Rng& rng) {
  std::vector<int> out(static_cast<size_t>(p.var_count()), 0);
  for (int i = 1; i <= p.var_count(); ++i) {
    const auto row = p.row(i);
    if (mode == RoundingMode::Argmax) {
      size_t best = 0;
      for (size_t j = 1; j < row.size(); ++j)
        if (row[j] > row[best]) best = j;
      out[static_cast<size_t>(i - 1)] = static_cast<int>(best);
    } else {
      const double u = rng.next_double();
      double acc = 0;
      size_t pick = row.size() - 1;
      for (size_t j = 0; j < row.size(); ++j) {
        acc += row[j];
        if (u < acc) {
          pick = j;
          break;
        }
      }
      out[static_cast<size_t>(i - 1)] = static_cast<int>(pick);
    }
  }
  return out;
}

namespace {

struct Candidate {
  bool valid = false;
  std::vector<int> assignment;
  VerifyResult score;
};

// Lexicographic: more hard constraints satisfied, then lower soft cost.
bool better(const VerifyResult& a, const VerifyResult& b) {
  if (a.hard_satisfied != b.hard_satisfied) return a.hard_satisfied > b.hard_satisfied;
  return a.soft_cost < b.soft_cost;
}

struct RestartResult {
  bool ran = false;
  Candidate best;
  RestartSummary summary;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string SolveReport::to_json() const {
  std::ostringstream out;
  out << "{\"fully_satisfied\":" << (fully_satisfied ? "true" : "false");
  out << ",\"hard_satisfied\":" << hard_satisfied;
  out << ",\"hard_total\":" << hard_total;
  out << ",\"soft_cost\":" << format_double(soft_cost);
  out << ",\"weighted_violation\":" << format_double(weighted_violation);
  out << ",\"timed_out\":" << (timed_out ? "true" : "false");
  out << ",\"seed\":" << seed;
  out << ",\"deterministic\":" << (deterministic ? "true" : "false");
  out << ",\"wall_time_s\":" << format_double(deterministic ? 0.0 : wall_time_s);
  out << ",\"restarts\":[";
  for (size_t i = 0; i < restarts.size(); ++i) {
    if (i) out << ',';
    out << "{\"iterations\":" << restarts[i].iterations << ",\"grad_norm\":" << format_double(restarts[i].grad_norm)
        << ",\"objective\":" << format_double(restarts[i].objective) << '}';
  }
  out << "],\"assignment\":[";
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (i) out << ',';
    out << assignment[i];
  }
  out << "]}";
  return out.str();
}

SolveReport cls_solve(const Instance& inst, const SolverConfig& config) {
  CompileOptions copts;
  const Compiled comp = compile(inst, copts);
  return cls_solve(inst, comp, config);
}

SolveReport cls_solve(const Instance& inst, const Compiled& comp, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(config.timeout_s));

  const double w_sum = comp.weight_sum;
  const double n_sum = static_cast<double>(inst.total_domain());
  const double eta = config.auto_step ? 1.0 / (w_sum * std::sqrt(n_sum)) : config.step_size;

  BatchObjective batch_obj;
  if (config.use_batch) batch_obj = build_batch_objective(inst, comp);

  const int thread_count = config.threads > 0 ? config.threads : ThreadPool::hardware_threads();
  ThreadPool pool(thread_count);
  // Restart-level parallelism; objective-level only when there is one restart.
  // Deterministic runs keep the objective serial so every trajectory is
  // bit-identical for any thread count.
  ThreadPool* obj_pool = (config.restarts == 1 && !config.deterministic) ? &pool : nullptr;

  const EvalFn eval = [&](const SimplexPoint& p, std::span<double> grad) {
    if (config.use_batch) return batch_objective_eval(batch_obj, p, grad, obj_pool);
    return objective(comp, p, grad, obj_pool);
  };

  SolveReport report;
  report.seed = config.seed;
  report.deterministic = config.deterministic;
  report.hard_total = inst.hard_count();

  auto run_restart = [&](int r, RestartResult& out) {
    if (std::chrono::steady_clock::now() >= deadline) return;
    out.ran = true;
    Rng rng = Rng::stream(config.seed, static_cast<uint64_t>(r));
    SimplexPoint start = r == 0 ? SimplexPoint::uniform(inst) : SimplexPoint::random(inst, rng);
    PgaOptions popts;
    popts.eta = eta;
    popts.max_iter = config.max_iter;
    popts.eps = config.eps;
    popts.deadline = deadline;
    PgaTrace trace;
    const SimplexPoint opt = pga(eval, std::move(start), popts, &trace);
    out.summary.iterations = trace.iterations;
    out.summary.grad_norm = trace.grad_norm.empty() ? 0.0 : trace.grad_norm.back();
    out.summary.objective = trace.objective.empty() ? 0.0 : trace.objective.back();

    const int samples = config.rounding == RoundingMode::Argmax ? 1 : std::max(1, config.samples);
    for (int s = 0; s < samples; ++s) {
      std::vector<int> x = round_point(opt, config.rounding, rng);
      VerifyResult vr = verify(inst, x);
      if (!out.best.valid || better(vr, out.best.score)) {
        out.best.valid = true;
        out.best.assignment = std::move(x);
        out.best.score = vr;
      }
      if (out.best.score.fully_satisfied) break;
      if (s + 1 < samples && std::chrono::steady_clock::now() >= deadline) break;
    }
  };

  Candidate incumbent;
  bool stop = false;
  // Fixed-size waves keep scheduling (and thus the report) independent of the
  // thread count; the first fully satisfying restart index wins.
  const int wave = 8;
  for (int base = 0; base < config.restarts && !stop; base += wave) {
    const int count = std::min(wave, config.restarts - base);
    std::vector<RestartResult> results(static_cast<size_t>(count));
    pool.parallel_for(count, [&](int i) { run_restart(base + i, results[static_cast<size_t>(i)]); });
    for (int i = 0; i < count && !stop; ++i) {
      RestartResult& rr = results[static_cast<size_t>(i)];
      if (!rr.ran) {
        stop = true;
        break;
      }
      report.restarts.push_back(rr.summary);
      if (rr.best.valid && (!incumbent.valid || better(rr.best.score, incumbent.score))) incumbent = rr.best;
      if (incumbent.valid && incumbent.score.fully_satisfied) stop = true;
    }
    if (std::chrono::steady_clock::now() >= deadline) stop = true;
  }
  if (incumbent.valid) {
    report.assignment = incumbent.assignment;
    report.hard_satisfied = incumbent.score.hard_satisfied;
    report.soft_cost = incumbent.score.soft_cost;
    report.weighted_violation = incumbent.score.weighted_violation;
    report.fully_satisfied = incumbent.score.fully_satisfied;
  }
  report.timed_out = std::chrono::steady_clock::now() >= deadline;
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace fcsp

#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "batch.hpp"
#include "bench.hpp"
#include "cop.hpp"
#include "simplex.hpp"

namespace fcsp {

enum class RoundingMode { Randomized, Argmax };

struct SolverConfig {
  bool auto_step = true;   // eta = 1/(W*sqrt(N)) with W = sum of weights, N = sum of domain sizes
  double step_size = 0;    // used when auto_step is false
  int max_iter = 10000;    // per restart
  int restarts = 32;
  double eps = 1e-6;       // convergence threshold on ||g||^2
  RoundingMode rounding = RoundingMode::Randomized;
  int samples = 100;       // rounded assignments per local optimum
  uint64_t seed = 0;
  double timeout_s = 1000.0;
  bool deterministic = false;
  int threads = 0;         // 0 = hardware concurrency
  bool use_batch = false;
};

struct PgaTrace {
  std::vector<double> objective;  // C(P_t), one entry per visited iterate
  std::vector<double> grad_norm;  // ||g(P_t)||, parallel to objective
  int iterations = 0;             // projected steps taken
  bool converged = false;         // stopped because ||g||^2 <= eps
};

// Objective and gradient at a point; must zero/own nothing (grad accumulates
// into a caller-cleared buffer through cop/batch evaluators).
using EvalFn = std::function<double(const SimplexPoint&, std::span<double>)>;

struct PgaOptions {
  double eta = 0.1;
  int max_iter = 10000;
  double eps = 1e-6;  // on ||g||^2
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

// Projected gradient ascent: P <- proj(P + eta * grad C(P)) until the
// gradient mapping is small or budgets run out.
SimplexPoint pga(const EvalFn& eval, SimplexPoint start, const PgaOptions& opts, PgaTrace* trace = nullptr);

// Randomized rounding samples value j for variable i with probability p[i][j];
// argmax takes the most probable value, lowest index on ties.
std::vector<int> round_point(const SimplexPoint& p, RoundingMode mode, Rng& rng);

struct RestartSummary {
  int iterations = 0;
  double grad_norm = 0;
  double objective = 0;
};

struct SolveReport {
  std::vector<int> assignment;
  int hard_satisfied = 0;
  int hard_total = 0;
  double soft_cost = 0;
  double weighted_violation = 0;
  bool fully_satisfied = false;
  bool timed_out = false;
  double wall_time_s = 0;
  uint64_t seed = 0;
  bool deterministic = false;
  std::vector<RestartSummary> restarts;

  std::string to_json() const;  // single line; wall time zeroed when deterministic
};

SolveReport cls_solve(const Instance& inst, const SolverConfig& config);
SolveReport cls_solve(const Instance& inst, const Compiled& comp, const SolverConfig& config);

}  // namespace fcsp

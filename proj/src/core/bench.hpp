#pragma once

#include <span>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

namespace fcsp {

// Task scheduling: |V| = cycles*workers/2 tasks, t_v in {0..cycles-1},
// s_v in {0..workers-1}; dependency edges u->v between index pairs u < v with
// probability 5^(u-v); LessThan on edges, NeqPair on every non-edge pair.
struct SchedulingSpec {
  int cycles = 32;   // domain of the t variables
  int workers = 4;   // domain of the s variables
  uint64_t seed = 0;

  int jobs() const { return cycles * workers / 2; }
};

Instance gen_scheduling(const SchedulingSpec& spec);

// Graph coloring with parity hashes: a 2C-regular graph on |V| nodes with a
// hard Neq per edge (weight |H| = |V|), plus |V| soft parity constraints,
// each over floor(|V|/2) distinct vertices.
struct ColoringSpec {
  int nodes = 512;
  int colors = 8;
  uint64_t seed = 0;
};

Instance gen_coloring(const ColoringSpec& spec);

// Edges of a random simple graph where every vertex has the given degree.
// Pairing model repaired by edge swaps; throws after bounded retries.
std::vector<std::pair<int, int>> random_regular_graph(int nodes, int degree, Rng& rng);

// Penalized average runtime: timeouts (or unsolved) count 2*T.
double par2(const std::vector<double>& time_s, const std::vector<bool>& solved, double time_limit_s);

// (1 + cost) / (1 + best_cost).
double relative_score(double cost, double best_cost);

struct VerifyResult {
  int hard_satisfied = 0;
  int hard_total = 0;
  double soft_cost = 0;          // weighted, violated soft constraints
  double weighted_violation = 0; // hard and soft violations, instance weights
  bool fully_satisfied = false;
};

// Exact discrete scoring via constraint evaluation; independent of any
// probability machinery.
VerifyResult verify(const Instance& inst, std::span<const int> assignment);

}  // namespace fcsp

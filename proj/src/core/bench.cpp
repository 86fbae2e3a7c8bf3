#include "bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fcsp {

Instance gen_scheduling(const SchedulingSpec& spec) {
  if (spec.cycles < 2 || spec.workers < 2 || (spec.cycles * spec.workers) % 2 != 0)
    throw std::runtime_error("scheduling spec: cycles and workers must be >= 2 with an even product");
  const int jobs = spec.jobs();
  Instance inst;
  inst.mode = ObjectiveMode::Satisfy;
  std::vector<int> t_id(static_cast<size_t>(jobs) + 1), s_id(static_cast<size_t>(jobs) + 1);
  for (int v = 1; v <= jobs; ++v) t_id[static_cast<size_t>(v)] = inst.add_var("t" + std::to_string(v), spec.cycles);
  for (int v = 1; v <= jobs; ++v) s_id[static_cast<size_t>(v)] = inst.add_var("s" + std::to_string(v), spec.workers);

  Rng rng(spec.seed);
  for (int u = 1; u <= jobs; ++u) {
    for (int v = u + 1; v <= jobs; ++v) {
      const double p_edge = std::pow(5.0, static_cast<double>(u - v));
      Constraint c;
      if (rng.next_bernoulli(p_edge)) {
        c.body = Structured{StructuredKind::LessThan, {t_id[static_cast<size_t>(u)], t_id[static_cast<size_t>(v)]}};
      } else {
        c.body = Structured{StructuredKind::NeqPair,
                            {t_id[static_cast<size_t>(u)], t_id[static_cast<size_t>(v)],
                             s_id[static_cast<size_t>(u)], s_id[static_cast<size_t>(v)]}};
      }
      inst.constraints.push_back(std::move(c));
    }
  }
  return inst;
}

std::vector<std::pair<int, int>> random_regular_graph(int nodes, int degree, Rng& rng) {
  if (nodes <= degree) throw std::runtime_error("regular graph needs nodes > degree");
  if ((static_cast<long long>(nodes) * degree) % 2 != 0)
    throw std::runtime_error("regular graph needs an even nodes*degree");
  const int edges = nodes * degree / 2;
  auto norm = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };

  for (int retry = 0; retry < 20; ++retry) {
    // Pairing model: shuffle vertex stubs, pair them up, then repair
    // self-loops and duplicate edges with random endpoint swaps (plain
    // whole-graph rejection has vanishing acceptance at these degrees).
    std::vector<int> stubs;
    stubs.reserve(static_cast<size_t>(nodes) * static_cast<size_t>(degree));
    for (int v = 0; v < nodes; ++v)
      for (int d = 0; d < degree; ++d) stubs.push_back(v);
    for (size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.next_below(static_cast<uint32_t>(i))]);

    std::vector<std::pair<int, int>> edge_list(static_cast<size_t>(edges));
    std::map<std::pair<int, int>, int> count;
    for (int e = 0; e < edges; ++e) {
      edge_list[static_cast<size_t>(e)] = {stubs[static_cast<size_t>(2 * e)],
                                           stubs[static_cast<size_t>(2 * e + 1)]};
      const auto [a, b] = edge_list[static_cast<size_t>(e)];
      if (a != b) ++count[norm(a, b)];
    }
    auto multiplicity = [&](int p, int q) {
      auto it = count.find(norm(p, q));
      return it == count.end() ? 0 : it->second;
    };
    auto dec = [&](int p, int q) {
      if (p == q) return;
      auto it = count.find(norm(p, q));
      if (--(it->second) == 0) count.erase(it);
    };
    auto is_bad = [&](int e) {
      const auto [a, b] = edge_list[static_cast<size_t>(e)];
      return a == b || multiplicity(a, b) > 1;
    };

    std::vector<int> queue;
    for (int e = 0; e < edges; ++e)
      if (is_bad(e)) queue.push_back(e);

    bool ok = true;
    for (int qi = 0; qi < static_cast<int>(queue.size()) && ok; ++qi) {
      const int e = queue[static_cast<size_t>(qi)];
      if (!is_bad(e)) continue;  // twin of a duplicate already repaired
      bool fixed = false;
      for (int tries = 0; tries < 2000; ++tries) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint32_t>(edges)));
        if (j == e) continue;
        const auto [a, b] = edge_list[static_cast<size_t>(e)];
        const auto [x, y] = edge_list[static_cast<size_t>(j)];
        const bool flip = rng.next_below(2) == 1;
        const int nx = flip ? y : x;
        const int ny = flip ? x : y;
        // Proposed replacement: (a, nx) and (ny, b).
        if (a == nx || ny == b) continue;
        dec(a, b);
        dec(x, y);
        const bool valid =
            multiplicity(a, nx) == 0 && multiplicity(ny, b) == 0 && norm(a, nx) != norm(ny, b);
        if (!valid) {
          if (a != b) ++count[norm(a, b)];
          if (x != y) ++count[norm(x, y)];
          continue;
        }
        edge_list[static_cast<size_t>(e)] = {a, nx};
        edge_list[static_cast<size_t>(j)] = {ny, b};
        ++count[norm(a, nx)];
        ++count[norm(ny, b)];
        fixed = true;
        break;
      }
      if (!fixed) ok = false;
    }
    if (!ok) continue;

    std::vector<std::pair<int, int>> out;
    out.reserve(edge_list.size());
    for (auto& [a, b] : edge_list) out.push_back(norm(a, b));
    std::sort(out.begin(), out.end());
    return out;
  }
  throw std::runtime_error("regular-graph sampling failed after bounded retries");
}

Instance gen_coloring(const ColoringSpec& spec) {
  if (spec.colors < 2) throw std::runtime_error("coloring spec: need >= 2 colors");
  if (2 * spec.colors >= spec.nodes) throw std::runtime_error("coloring spec: need 2*colors < nodes");
  Instance inst;
  inst.mode = ObjectiveMode::MinViolations;
  for (int v = 1; v <= spec.nodes; ++v) inst.add_var("x" + std::to_string(v), spec.colors);

  Rng rng(spec.seed);
  const auto edges = random_regular_graph(spec.nodes, 2 * spec.colors, rng);
  const double hash_count = spec.nodes;  // |H|, the hard-edge weight
  for (const auto& [a, b] : edges) {
    Constraint c;
    c.weight = hash_count;
    c.body = Structured{StructuredKind::Neq, {a + 1, b + 1}};
    inst.constraints.push_back(std::move(c));
  }
  // |V| parity hashes, each over a distinct random half of the vertices.
  const int scope = spec.nodes / 2;
  std::vector<int> ids(static_cast<size_t>(spec.nodes));
  for (int v = 0; v < spec.nodes; ++v) ids[static_cast<size_t>(v)] = v + 1;
  for (int h = 0; h < spec.nodes; ++h) {
    for (int i = 0; i < scope; ++i) {
      const int j = i + static_cast<int>(rng.next_below(static_cast<uint32_t>(spec.nodes - i)));
      std::swap(ids[static_cast<size_t>(i)], ids[static_cast<size_t>(j)]);
    }
    std::vector<int> scope_ids(ids.begin(), ids.begin() + scope);
    std::sort(scope_ids.begin(), scope_ids.end());
    Constraint c;
    c.soft = true;
    c.body = Structured{StructuredKind::Parity, std::move(scope_ids)};
    inst.constraints.push_back(std::move(c));
  }
  return inst;
}

double par2(const std::vector<double>& time_s, const std::vector<bool>& solved, double time_limit_s) {
  if (time_s.size() != solved.size()) throw std::runtime_error("par2: length mismatch");
  if (time_s.empty()) return 0;
  double total = 0;
  for (size_t i = 0; i < time_s.size(); ++i) {
    if (solved[i] && time_s[i] <= time_limit_s)
      total += time_s[i];
    else
      total += 2.0 * time_limit_s;
  }
  return total / static_cast<double>(time_s.size());
}

double relative_score(double cost, double best_cost) {
  if (cost < 0 || best_cost < 0) throw std::runtime_error("relative_score: costs must be >= 0");
  return (1.0 + cost) / (1.0 + best_cost);
}

VerifyResult verify(const Instance& inst, std::span<const int> assignment) {
  if (assignment.size() != static_cast<size_t>(inst.var_count()))
    throw std::runtime_error("verify: assignment shape mismatch");
  for (int i = 1; i <= inst.var_count(); ++i) {
    const int v = assignment[static_cast<size_t>(i - 1)];
    if (v < 0 || v >= inst.domain(i)) throw std::runtime_error("verify: value out of domain");
  }
  VerifyResult r;
  for (const auto& c : inst.constraints) {
    const bool sat = inst.satisfied(c, assignment);
    if (c.soft) {
      if (!sat) {
        r.soft_cost += c.weight;
        r.weighted_violation += c.weight;
      }
    } else {
      ++r.hard_total;
      if (sat)
        ++r.hard_satisfied;
      else
        r.weighted_violation += c.weight;
    }
  }
  r.fully_satisfied = r.hard_satisfied == r.hard_total && r.soft_cost == 0;
  return r;
}

}  // namespace fcsp

#include <set>

#include "doctest.h"
#include "bench.hpp"
#include "cop.hpp"
#include "oracle.hpp"

using namespace fcsp;

TEST_CASE("scheduling generator: sizes, kinds, and the constraint count") {
  SchedulingSpec spec;
  spec.cycles = 32;
  spec.workers = 4;
  spec.seed = 5;
  CHECK(spec.jobs() == 64);
  Instance inst = gen_scheduling(spec);
  CHECK(inst.var_count() == 128);  // t and s per job
  CHECK(inst.constraints.size() == 64 * 63 / 2);
  CHECK(inst.mode == ObjectiveMode::Satisfy);
  for (int v = 1; v <= 64; ++v) CHECK(inst.domain(v) == 32);
  for (int v = 65; v <= 128; ++v) CHECK(inst.domain(v) == 4);
  int edges = 0;
  for (const auto& c : inst.constraints) {
    REQUIRE(c.is_structured());
    if (c.structured().kind == StructuredKind::LessThan) ++edges;
    else CHECK(c.structured().kind == StructuredKind::NeqPair);
  }
  CHECK(edges > 0);
  CHECK(edges < 64 * 63 / 2);
}

TEST_CASE("scheduling edges point from lower to higher task index") {
  SchedulingSpec spec;
  spec.cycles = 16;
  spec.workers = 4;
  spec.seed = 11;
  Instance inst = gen_scheduling(spec);
  for (const auto& c : inst.constraints) {
    if (c.structured().kind != StructuredKind::LessThan) continue;
    CHECK(c.structured().vars[0] < c.structured().vars[1]);  // a DAG by index order
  }
}

TEST_CASE("adjacent-index pairs are edges roughly a fifth of the time") {
  SchedulingSpec spec;
  spec.cycles = 64;
  spec.workers = 8;
  spec.seed = 303;
  Instance inst = gen_scheduling(spec);
  const int jobs = spec.jobs();
  int adjacent_edges = 0;
  for (const auto& c : inst.constraints) {
    if (c.structured().kind != StructuredKind::LessThan) continue;
    if (c.structured().vars[1] - c.structured().vars[0] == 1) ++adjacent_edges;
  }
  const double rate = static_cast<double>(adjacent_edges) / (jobs - 1);
  CHECK(rate > 0.10);
  CHECK(rate < 0.32);
}

TEST_CASE("generators are reproducible per seed") {
  SchedulingSpec s1;
  s1.cycles = 16;
  s1.workers = 4;
  s1.seed = 99;
  CHECK(write_instance_text(gen_scheduling(s1)) == write_instance_text(gen_scheduling(s1)));
  ColoringSpec c1;
  c1.nodes = 64;
  c1.colors = 4;
  c1.seed = 99;
  CHECK(write_instance_text(gen_coloring(c1)) == write_instance_text(gen_coloring(c1)));
  c1.seed = 100;
  CHECK(write_instance_text(gen_coloring(c1)) != write_instance_text(gen_coloring(ColoringSpec{64, 4, 99})));
}

TEST_CASE("coloring generator: regular graph, hash scopes, weights") {
  ColoringSpec spec;
  spec.nodes = 64;
  spec.colors = 4;
  spec.seed = 2;
  Instance inst = gen_coloring(spec);
  CHECK(inst.var_count() == 64);
  CHECK(inst.mode == ObjectiveMode::MinViolations);
  std::vector<int> degree(65, 0);
  int hard_edges = 0, hashes = 0;
  for (const auto& c : inst.constraints) {
    if (!c.soft) {
      REQUIRE(c.structured().kind == StructuredKind::Neq);
      CHECK(c.weight == 64.0);  // |H| = |V|
      ++degree[static_cast<size_t>(c.structured().vars[0])];
      ++degree[static_cast<size_t>(c.structured().vars[1])];
      ++hard_edges;
    } else {
      REQUIRE(c.structured().kind == StructuredKind::Parity);
      CHECK(c.weight == 1.0);
      CHECK(c.structured().vars.size() == 32);  // floor(|V|/2) distinct vertices
      std::set<int> uniq(c.structured().vars.begin(), c.structured().vars.end());
      CHECK(uniq.size() == 32);
      ++hashes;
    }
  }
  CHECK(hard_edges == 64 * 8 / 2);  // degree 2C = 8
  CHECK(hashes == 64);
  for (int v = 1; v <= 64; ++v) CHECK(degree[static_cast<size_t>(v)] == 8);
}

TEST_CASE("regular graphs are simple, sorted, and correct at the paper scale") {
  Rng rng(7);
  const auto edges = random_regular_graph(512, 16, rng);
  CHECK(edges.size() == 512 * 16 / 2);
  std::set<std::pair<int, int>> uniq(edges.begin(), edges.end());
  CHECK(uniq.size() == edges.size());
  std::vector<int> deg(512, 0);
  for (const auto& [a, b] : edges) {
    CHECK(a < b);  // no self-loops, normalized order
    ++deg[static_cast<size_t>(a)];
    ++deg[static_cast<size_t>(b)];
  }
  for (int v = 0; v < 512; ++v) CHECK(deg[static_cast<size_t>(v)] == 16);
}

TEST_CASE("par2 formula") {
  CHECK(par2({0.0, 0.0}, {true, true}, 1000) == 0.0);
  CHECK(par2({5.0, 5.0}, {false, false}, 1000) == 2000.0);
  CHECK(par2({500.0, 1200.0}, {true, true}, 1000) == doctest::Approx(1250.0));  // over-limit penalized
  CHECK(par2({500.0, 100.0}, {true, false}, 1000) == doctest::Approx(1250.0));
}

TEST_CASE("relative score formula") {
  CHECK(relative_score(3, 3) == 1.0);
  CHECK(relative_score(0, 0) == 1.0);
  CHECK(relative_score(3, 1) == doctest::Approx(2.0));
}

TEST_CASE("verify scores hard and soft exactly") {
  Instance inst = read_instance_text(
      "var a 3\nvar b 3\n"
      "con weight=3 lt a b\ncon soft weight=2 parity 2 a b\n"
      "objective min-violations\n");
  VerifyResult ok = verify(inst, std::vector<int>{0, 1});
  CHECK(ok.hard_satisfied == 1);
  CHECK(ok.soft_cost == 0.0);
  CHECK(ok.fully_satisfied);
  VerifyResult partial = verify(inst, std::vector<int>{0, 2});
  CHECK(partial.hard_satisfied == 1);
  CHECK(partial.soft_cost == 2.0);
  CHECK(partial.weighted_violation == 2.0);
  VerifyResult worst = verify(inst, std::vector<int>{2, 2});
  CHECK(worst.hard_satisfied == 0);
  CHECK(worst.weighted_violation == 5.0);
  CHECK_THROWS_WITH(static_cast<void>(verify(inst, std::vector<int>{0})), doctest::Contains("shape"));
  CHECK_THROWS_WITH(static_cast<void>(verify(inst, std::vector<int>{0, 9})), doctest::Contains("domain"));
}

TEST_CASE("all-equal colorings violate every edge") {
  ColoringSpec spec;
  spec.nodes = 32;
  spec.colors = 3;
  spec.seed = 8;
  Instance inst = gen_coloring(spec);
  const std::vector<int> zeros(32, 0);
  VerifyResult r = verify(inst, zeros);
  CHECK(r.hard_satisfied == 0);
}

TEST_CASE("verify agrees with the continuous objective at one-hot points") {
  Instance inst = read_instance_text(
      "var a 3\nvar b 3\nvar c 4\n"
      "con lt a b\ncon neq a c\ncon expr (a < b) ^ (b > c)\ncon soft parity 2 a b\n"
      "objective min-violations\n");
  Compiled comp = compile(inst);
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> x{static_cast<int>(rng.next_below(3)), static_cast<int>(rng.next_below(3)),
                       static_cast<int>(rng.next_below(4))};
    const VerifyResult vr = verify(inst, x);
    SimplexPoint p = SimplexPoint::one_hot(inst, x);
    double hard_cop = 0;
    for (size_t i = 0; i < comp.items.size(); ++i) {
      if (comp.items[i].soft) continue;
      const auto& cc = comp.items[i];
      hard_cop += cc.closed ? closed_form_cop(*cc.closed, p) : cop_gradient(*cc.mdd, p, {});
    }
    CHECK(hard_cop == doctest::Approx(vr.hard_satisfied).epsilon(1e-9));
  }
}

TEST_CASE("a hand-built schedule witness verifies") {
  SchedulingSpec spec;
  spec.cycles = 16;
  spec.workers = 8;
  spec.seed = 21;
  Instance inst = gen_scheduling(spec);
  const int jobs = spec.jobs();
  // Process jobs in index order (edges point forward): each job takes the
  // first cycle after its predecessors with spare worker capacity.
  std::vector<int> per_level(static_cast<size_t>(spec.cycles), 0);
  std::vector<int> x(static_cast<size_t>(inst.var_count()), 0);
  std::vector<std::vector<int>> preds(static_cast<size_t>(jobs) + 1);
  for (const auto& c : inst.constraints)
    if (c.structured().kind == StructuredKind::LessThan)
      preds[static_cast<size_t>(c.structured().vars[1])].push_back(c.structured().vars[0]);
  bool witness_fits = true;
  for (int v = 1; v <= jobs && witness_fits; ++v) {
    int earliest = 0;
    for (int u : preds[static_cast<size_t>(v)])
      earliest = std::max(earliest, x[static_cast<size_t>(u - 1)] + 1);
    int slot = earliest;
    while (slot < spec.cycles && per_level[static_cast<size_t>(slot)] >= spec.workers) ++slot;
    if (slot >= spec.cycles) {
      witness_fits = false;
      break;
    }
    x[static_cast<size_t>(v - 1)] = slot;
    x[static_cast<size_t>(jobs + v - 1)] = per_level[static_cast<size_t>(slot)]++;
  }
  REQUIRE(witness_fits);  // 128 slots for 64 short-chained jobs
  VerifyResult r = verify(inst, x);
  CHECK(r.hard_satisfied == r.hard_total);
}

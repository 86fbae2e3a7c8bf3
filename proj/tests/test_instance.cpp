#include "doctest.h"
#include "instance.hpp"

using namespace fcsp;

TEST_CASE("instance text round trip") {
  const std::string text =
      "# toy\n"
      "var x1 3\n"
      "var x2 3\n"
      "var t1 4\n"
      "con expr x1 & (x2 < t1)\n"
      "con weight=2.5 soft neq x1 x2\n"
      "con lt x1 t1\n"
      "con neq2 x1 x2 x1 t1\n"
      "con soft parity 2 x1 x2\n"
      "objective min-violations\n";
  Instance inst = read_instance_text(text);
  CHECK(inst.var_count() == 3);
  CHECK(inst.constraints.size() == 5);
  CHECK(inst.mode == ObjectiveMode::MinViolations);
  CHECK(inst.constraints[1].weight == 2.5);
  CHECK(inst.constraints[1].soft);
  CHECK(inst.hard_count() == 3);

  const std::string out = write_instance_text(inst);
  Instance again = read_instance_text(out);
  CHECK(write_instance_text(again) == out);
}

TEST_CASE("format errors carry file and line context") {
  CHECK_THROWS_WITH_AS(read_instance_text("var x1 3\nbadline\n", "f.csp"),
                       doctest::Contains("f.csp:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(read_instance_text("var x1 1\n", "f.csp"), doctest::Contains("f.csp:1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read_instance_text("var x1 2\ncon expr x1 &\n", "g.csp"),
                       doctest::Contains("g.csp:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(read_instance_text("var x1 2\ncon lt x1 zz\n", "g.csp"),
                       doctest::Contains("unknown variable"), std::runtime_error);
}

TEST_CASE("validation rejects broken invariants") {
  CHECK_THROWS(read_instance_text("objective satisfy\n"));            // no vars
  CHECK_THROWS(read_instance_text("var x1 2\nobjective satisfy\n"));  // no constraints
  CHECK_THROWS(read_instance_text("var x1 2\ncon weight=0 expr x1\n"));
  CHECK_THROWS(read_instance_text("var x1 2\nvar x1 2\ncon expr x1\n"));  // duplicate name
}

TEST_CASE("structured discrete semantics") {
  Instance inst = read_instance_text(
      "var a 4\nvar b 4\nvar c 4\nvar d 4\n"
      "con lt a b\ncon neq a b\ncon neq2 a b c d\ncon parity 3 a b c\n");
  const std::vector<int> x{1, 2, 2, 2};
  CHECK(inst.satisfied(inst.constraints[0], x));   // 1 < 2
  CHECK(inst.satisfied(inst.constraints[1], x));   // 1 != 2
  CHECK(inst.satisfied(inst.constraints[2], x));   // t differs
  CHECK(inst.satisfied(inst.constraints[3], x));   // 1+2+2 odd
  const std::vector<int> y{2, 2, 2, 2};
  CHECK(!inst.satisfied(inst.constraints[0], y));
  CHECK(!inst.satisfied(inst.constraints[1], y));
  CHECK(!inst.satisfied(inst.constraints[2], y));
  CHECK(!inst.satisfied(inst.constraints[3], y));
}

TEST_CASE("structured kinds convert to equivalent expressions") {
  Instance inst = read_instance_text(
      "var a 3\nvar b 3\nvar c 3\n"
      "con lt a b\ncon neq a b\ncon neq2 a b b c\ncon parity 3 a b c\n");
  std::vector<int> x(3);
  for (x[0] = 0; x[0] < 3; ++x[0])
    for (x[1] = 0; x[1] < 3; ++x[1])
      for (x[2] = 0; x[2] < 3; ++x[2])
        for (const auto& c : inst.constraints) {
          ExprPtr e = structured_to_expr(c.structured());
          CHECK(inst.satisfied(c, x) == (eval_expr(*e, x) != 0));
        }
}

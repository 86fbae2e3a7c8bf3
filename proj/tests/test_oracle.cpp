#include "doctest.h"
#include "oracle.hpp"

using namespace fcsp;

namespace {

SimplexPoint point_from_rows(const Instance& inst, const std::vector<std::vector<double>>& rows) {
  SimplexPoint p(inst);
  for (int i = 1; i <= inst.var_count(); ++i) {
    auto row = p.row(i);
    for (size_t j = 0; j < row.size(); ++j) row[j] = rows[static_cast<size_t>(i - 1)][j];
  }
  return p;
}

}  // namespace

TEST_CASE("cop of a bare binary variable is P[x=1]") {
  Instance inst = read_instance_text("var x1 2\ncon expr x1\n");
  SimplexPoint p = point_from_rows(inst, {{0.3, 0.7}});
  CHECK(brute_force_cop(inst, inst.constraints[0], p) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("cop of the and-chain at uniform is 1/16") {
  Instance inst = read_instance_text(
      "var x1 2\nvar x2 2\nvar x3 2\nvar x4 2\ncon expr x1 & x2 & x3 & x4\n");
  SimplexPoint p = SimplexPoint::uniform(inst);
  CHECK(brute_force_cop(inst, inst.constraints[0], p) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("cop at one-hot points equals the discrete truth value") {
  Instance inst = read_instance_text(
      "var x1 3\nvar x2 3\nvar x3 3\nvar x4 3\n"
      "con expr x1 & x2 & x3 & x4\n"
      "con expr (x1 < x2) ^ (x3 > x4)\n"
      "con expr x1 & (x2 < x3) & x4\n");
  std::vector<int> x(4);
  for (x[0] = 0; x[0] < 3; ++x[0])
    for (x[1] = 0; x[1] < 3; ++x[1])
      for (x[2] = 0; x[2] < 3; ++x[2])
        for (x[3] = 0; x[3] < 3; ++x[3]) {
          SimplexPoint p = SimplexPoint::one_hot(inst, x);
          for (const auto& c : inst.constraints) {
            const double cop = brute_force_cop(inst, c, p);
            CHECK(cop == (inst.satisfied(c, x) ? 1.0 : 0.0));
          }
        }
}

TEST_CASE("cop is affine in each row (three-point collinearity)") {
  Instance inst = read_instance_text(
      "var x1 3\nvar x2 3\nvar x3 3\n"
      "con expr (x1 < x2) ^ (x2 > x3)\n");
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    SimplexPoint a = SimplexPoint::random(inst, rng);
    SimplexPoint b = a;
    // Replace one row of b with a fresh random row.
    const int var = 1 + static_cast<int>(rng.next_below(3));
    {
      auto row = b.row(var);
      double total = 0;
      for (auto& v : row) {
        v = rng.next_exponential();
        total += v;
      }
      for (auto& v : row) v /= total;
    }
    SimplexPoint mid = a;
    for (size_t k = 0; k < mid.flat().size(); ++k)
      mid.flat()[k] = 0.5 * (a.flat()[k] + b.flat()[k]);
    const double fa = brute_force_cop(inst, inst.constraints[0], a);
    const double fb = brute_force_cop(inst, inst.constraints[0], b);
    const double fm = brute_force_cop(inst, inst.constraints[0], mid);
    CHECK(fm == doctest::Approx(0.5 * (fa + fb)).epsilon(1e-10));
  }
}

TEST_CASE("enumerate_satisfying finds the unique model of the and-chain") {
  Instance inst = read_instance_text(
      "var x1 2\nvar x2 2\nvar x3 2\nvar x4 2\ncon expr x1 & x2 & x3 & x4\n");
  const auto models = enumerate_satisfying(inst);
  REQUIRE(models.size() == 1);
  CHECK(models[0] == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("enumerate_satisfying on a contradiction is empty") {
  Instance inst = read_instance_text("var x1 2\ncon expr x1 = 0\ncon expr x1 = 1\n");
  CHECK(enumerate_satisfying(inst).empty());
}

TEST_CASE("conjunction of the ternary pair keeps its reported corner") {
  Instance inst = read_instance_text(
      "var x1 3\nvar x2 3\nvar x3 3\nvar x4 3\n"
      "con expr (x1 < x2) ^ (x3 > x4)\n"
      "con expr x1 & (x2 < x3) & x4\n");
  const auto models = enumerate_satisfying(inst);
  CHECK(!models.empty());
  const std::vector<int> corner{1, 0, 2, 1};
  bool found = false;
  for (const auto& m : models) found |= m == corner;
  CHECK(found);
}

TEST_CASE("enumeration cap is enforced") {
  Instance inst = read_instance_text(
      "var x1 8\nvar x2 8\nvar x3 8\nvar x4 8\ncon expr x1 < x2\n");
  CHECK_THROWS_WITH(static_cast<void>(enumerate_satisfying(inst, 100)),
                    doctest::Contains("cap exceeded"));
  SimplexPoint p = SimplexPoint::uniform(inst);
  CHECK_THROWS_WITH(static_cast<void>(brute_force_cop(inst, inst.constraints[0], p, 10)),
                    doctest::Contains("cap exceeded"));
}

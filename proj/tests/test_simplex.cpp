#include <cmath>

#include "doctest.h"
#include "simplex.hpp"

using namespace fcsp;

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

TEST_CASE("projection examples") {
  std::vector<double> a{0.5, 0.5};
  project_row(a);
  CHECK(a == std::vector<double>{0.5, 0.5});

  std::vector<double> b{2.0, 0.0};
  project_row(b);
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(0.0));

  std::vector<double> c{0.7, 0.5, -0.2};
  project_row(c);
  CHECK(c[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx(0.0));
}

TEST_CASE("projection output satisfies the KKT form and beats a grid sample") {
  const std::vector<double> input{0.7, 0.5, -0.2};
  std::vector<double> proj = input;
  project_row(proj);
  double sum = 0;
  for (double v : proj) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // theta from the support, output = max(q - theta, 0)
  const double theta = (0.7 + 0.5 - 1.0) / 2.0;
  CHECK(proj[0] == doctest::Approx(input[0] - theta));
  CHECK(proj[1] == doctest::Approx(input[1] - theta));
  // no feasible grid point is closer
  const double best = dist2(proj, input);
  const int steps = 60;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j) {
      const std::vector<double> g{static_cast<double>(i) / steps, static_cast<double>(j) / steps,
                                  1.0 - static_cast<double>(i + j) / steps};
      CHECK(dist2(g, input) >= best - 1e-9);
    }
}

TEST_CASE("projection is idempotent and rowwise") {
  Instance inst = read_instance_text("var a 3\nvar b 4\nvar c 2\ncon expr a\n");
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    SimplexPoint q(inst);
    for (auto& v : q.flat()) v = 4.0 * rng.next_double() - 2.0;
    SimplexPoint p = q;
    project_point(p);
    CHECK(p.feasible(1e-12));
    SimplexPoint again = p;
    project_point(again);
    for (size_t k = 0; k < p.flat().size(); ++k)
      CHECK(again.flat()[k] == doctest::Approx(p.flat()[k]).epsilon(1e-12));
  }
}

TEST_CASE("projection rejects NaN") {
  std::vector<double> row{0.1, std::nan("")};
  CHECK_THROWS_WITH(project_row(row), doctest::Contains("NaN"));
}

TEST_CASE("projection is nonexpansive") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(5), b(5);
    for (auto& v : a) v = 6.0 * rng.next_double() - 3.0;
    for (auto& v : b) v = 6.0 * rng.next_double() - 3.0;
    std::vector<double> pa = a, pb = b;
    project_row(pa);
    project_row(pb);
    CHECK(dist2(pa, pb) <= dist2(a, b) + 1e-12);
  }
}

TEST_CASE("gradient mapping is zero exactly when the step is a fixed point") {
  Instance inst = read_instance_text("var a 3\nvar b 3\ncon expr a\n");
  SimplexPoint p = SimplexPoint::uniform(inst);
  SimplexPoint next(inst);
  std::vector<double> zero(p.flat().size(), 0.0), g(zero);
  CHECK(gradient_mapping(p, zero, 0.5, next, g) == 0.0);

  // vertex with the gradient pointing further into the vertex
  SimplexPoint v = SimplexPoint::one_hot(inst, std::vector<int>{1, 2});
  std::vector<double> grad(v.flat().size(), 0.0);
  grad[static_cast<size_t>(v.offset(1)) + 1] = 1.0;  // increase the already-1 entry
  const double norm2 = gradient_mapping(v, grad, 0.25, next, g);
  CHECK(norm2 == doctest::Approx(0.0));
}

TEST_CASE("interior short steps reduce to row-mean centering") {
  Instance inst = read_instance_text("var a 3\ncon expr a\n");
  SimplexPoint p = SimplexPoint::uniform(inst);
  std::vector<double> grad{0.3, -0.1, 0.2};
  SimplexPoint next(inst);
  std::vector<double> g(3);
  const double eta = 1e-3;  // small enough to stay interior
  gradient_mapping(p, grad, eta, next, g);
  const double mean = (0.3 - 0.1 + 0.2) / 3.0;
  for (size_t k = 0; k < 3; ++k) CHECK(g[k] == doctest::Approx(grad[k] - mean).epsilon(1e-9));
}

#pragma once

#include <cstdint>
#include <vector>

#include "instance.hpp"
#include "point.hpp"

namespace fcsp {

inline constexpr uint64_t kDefaultEnumCap = 10'000'000;

// Exact circuit-output probability by enumerating the constraint's atom
// domains: sum over X of f_c(X) * prod_i p_{i,x_i}. The independent oracle
// every traversal and closed form is tested against.
double brute_force_cop(const Instance& inst, const Constraint& c, const SimplexPoint& point,
                       uint64_t cap = kDefaultEnumCap);

// All assignments satisfying every hard constraint, in lexicographic order.
std::vector<std::vector<int>> enumerate_satisfying(const Instance& inst, uint64_t cap = kDefaultEnumCap);

// Number of discrete assignments satisfying every hard constraint.
uint64_t count_satisfying(const Instance& inst, uint64_t cap = kDefaultEnumCap);

}  // namespace fcsp

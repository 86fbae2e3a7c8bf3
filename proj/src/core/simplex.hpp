#pragma once

#include <span>

#include "point.hpp"

namespace fcsp {

// Euclidean projection of one row onto its probability simplex, in place.
// Sort-and-threshold: with entries sorted descending u_1 >= ... >= u_m,
// rho = max{ k : u_k + (1 - sum_{r<=k} u_r)/k > 0 },
// theta = (sum_{r<=rho} u_r - 1)/rho, output max(u_j - theta, 0).
// Throws on NaN input.
void project_row(std::span<double> row);

// Rowwise projection of a full-shape matrix.
void project_point(SimplexPoint& q);

// g = (proj(p + eta * grad) - p) / eta. Also returns ||g||^2.
// projected (same shape as p) receives proj(p + eta * grad), i.e. the next
// PGA iterate, so one evaluation serves both the convergence test and the step.
double gradient_mapping(const SimplexPoint& p, std::span<const double> grad, double eta,
                        SimplexPoint& projected, std::span<double> g);

}  // namespace fcsp

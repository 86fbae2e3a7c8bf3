#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

namespace fcsp {

// One probability row per variable, stored flat. Row for variable id starts
// at offset(id) and has domain(id) entries. The flat layout is shared with
// gradients and the batched edge-table engine (pointer_id indexing).
class SimplexPoint {
 public:
  SimplexPoint() = default;
  explicit SimplexPoint(const Instance& inst) {
    offsets_.reserve(inst.vars.size());
    doms_.reserve(inst.vars.size());
    int off = 0;
    for (const auto& v : inst.vars) {
      offsets_.push_back(off);
      doms_.push_back(v.domain);
      off += v.domain;
    }
    flat_.assign(static_cast<size_t>(off), 0.0);
  }

  static SimplexPoint uniform(const Instance& inst) {
    SimplexPoint p(inst);
    for (int i = 1; i <= p.var_count(); ++i) {
      auto row = p.row(i);
      const double u = 1.0 / static_cast<double>(row.size());
      for (auto& x : row) x = u;
    }
    return p;
  }

  static SimplexPoint one_hot(const Instance& inst, std::span<const int> assignment) {
    SimplexPoint p(inst);
    for (int i = 1; i <= p.var_count(); ++i)
      p.row(i)[static_cast<size_t>(assignment[static_cast<size_t>(i - 1)])] = 1.0;
    return p;
  }

  // Each row sampled from Dirichlet(1), i.e. uniform on its simplex.
  static SimplexPoint random(const Instance& inst, Rng& rng) {
    SimplexPoint p(inst);
    for (int i = 1; i <= p.var_count(); ++i) {
      auto row = p.row(i);
      double total = 0;
      for (auto& x : row) {
        x = rng.next_exponential();
        total += x;
      }
      for (auto& x : row) x /= total;
    }
    return p;
  }

  int var_count() const { return static_cast<int>(doms_.size()); }
  int offset(int var_id) const { return offsets_[static_cast<size_t>(var_id - 1)]; }
  int domain(int var_id) const { return doms_[static_cast<size_t>(var_id - 1)]; }

  std::span<double> row(int var_id) {
    return {flat_.data() + offset(var_id), static_cast<size_t>(domain(var_id))};
  }
  std::span<const double> row(int var_id) const {
    return {flat_.data() + offset(var_id), static_cast<size_t>(domain(var_id))};
  }

  std::vector<double>& flat() { return flat_; }
  const std::vector<double>& flat() const { return flat_; }
  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<int>& domains() const { return doms_; }

  bool feasible(double tol = 1e-9) const {
    for (int i = 1; i <= var_count(); ++i) {
      double sum = 0;
      for (double x : row(i)) {
        if (x < -tol) return false;
        sum += x;
      }
      if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
  }

 private:
  std::vector<double> flat_;
  std::vector<int> offsets_;
  std::vector<int> doms_;
};

// Gradient of the objective; same flat layout as the point it pairs with.
using GradientVec = std::vector<double>;

}  // namespace fcsp

#include "oracle.hpp"

#include <stdexcept>

namespace fcsp {

namespace {

// Odometer over the domains of the given variables; assignment holds values
// for all instance variables, untouched ones stay 0.
class Odometer {
 public:
  Odometer(const Instance& inst, const std::vector<int>& vars)
      : inst_(inst), vars_(vars), assignment_(static_cast<size_t>(inst.var_count()), 0) {}

  std::span<const int> values() const { return assignment_; }

  bool step() {
    for (size_t k = 0; k < vars_.size(); ++k) {
      int& v = assignment_[static_cast<size_t>(vars_[k] - 1)];
      if (++v < inst_.domain(vars_[k])) return true;
      v = 0;
    }
    return false;
  }

 private:
  const Instance& inst_;
  const std::vector<int>& vars_;
  std::vector<int> assignment_;
};

uint64_t product_over(const Instance& inst, const std::vector<int>& vars, uint64_t cap) {
  uint64_t p = 1;
  for (int id : vars) {
    p *= static_cast<uint64_t>(inst.domain(id));
    if (p > cap) return cap + 1;
  }
  return p;
}

}  // namespace

double brute_force_cop(const Instance& inst, const Constraint& c, const SimplexPoint& point, uint64_t cap) {
  const std::vector<int> vars = inst.atoms(c);
  if (product_over(inst, vars, cap) > cap) throw std::runtime_error("enumeration cap exceeded");
  Odometer odo(inst, vars);
  double total = 0;
  do {
    const auto x = odo.values();
    if (!inst.satisfied(c, x)) continue;
    double prob = 1;
    for (int id : vars) prob *= point.row(id)[static_cast<size_t>(x[static_cast<size_t>(id - 1)])];
    total += prob;
  } while (odo.step());
  return total;
}

std::vector<std::vector<int>> enumerate_satisfying(const Instance& inst, uint64_t cap) {
  if (inst.domain_product(cap) > cap) throw std::runtime_error("enumeration cap exceeded");
  std::vector<int> all_vars;
  for (int i = inst.var_count(); i >= 1; --i) all_vars.push_back(i);  // last var fastest -> lexicographic
  Odometer odo(inst, all_vars);
  std::vector<std::vector<int>> models;
  do {
    const auto x = odo.values();
    bool ok = true;
    for (const auto& c : inst.constraints) {
      if (c.soft) continue;
      if (!inst.satisfied(c, x)) {
        ok = false;
        break;
      }
    }
    if (ok) models.emplace_back(x.begin(), x.end());
  } while (odo.step());
  return models;
}

uint64_t count_satisfying(const Instance& inst, uint64_t cap) {
  if (inst.domain_product(cap) > cap) throw std::runtime_error("enumeration cap exceeded");
  std::vector<int> all_vars;
  for (int i = inst.var_count(); i >= 1; --i) all_vars.push_back(i);
  Odometer odo(inst, all_vars);
  uint64_t n = 0;
  do {
    const auto x = odo.values();
    bool ok = true;
    for (const auto& c : inst.constraints) {
      if (c.soft) continue;
      if (!inst.satisfied(c, x)) {
        ok = false;
        break;
      }
    }
    n += ok ? 1 : 0;
  } while (odo.step());
  return n;
}

}  // namespace fcsp

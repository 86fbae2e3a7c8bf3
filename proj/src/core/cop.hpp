#pragma once

#include <optional>
#include <span>

#include "edge_table.hpp"
#include "mdd.hpp"
#include "point.hpp"
#include "threads.hpp"

namespace fcsp {

// Node messages from a traversal; indexed by NodeRef (terminals at 0 and 1).
struct MessageState {
  std::vector<double> msg;
  double at_true() const { return msg[kTrueRef]; }
  double at_false() const { return msg[kFalseRef]; }
};

// Circuit-output probability by forward message passing: the root starts at
// 1, every edge (v, j, u) adds p[var(v)][j] * m[v] into m[u], and the TRUE
// terminal accumulates the answer. O(edges).
double top_down(const Mdd& m, const SimplexPoint& p, MessageState* state = nullptr);

// Same value computed in reverse: terminals start at 1/0 and every node
// takes the p-weighted sum of its children. m[v] is the COP of the
// subdiagram rooted at v. O(edges).
double bottom_up(const Mdd& m, const SimplexPoint& p, MessageState* state = nullptr);

// Both sweeps at once; dCOP/dp[i][j] = sum over var-i nodes of
// m_td[v] * m_bu[v.j], scaled by weight and added into grad. Returns the COP.
double cop_gradient(const Mdd& m, const SimplexPoint& p, std::span<double> grad, double weight = 1.0);

// Closed-form COP and gradient for the structured families; never touches a
// decision diagram. grad may be empty to skip gradient work.
double closed_form_cop(const Structured& s, const SimplexPoint& p, std::span<double> grad = {},
                       double weight = 1.0);

// One constraint compiled for evaluation: structured kinds keep their closed
// form, everything else becomes an MDD.
struct CompiledConstraint {
  double weight = 1.0;
  bool soft = false;
  std::optional<Structured> closed;
  std::optional<Mdd> mdd;
};

struct CompileOptions {
  bool closed_forms = true;  // set false to force MDDs for everything
  BuildOptions build;
};

struct Compiled {
  std::vector<CompiledConstraint> items;
  double weight_sum = 0;
};

Compiled compile(const Instance& inst, const CompileOptions& opts = {});

// Weighted objective sum_c w_c * COP_c and its gradient. The reduction is
// chunked in fixed constraint order, so results do not depend on the thread
// count. grad may be empty.
double objective(const Compiled& comp, const SimplexPoint& p, std::span<double> grad,
                 ThreadPool* pool = nullptr);

}  // namespace fcsp

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "instance.hpp"

namespace fcsp {

// Node references: 0 and 1 are the FALSE/TRUE terminals, refs >= 2 index
// decision nodes as nodes[ref - 2]. Decision nodes are stored with children
// strictly before parents, so ascending index order is bottom-up and
// descending is top-down.
using NodeRef = int32_t;
inline constexpr NodeRef kFalseRef = 0;
inline constexpr NodeRef kTrueRef = 1;
inline bool is_terminal(NodeRef r) { return r < 2; }

struct MddNode {
  int var = 0;                // 1-based variable id
  std::vector<NodeRef> kids;  // one child per domain value
};

// Ordered, deterministic, reduced multi-valued decision diagram in the
// canonical form used throughout: duplicate (var, children) nodes are merged,
// constant residuals collapse straight to a terminal, and redundant nodes
// with identical non-terminal children are kept so non-terminal edges always
// descend exactly one level of the diagram's variable order.
struct Mdd {
  std::vector<MddNode> nodes;
  NodeRef root = kFalseRef;
  std::vector<int> order;  // the constraint's atoms, in test order

  const MddNode& node(NodeRef r) const { return nodes[static_cast<size_t>(r - 2)]; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  bool constant() const { return is_terminal(root); }
  int edge_count() const;

  bool evaluate(std::span<const int> assignment) const;
};

struct BuildOptions {
  // Order atoms by first occurrence in the expression instead of instance order.
  bool first_use_order = false;
  // Practical cap on the number of distinct variables per constraint.
  int max_atoms = 64;
};

Mdd build_atomic(const Instance& inst, const Constraint& c, const BuildOptions& opts = {});
Mdd build_from_expr(const Instance& inst, const ExprPtr& expr, std::vector<int> order);

// op(left(X), right(X)) for op in {And, Or, Xor}; orders must be interleavable.
Mdd apply(const Instance& inst, const Mdd& left, const Mdd& right, ExprOp op);

// Canonical form of an arbitrary well-formed MDD. Idempotent.
Mdd reduce(const Mdd& m);

// Structural equality of canonical forms (orders must match).
bool mdd_equal(const Mdd& a, const Mdd& b);

}  // namespace fcsp

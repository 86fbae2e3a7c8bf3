#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcsp {

// Constraint expression tree. Connectives AND/OR/XOR/NOT act on truth values,
// where a value is "true" iff it equals 1 exactly (tv below); comparisons
// compare raw integers and yield {0,1}; SUM/MOD are plain integer arithmetic.
// A constraint asserts that its root value is nonzero.
enum class ExprOp { Var, Lit, And, Or, Xor, Not, Lt, Gt, Eq, Neq, Sum, Mod };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op;
  int var = 0;          // Var: 1-based variable id
  int64_t value = 0;    // Lit
  ExprPtr lhs, rhs;     // Not uses lhs only
};

ExprPtr make_var(int id);
ExprPtr make_lit(int64_t v);
ExprPtr make_unary(ExprOp op, ExprPtr operand);
ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs);

inline int64_t tv(int64_t v) { return v == 1 ? 1 : 0; }

// Value always lands in {0,1}.
bool bool_valued(const Expr& e);

// assignment[id-1] holds the value of variable id. Total and deterministic.
int64_t eval_expr(const Expr& e, std::span<const int> assignment);

// Reparseable text; parentheses inserted only where precedence requires.
// Variables print as x<id> unless a name table (index id-1) is given.
std::string print_expr(const Expr& e, const std::vector<std::string>* names = nullptr);

// Constant folding plus truth-value normalization of connective operands.
// Used as the canonical form for cofactor memoization: semantically equal
// residuals fold to structurally equal trees in all the cases that matter
// (literal collapse, absorption, SUM literal accumulation reduced mod the
// enclosing divisor).
ExprPtr fold_expr(const ExprPtr& e);

// Substitute variable id := value, then fold. Shares untouched subtrees.
ExprPtr substitute(const ExprPtr& e, int var_id, int value);

// Sorted, de-duplicated variable ids appearing in e.
std::vector<int> expr_vars(const Expr& e);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
  size_t offset;
};

}  // namespace fcsp

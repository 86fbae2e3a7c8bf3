#include "expr.hpp"

#include <algorithm>
#include <set>

namespace fcsp {

ExprPtr make_var(int id) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Var;
  e->var = id;
  return e;
}

ExprPtr make_lit(int64_t v) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Lit;
  e->value = v;
  return e;
}

ExprPtr make_unary(ExprOp op, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool bool_valued(const Expr& e) {
  switch (e.op) {
    case ExprOp::And:
    case ExprOp::Or:
    case ExprOp::Xor:
    case ExprOp::Not:
    case ExprOp::Lt:
    case ExprOp::Gt:
    case ExprOp::Eq:
    case ExprOp::Neq:
      return true;
    case ExprOp::Lit:
      return e.value == 0 || e.value == 1;
    default:
      return false;
  }
}

int64_t eval_expr(const Expr& e, std::span<const int> assignment) {
  switch (e.op) {
    case ExprOp::Var:
      return assignment[static_cast<size_t>(e.var - 1)];
    case ExprOp::Lit:
      return e.value;
    case ExprOp::And:
      return tv(eval_expr(*e.lhs, assignment)) & tv(eval_expr(*e.rhs, assignment));
    case ExprOp::Or:
      return tv(eval_expr(*e.lhs, assignment)) | tv(eval_expr(*e.rhs, assignment));
    case ExprOp::Xor:
      return tv(eval_expr(*e.lhs, assignment)) ^ tv(eval_expr(*e.rhs, assignment));
    case ExprOp::Not:
      return 1 - tv(eval_expr(*e.lhs, assignment));
    case ExprOp::Lt:
      return eval_expr(*e.lhs, assignment) < eval_expr(*e.rhs, assignment) ? 1 : 0;
    case ExprOp::Gt:
      return eval_expr(*e.lhs, assignment) > eval_expr(*e.rhs, assignment) ? 1 : 0;
    case ExprOp::Eq:
      return eval_expr(*e.lhs, assignment) == eval_expr(*e.rhs, assignment) ? 1 : 0;
    case ExprOp::Neq:
      return eval_expr(*e.lhs, assignment) != eval_expr(*e.rhs, assignment) ? 1 : 0;
    case ExprOp::Sum:
      return eval_expr(*e.lhs, assignment) + eval_expr(*e.rhs, assignment);
    case ExprOp::Mod: {
      const int64_t d = eval_expr(*e.rhs, assignment);
      return d == 0 ? 0 : eval_expr(*e.lhs, assignment) % d;
    }
  }
  return 0;
}

namespace {

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Or:
      return 1;
    case ExprOp::Xor:
      return 2;
    case ExprOp::And:
      return 3;
    case ExprOp::Lt:
    case ExprOp::Gt:
    case ExprOp::Eq:
    case ExprOp::Neq:
      return 4;
    case ExprOp::Sum:
      return 5;
    case ExprOp::Mod:
      return 6;
    default:
      return 7;
  }
}

const char* op_text(ExprOp op) {
  switch (op) {
    case ExprOp::And:
      return " & ";
    case ExprOp::Or:
      return " | ";
    case ExprOp::Xor:
      return " ^ ";
    case ExprOp::Lt:
      return " < ";
    case ExprOp::Gt:
      return " > ";
    case ExprOp::Eq:
      return " = ";
    case ExprOp::Neq:
      return " != ";
    case ExprOp::Sum:
      return " + ";
    case ExprOp::Mod:
      return " % ";
    default:
      return "?";
  }
}

void print_rec(const Expr& e, int parent_prec, bool right_operand, const std::vector<std::string>* names,
               std::string& out) {
  const int prec = precedence(e.op);
  switch (e.op) {
    case ExprOp::Var:
      if (names) {
        out += (*names)[static_cast<size_t>(e.var - 1)];
      } else {
        out += 'x';
        out += std::to_string(e.var);
      }
      return;
    case ExprOp::Lit:
      out += std::to_string(e.value);
      return;
    case ExprOp::Not: {
      out += '!';
      print_rec(*e.lhs, prec, false, names, out);
      return;
    }
    default:
      break;
  }
  const bool need_parens = prec < parent_prec || (prec == parent_prec && right_operand);
  if (need_parens) out += '(';
  print_rec(*e.lhs, prec, false, names, out);
  out += op_text(e.op);
  print_rec(*e.rhs, prec, true, names, out);
  if (need_parens) out += ')';
}

// Flatten a SUM chain into (literal total, non-literal terms left to right).
void flatten_sum(const ExprPtr& e, int64_t& lit_total, std::vector<ExprPtr>& terms) {
  if (e->op == ExprOp::Sum) {
    flatten_sum(e->lhs, lit_total, terms);
    flatten_sum(e->rhs, lit_total, terms);
  } else if (e->op == ExprOp::Lit) {
    lit_total += e->value;
  } else {
    terms.push_back(e);
  }
}

ExprPtr rebuild_sum(int64_t lit_total, const std::vector<ExprPtr>& terms) {
  if (terms.empty()) return make_lit(lit_total);
  ExprPtr acc = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) acc = make_binary(ExprOp::Sum, acc, terms[i]);
  if (lit_total != 0) acc = make_binary(ExprOp::Sum, acc, make_lit(lit_total));
  return acc;
}

// Coerce a folded operand of a connective into {0,1} form.
ExprPtr truth_of(const ExprPtr& e) {
  if (e->op == ExprOp::Lit) return make_lit(tv(e->value));
  if (bool_valued(*e)) return e;
  return make_binary(ExprOp::Eq, e, make_lit(1));
}

bool is_lit(const ExprPtr& e, int64_t v) { return e->op == ExprOp::Lit && e->value == v; }

ExprPtr fold_not(const ExprPtr& operand) {
  ExprPtr a = truth_of(operand);
  if (a->op == ExprOp::Lit) return make_lit(1 - a->value);
  if (a->op == ExprOp::Not) return a->lhs;
  return make_unary(ExprOp::Not, a);
}

}  // namespace

std::string print_expr(const Expr& e, const std::vector<std::string>* names) {
  std::string out;
  print_rec(e, 0, false, names, out);
  return out;
}

ExprPtr fold_expr(const ExprPtr& e) {
  switch (e->op) {
    case ExprOp::Var:
    case ExprOp::Lit:
      return e;
    case ExprOp::Not:
      return fold_not(fold_expr(e->lhs));
    case ExprOp::And: {
      ExprPtr a = truth_of(fold_expr(e->lhs));
      ExprPtr b = truth_of(fold_expr(e->rhs));
      if (is_lit(a, 0) || is_lit(b, 0)) return make_lit(0);
      if (is_lit(a, 1)) return b;
      if (is_lit(b, 1)) return a;
      return make_binary(ExprOp::And, a, b);
    }
    case ExprOp::Or: {
      ExprPtr a = truth_of(fold_expr(e->lhs));
      ExprPtr b = truth_of(fold_expr(e->rhs));
      if (is_lit(a, 1) || is_lit(b, 1)) return make_lit(1);
      if (is_lit(a, 0)) return b;
      if (is_lit(b, 0)) return a;
      return make_binary(ExprOp::Or, a, b);
    }
    case ExprOp::Xor: {
      ExprPtr a = truth_of(fold_expr(e->lhs));
      ExprPtr b = truth_of(fold_expr(e->rhs));
      if (is_lit(a, 0)) return b;
      if (is_lit(b, 0)) return a;
      if (is_lit(a, 1)) return fold_not(b);
      if (is_lit(b, 1)) return fold_not(a);
      return make_binary(ExprOp::Xor, a, b);
    }
    case ExprOp::Lt:
    case ExprOp::Gt:
    case ExprOp::Eq:
    case ExprOp::Neq: {
      ExprPtr a = fold_expr(e->lhs);
      ExprPtr b = fold_expr(e->rhs);
      if (a->op == ExprOp::Lit && b->op == ExprOp::Lit) {
        const int64_t l = a->value, r = b->value;
        switch (e->op) {
          case ExprOp::Lt:
            return make_lit(l < r);
          case ExprOp::Gt:
            return make_lit(l > r);
          case ExprOp::Eq:
            return make_lit(l == r);
          default:
            return make_lit(l != r);
        }
      }
      return make_binary(e->op, a, b);
    }
    case ExprOp::Sum: {
      ExprPtr a = fold_expr(e->lhs);
      ExprPtr b = fold_expr(e->rhs);
      int64_t lit_total = 0;
      std::vector<ExprPtr> terms;
      flatten_sum(a, lit_total, terms);
      flatten_sum(b, lit_total, terms);
      return rebuild_sum(lit_total, terms);
    }
    case ExprOp::Mod: {
      ExprPtr a = fold_expr(e->lhs);
      ExprPtr b = fold_expr(e->rhs);
      if (b->op == ExprOp::Lit && b->value != 0) {
        if (a->op == ExprOp::Lit) return make_lit(a->value % b->value);
        // Reduce the accumulated literal part of a sum modulo the divisor so
        // residuals like (2 + x) % 2 and (4 + x) % 2 share one canonical key.
        int64_t lit_total = 0;
        std::vector<ExprPtr> terms;
        flatten_sum(a, lit_total, terms);
        if (lit_total >= 0) {
          a = rebuild_sum(lit_total % b->value, terms);
          if (a->op == ExprOp::Lit) return make_lit(a->value % b->value);
        }
      }
      return make_binary(ExprOp::Mod, a, b);
    }
  }
  return e;
}

namespace {

ExprPtr subst_rec(const ExprPtr& e, int var_id, int value, bool& changed) {
  switch (e->op) {
    case ExprOp::Var:
      if (e->var == var_id) {
        changed = true;
        return make_lit(value);
      }
      return e;
    case ExprOp::Lit:
      return e;
    case ExprOp::Not: {
      bool c = false;
      ExprPtr a = subst_rec(e->lhs, var_id, value, c);
      changed |= c;
      return c ? make_unary(ExprOp::Not, a) : e;
    }
    default: {
      bool cl = false, cr = false;
      ExprPtr a = subst_rec(e->lhs, var_id, value, cl);
      ExprPtr b = subst_rec(e->rhs, var_id, value, cr);
      changed |= cl | cr;
      return (cl || cr) ? make_binary(e->op, a, b) : e;
    }
  }
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, int var_id, int value) {
  bool changed = false;
  ExprPtr s = subst_rec(e, var_id, value, changed);
  return changed ? fold_expr(s) : s;
}

namespace {
void collect_vars(const Expr& e, std::set<int>& out) {
  if (e.op == ExprOp::Var) {
    out.insert(e.var);
    return;
  }
  if (e.lhs) collect_vars(*e.lhs, out);
  if (e.rhs) collect_vars(*e.rhs, out);
}
}  // namespace

std::vector<int> expr_vars(const Expr& e) {
  std::set<int> s;
  collect_vars(e, s);
  return {s.begin(), s.end()};
}

}  // namespace fcsp

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "expr.hpp"

namespace fcsp {

// Structured constraint kinds with closed-form circuit-output probabilities.
//   LessThan(u, v)            : u < v
//   NeqPair(tu, tv, su, sv)   : (tu != tv) | (su != sv)
//   Neq(u, v)                 : u != v
//   Parity(a, b, ...)         : (a + b + ...) % 2 = 1
enum class StructuredKind { LessThan, NeqPair, Neq, Parity };

struct Structured {
  StructuredKind kind;
  std::vector<int> vars;  // 1-based variable ids, arity checked on construction
};

struct Constraint {
  std::variant<ExprPtr, Structured> body;
  double weight = 1.0;
  bool soft = false;

  bool is_structured() const { return std::holds_alternative<Structured>(body); }
  const Structured& structured() const { return std::get<Structured>(body); }
  const ExprPtr& expr() const { return std::get<ExprPtr>(body); }
};

enum class ObjectiveMode { Satisfy, MinViolations };

struct Variable {
  std::string name;
  int domain = 2;  // values are 0..domain-1
};

class Instance {
 public:
  std::vector<Variable> vars;  // vars[i] has id i+1
  std::vector<Constraint> constraints;
  ObjectiveMode mode = ObjectiveMode::Satisfy;

  int var_count() const { return static_cast<int>(vars.size()); }
  int domain(int var_id) const { return vars[static_cast<size_t>(var_id - 1)].domain; }
  // N = sum of domain sizes.
  int total_domain() const;
  // Product of domain sizes, saturating at cap+1.
  uint64_t domain_product(uint64_t cap) const;
  double weight_sum() const;
  int hard_count() const;

  int find_var(const std::string& name) const;  // 0 if unknown
  int add_var(const std::string& name, int domain);

  // Sorted variable ids the constraint mentions.
  std::vector<int> atoms(const Constraint& c) const;

  // Exact discrete truth of one constraint under a full assignment.
  bool satisfied(const Constraint& c, std::span<const int> assignment) const;

  void validate() const;  // throws std::runtime_error on broken invariants
};

// Structured kinds expressed as equivalent expression trees (used when an MDD
// form is needed, e.g. for file export or oracle cross-checks).
ExprPtr structured_to_expr(const Structured& s);

// Expression text over declared variables; throws ParseError.
ExprPtr parse_expression(const std::string& text, const Instance& instance);

// Line-oriented instance format:
//   # comment
//   var <name> <domain_size>
//   con [weight=<w>] [soft] expr <expression>
//   con [weight=<w>] [soft] lt <u> <v>
//   con [weight=<w>] [soft] neq2 <tu> <tv> <su> <sv>
//   con [weight=<w>] [soft] neq <u> <v>
//   con [weight=<w>] [soft] parity <k> <v1> ... <vk>
//   objective satisfy|min-violations
Instance read_instance_text(const std::string& text, const std::string& origin = "<string>");
Instance read_instance_file(const std::string& path);
std::string write_instance_text(const Instance& inst);
void write_instance_file(const Instance& inst, const std::string& path);

}  // namespace fcsp

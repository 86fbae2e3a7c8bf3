#include "instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fcsp {

int Instance::total_domain() const {
  int n = 0;
  for (const auto& v : vars) n += v.domain;
  return n;
}

uint64_t Instance::domain_product(uint64_t cap) const {
  uint64_t p = 1;
  for (const auto& v : vars) {
    p *= static_cast<uint64_t>(v.domain);
    if (p > cap) return cap + 1;
  }
  return p;
}

double Instance::weight_sum() const {
  double w = 0;
  for (const auto& c : constraints) w += c.weight;
  return w;
}

int Instance::hard_count() const {
  int n = 0;
  for (const auto& c : constraints) n += c.soft ? 0 : 1;
  return n;
}

int Instance::find_var(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i + 1);
  return 0;
}

int Instance::add_var(const std::string& name, int domain) {
  if (domain < 2) throw std::runtime_error("variable '" + name + "': domain size must be >= 2");
  if (find_var(name) != 0) throw std::runtime_error("duplicate variable '" + name + "'");
  vars.push_back({name, domain});
  return static_cast<int>(vars.size());
}

std::vector<int> Instance::atoms(const Constraint& c) const {
  if (c.is_structured()) {
    std::set<int> s(c.structured().vars.begin(), c.structured().vars.end());
    return {s.begin(), s.end()};
  }
  return expr_vars(*c.expr());
}

bool Instance::satisfied(const Constraint& c, std::span<const int> assignment) const {
  if (!c.is_structured()) return eval_expr(*c.expr(), assignment) != 0;
  const auto& s = c.structured();
  auto val = [&](int id) { return assignment[static_cast<size_t>(id - 1)]; };
  switch (s.kind) {
    case StructuredKind::LessThan:
      return val(s.vars[0]) < val(s.vars[1]);
    case StructuredKind::NeqPair:
      return val(s.vars[0]) != val(s.vars[1]) || val(s.vars[2]) != val(s.vars[3]);
    case StructuredKind::Neq:
      return val(s.vars[0]) != val(s.vars[1]);
    case StructuredKind::Parity: {
      int64_t sum = 0;
      for (int id : s.vars) sum += val(id);
      return sum % 2 == 1;
    }
  }
  return false;
}

void Instance::validate() const {
  if (vars.empty()) throw std::runtime_error("instance has no variables");
  if (constraints.empty()) throw std::runtime_error("instance has no constraints");
  for (const auto& v : vars)
    if (v.domain < 2) throw std::runtime_error("variable '" + v.name + "': domain size must be >= 2");
  for (const auto& c : constraints) {
    if (c.weight <= 0) throw std::runtime_error("constraint weight must be > 0");
    for (int id : atoms(c))
      if (id < 1 || id > var_count()) throw std::runtime_error("constraint references unknown variable id");
    if (c.is_structured()) {
      const auto& s = c.structured();
      const size_t arity = s.kind == StructuredKind::NeqPair ? 4 : (s.kind == StructuredKind::Parity ? 1 : 2);
      if (s.kind == StructuredKind::Parity ? s.vars.size() < arity : s.vars.size() != arity)
        throw std::runtime_error("structured constraint has wrong arity");
    }
  }
}

ExprPtr structured_to_expr(const Structured& s) {
  switch (s.kind) {
    case StructuredKind::LessThan:
      return make_binary(ExprOp::Lt, make_var(s.vars[0]), make_var(s.vars[1]));
    case StructuredKind::NeqPair:
      return make_binary(ExprOp::Or,
                         make_binary(ExprOp::Neq, make_var(s.vars[0]), make_var(s.vars[1])),
                         make_binary(ExprOp::Neq, make_var(s.vars[2]), make_var(s.vars[3])));
    case StructuredKind::Neq:
      return make_binary(ExprOp::Neq, make_var(s.vars[0]), make_var(s.vars[1]));
    case StructuredKind::Parity: {
      ExprPtr sum = make_var(s.vars[0]);
      for (size_t i = 1; i < s.vars.size(); ++i) sum = make_binary(ExprOp::Sum, sum, make_var(s.vars[i]));
      return make_binary(ExprOp::Eq, make_binary(ExprOp::Mod, sum, make_lit(2)), make_lit(1));
    }
  }
  throw std::runtime_error("unknown structured kind");
}

// ---------------------------------------------------------------------------
// Expression parser. Precedence, loosest to tightest: | ^ & cmp + % !
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, Int, And, Or, Xor, Not, Lt, Gt, Eq, Neq, Plus, Mod, LParen, RParen, End } kind;
  size_t pos = 0;
  std::string text;
  int64_t value = 0;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (out.size() > 16384) throw ParseError("expression too long", i);
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Int;
      t.text = text.substr(i, j - i);
      t.value = std::stoll(t.text);
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = Token::Ident;
      t.text = text.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '&':
          t.kind = Token::And;
          break;
        case '|':
          t.kind = Token::Or;
          break;
        case '^':
          t.kind = Token::Xor;
          break;
        case '<':
          t.kind = Token::Lt;
          break;
        case '>':
          t.kind = Token::Gt;
          break;
        case '=':
          t.kind = Token::Eq;
          break;
        case '+':
          t.kind = Token::Plus;
          break;
        case '%':
          t.kind = Token::Mod;
          break;
        case '(':
          t.kind = Token::LParen;
          break;
        case ')':
          t.kind = Token::RParen;
          break;
        case '!':
          if (i + 1 < n && text[i + 1] == '=') {
            t.kind = Token::Neq;
            ++i;
          } else {
            t.kind = Token::Not;
          }
          break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      ++i;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.pos = n;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const Instance& inst) : tokens_(lex(text)), inst_(inst) {}

  ExprPtr parse() {
    ExprPtr e = parse_or();
    if (peek().kind != Token::End) throw ParseError("unexpected token", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_xor();
    while (accept(Token::Or)) e = make_binary(ExprOp::Or, e, parse_xor());
    return e;
  }
  ExprPtr parse_xor() {
    ExprPtr e = parse_and();
    while (accept(Token::Xor)) e = make_binary(ExprOp::Xor, e, parse_and());
    return e;
  }
  ExprPtr parse_and() {
    ExprPtr e = parse_cmp();
    while (accept(Token::And)) e = make_binary(ExprOp::And, e, parse_cmp());
    return e;
  }
  ExprPtr parse_cmp() {
    ExprPtr e = parse_sum();
    while (true) {
      const Token& t = peek();
      ExprOp op;
      if (t.kind == Token::Lt)
        op = ExprOp::Lt;
      else if (t.kind == Token::Gt)
        op = ExprOp::Gt;
      else if (t.kind == Token::Eq)
        op = ExprOp::Eq;
      else if (t.kind == Token::Neq)
        op = ExprOp::Neq;
      else
        break;
      advance();
      ExprPtr rhs = parse_sum();
      check_comparison(op, e, rhs, t.pos);
      e = make_binary(op, e, rhs);
    }
    return e;
  }
  ExprPtr parse_sum() {
    ExprPtr e = parse_mod();
    while (accept(Token::Plus)) e = make_binary(ExprOp::Sum, e, parse_mod());
    return e;
  }
  ExprPtr parse_mod() {
    ExprPtr e = parse_unary();
    while (peek().kind == Token::Mod) {
      const size_t at = peek().pos;
      advance();
      ExprPtr rhs = parse_unary();
      if (rhs->op != ExprOp::Lit || rhs->value < 2)
        throw ParseError("modulus must be an integer literal >= 2", at);
      e = make_binary(ExprOp::Mod, e, rhs);
    }
    return e;
  }
  ExprPtr parse_unary() {
    if (accept(Token::Not)) {
      DepthGuard guard(*this);
      return make_unary(ExprOp::Not, parse_unary());
    }
    return parse_primary();
  }
  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Int:
        advance();
        return make_lit(t.value);
      case Token::Ident: {
        advance();
        const int id = inst_.find_var(t.text);
        if (id == 0) throw ParseError("unknown variable '" + t.text + "'", t.pos);
        return make_var(id);
      }
      case Token::LParen: {
        advance();
        DepthGuard guard(*this);
        ExprPtr e = parse_or();
        if (!accept(Token::RParen)) throw ParseError("expected ')'", peek().pos);
        return e;
      }
      default:
        throw ParseError("syntax error", t.pos);
    }
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > 512) throw ParseError("expression nested too deeply", parser.peek().pos);
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  // A literal compared against a variable must fit the variable's domain.
  void check_comparison(ExprOp, const ExprPtr& lhs, const ExprPtr& rhs, size_t at) const {
    const ExprPtr* var_side = nullptr;
    const ExprPtr* lit_side = nullptr;
    if (lhs->op == ExprOp::Var && rhs->op == ExprOp::Lit) {
      var_side = &lhs;
      lit_side = &rhs;
    } else if (lhs->op == ExprOp::Lit && rhs->op == ExprOp::Var) {
      var_side = &rhs;
      lit_side = &lhs;
    }
    if (!var_side) return;
    const int dom = inst_.domain((*var_side)->var);
    const int64_t v = (*lit_side)->value;
    if (v < 0 || v >= dom)
      throw ParseError("literal " + std::to_string(v) + " out of domain range [0, " + std::to_string(dom) + ")", at);
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int depth_ = 0;
  const Instance& inst_;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, const Instance& instance) {
  return Parser(text, instance).parse();
}

// ---------------------------------------------------------------------------
// Instance text format
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line_no, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + msg);
}

const char* kind_name(StructuredKind k) {
  switch (k) {
    case StructuredKind::LessThan:
      return "lt";
    case StructuredKind::NeqPair:
      return "neq2";
    case StructuredKind::Neq:
      return "neq";
    case StructuredKind::Parity:
      return "parity";
  }
  return "?";
}

std::string format_weight(double w) {
  std::ostringstream out;
  out.precision(17);
  out << w;
  return out.str();
}

}  // namespace

Instance read_instance_text(const std::string& text, const std::string& origin) {
  Instance inst;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "var") {
      if (toks.size() != 3) fail(origin, line_no, "expected: var <name> <domain_size>");
      int dom = 0;
      try {
        dom = std::stoi(toks[2]);
      } catch (...) {
        fail(origin, line_no, "bad domain size '" + toks[2] + "'");
      }
      try {
        inst.add_var(toks[1], dom);
      } catch (const std::exception& e) {
        fail(origin, line_no, e.what());
      }
    } else if (head == "con") {
      Constraint c;
      size_t i = 1;
      while (i < toks.size()) {
        if (toks[i].rfind("weight=", 0) == 0) {
          try {
            c.weight = std::stod(toks[i].substr(7));
          } catch (...) {
            fail(origin, line_no, "bad weight '" + toks[i] + "'");
          }
          if (!(c.weight > 0)) fail(origin, line_no, "weight must be > 0");
          ++i;
        } else if (toks[i] == "soft") {
          c.soft = true;
          ++i;
        } else {
          break;
        }
      }
      if (i >= toks.size()) fail(origin, line_no, "missing constraint body");
      const std::string& kind = toks[i];
      auto lookup = [&](const std::string& name) {
        const int id = inst.find_var(name);
        if (id == 0) fail(origin, line_no, "unknown variable '" + name + "'");
        return id;
      };
      if (kind == "expr") {
        // Everything after the 'expr' keyword, verbatim.
        const size_t at = line.find("expr");
        std::string body = line.substr(at + 4);
        try {
          c.body = parse_expression(body, inst);
        } catch (const ParseError& e) {
          fail(origin, line_no, e.what());
        }
      } else if (kind == "lt" || kind == "neq") {
        if (toks.size() != i + 3) fail(origin, line_no, "expected: " + kind + " <u> <v>");
        Structured s;
        s.kind = kind == "lt" ? StructuredKind::LessThan : StructuredKind::Neq;
        s.vars = {lookup(toks[i + 1]), lookup(toks[i + 2])};
        c.body = std::move(s);
      } else if (kind == "neq2") {
        if (toks.size() != i + 5) fail(origin, line_no, "expected: neq2 <tu> <tv> <su> <sv>");
        Structured s;
        s.kind = StructuredKind::NeqPair;
        s.vars = {lookup(toks[i + 1]), lookup(toks[i + 2]), lookup(toks[i + 3]), lookup(toks[i + 4])};
        c.body = std::move(s);
      } else if (kind == "parity") {
        if (toks.size() < i + 2) fail(origin, line_no, "expected: parity <k> <v1> ... <vk>");
        int k = 0;
        try {
          k = std::stoi(toks[i + 1]);
        } catch (...) {
          fail(origin, line_no, "bad parity count '" + toks[i + 1] + "'");
        }
        if (k < 1 || toks.size() != i + 2 + static_cast<size_t>(k))
          fail(origin, line_no, "parity count does not match variable list");
        Structured s;
        s.kind = StructuredKind::Parity;
        for (int j = 0; j < k; ++j) s.vars.push_back(lookup(toks[i + 2 + static_cast<size_t>(j)]));
        c.body = std::move(s);
      } else {
        fail(origin, line_no, "unknown constraint kind '" + kind + "'");
      }
      inst.constraints.push_back(std::move(c));
    } else if (head == "objective") {
      if (toks.size() != 2) fail(origin, line_no, "expected: objective satisfy|min-violations");
      if (toks[1] == "satisfy")
        inst.mode = ObjectiveMode::Satisfy;
      else if (toks[1] == "min-violations")
        inst.mode = ObjectiveMode::MinViolations;
      else
        fail(origin, line_no, "unknown objective '" + toks[1] + "'");
    } else {
      fail(origin, line_no, "unknown directive '" + head + "'");
    }
  }
  try {
    inst.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_instance_text(buf.str(), path);
}

std::string write_instance_text(const Instance& inst) {
  std::ostringstream out;
  std::vector<std::string> names;
  names.reserve(inst.vars.size());
  for (const auto& v : inst.vars) names.push_back(v.name);
  for (const auto& v : inst.vars) out << "var " << v.name << ' ' << v.domain << '\n';
  for (const auto& c : inst.constraints) {
    out << "con";
    if (c.weight != 1.0) out << " weight=" << format_weight(c.weight);
    if (c.soft) out << " soft";
    if (c.is_structured()) {
      const auto& s = c.structured();
      out << ' ' << kind_name(s.kind);
      if (s.kind == StructuredKind::Parity) out << ' ' << s.vars.size();
      for (int id : s.vars) out << ' ' << inst.vars[static_cast<size_t>(id - 1)].name;
    } else {
      out << " expr " << print_expr(*c.expr(), &names);
    }
    out << '\n';
  }
  out << "objective " << (inst.mode == ObjectiveMode::Satisfy ? "satisfy" : "min-violations") << '\n';
  return out.str();
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << write_instance_text(inst);
}

}  // namespace fcsp

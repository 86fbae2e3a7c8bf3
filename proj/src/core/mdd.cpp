#include "mdd.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fcsp {

int Mdd::edge_count() const {
  int n = 0;
  for (const auto& nd : nodes) n += static_cast<int>(nd.kids.size());
  return n;
}

bool Mdd::evaluate(std::span<const int> assignment) const {
  NodeRef r = root;
  while (!is_terminal(r)) {
    const MddNode& nd = node(r);
    r = nd.kids[static_cast<size_t>(assignment[static_cast<size_t>(nd.var - 1)])];
  }
  return r == kTrueRef;
}

namespace {

struct NodeKey {
  int var;
  std::vector<NodeRef> kids;
  bool operator==(const NodeKey& o) const { return var == o.var && kids == o.kids; }
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = std::hash<int>()(k.var);
    for (NodeRef r : k.kids) h = h * 1000003u + static_cast<size_t>(r) + 0x9e3779b9u;
    return h;
  }
};

// Hash-consing arena. make() merges duplicate (var, children) signatures and
// collapses nodes whose children are all the same terminal; identical
// non-terminal children are kept.
class Builder {
 public:
  NodeRef make(int var, std::vector<NodeRef> kids) {
    bool all_same = true;
    for (NodeRef k : kids)
      if (k != kids[0]) {
        all_same = false;
        break;
      }
    if (all_same && is_terminal(kids[0])) return kids[0];
    NodeKey key{var, std::move(kids)};
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    nodes_.push_back({var, key.kids});
    const NodeRef ref = static_cast<NodeRef>(nodes_.size() + 1);
    unique_.emplace(std::move(key), ref);
    return ref;
  }

  // Reachable nodes renumbered so the arena is the reverse of the
  // breadth-first level order from the root (children in edge order). The
  // scalar sweeps then visit nodes and edges in exactly the order the
  // serialized table does, and match the batched engine bit for bit.
  Mdd finish(NodeRef root, std::vector<int> order) const {
    Mdd out;
    out.order = std::move(order);
    out.root = root;
    if (is_terminal(root)) return out;
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<NodeRef> bfs{root};
    seen[static_cast<size_t>(root - 2)] = 1;
    for (size_t head = 0; head < bfs.size(); ++head) {
      for (NodeRef k : nodes_[static_cast<size_t>(bfs[head] - 2)].kids) {
        if (is_terminal(k) || seen[static_cast<size_t>(k - 2)]) continue;
        seen[static_cast<size_t>(k - 2)] = 1;
        bfs.push_back(k);
      }
    }
    std::vector<NodeRef> remap(nodes_.size(), -1);
    const size_t n = bfs.size();
    for (size_t pos = 0; pos < n; ++pos)  // bfs position pos -> arena index n-1-pos
      remap[static_cast<size_t>(bfs[pos] - 2)] = static_cast<NodeRef>(n - 1 - pos + 2);
    out.nodes.resize(n);
    for (size_t pos = 0; pos < n; ++pos) {
      MddNode nd = nodes_[static_cast<size_t>(bfs[pos] - 2)];
      for (NodeRef& k : nd.kids)
        if (!is_terminal(k)) k = remap[static_cast<size_t>(k - 2)];
      out.nodes[n - 1 - pos] = std::move(nd);
    }
    out.root = static_cast<NodeRef>(n - 1 + 2);
    return out;
  }

 private:
  std::vector<MddNode> nodes_;
  std::unordered_map<NodeKey, NodeRef, NodeKeyHash> unique_;
};

std::vector<int> first_use_vars(const Expr& e) {
  std::vector<int> out;
  auto seen = [&](int id) { return std::find(out.begin(), out.end(), id) != out.end(); };
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.op == ExprOp::Var) {
      if (!seen(x.var)) out.push_back(x.var);
      return;
    }
    if (x.lhs) walk(*x.lhs);
    if (x.rhs) walk(*x.rhs);
  };
  walk(e);
  return out;
}

}  // namespace

Mdd build_from_expr(const Instance& inst, const ExprPtr& expr, std::vector<int> order) {
  Builder builder;
  // Memo key: (position, canonical text of the folded residual).
  std::unordered_map<std::string, NodeRef> memo;
  ExprPtr root_expr = fold_expr(expr);

  std::function<NodeRef(size_t, const ExprPtr&)> rec = [&](size_t pos, const ExprPtr& e) -> NodeRef {
    if (e->op == ExprOp::Lit) return e->value != 0 ? kTrueRef : kFalseRef;
    if (pos >= order.size()) throw std::runtime_error("expression mentions a variable outside the order");
    std::string key = std::to_string(pos) + "|" + print_expr(*e);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int var = order[pos];
    const int dom = inst.domain(var);
    std::vector<NodeRef> kids(static_cast<size_t>(dom));
    for (int j = 0; j < dom; ++j) kids[static_cast<size_t>(j)] = rec(pos + 1, substitute(e, var, j));
    const NodeRef r = builder.make(var, std::move(kids));
    memo.emplace(std::move(key), r);
    return r;
  };

  const NodeRef root = rec(0, root_expr);
  return builder.finish(root, std::move(order));
}

Mdd build_atomic(const Instance& inst, const Constraint& c, const BuildOptions& opts) {
  ExprPtr e = c.is_structured() ? structured_to_expr(c.structured()) : c.expr();
  std::vector<int> order = expr_vars(*e);
  if (static_cast<int>(order.size()) > opts.max_atoms)
    throw std::runtime_error("constraint exceeds the " + std::to_string(opts.max_atoms) + "-variable cap");
  if (opts.first_use_order) order = first_use_vars(*e);
  return build_from_expr(inst, e, std::move(order));
}

namespace {

std::vector<int> merge_orders(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  size_t i = 0, j = 0;
  auto in_rest = [](const std::vector<int>& v, size_t from, int id) {
    return std::find(v.begin() + static_cast<long>(from), v.end(), id) != v.end();
  };
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i] == b[j]) {
      out.push_back(a[i]);
      ++i;
      ++j;
    } else if (i < a.size() && !in_rest(b, j, a[i])) {
      out.push_back(a[i]);
      ++i;
    } else if (j < b.size() && !in_rest(a, i, b[j])) {
      out.push_back(b[j]);
      ++j;
    } else {
      throw std::runtime_error("variable orders are not interleavable");
    }
  }
  return out;
}

struct PairKey {
  size_t pos;
  NodeRef x, y;
  bool operator==(const PairKey& o) const { return pos == o.pos && x == o.x && y == o.y; }
};
struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    return (k.pos * 0x9e3779b97f4a7c15ull) ^ (static_cast<size_t>(k.x) << 21) ^ static_cast<size_t>(k.y);
  }
};

int64_t apply_op(ExprOp op, int64_t a, int64_t b) {
  switch (op) {
    case ExprOp::And:
      return a & b;
    case ExprOp::Or:
      return a | b;
    case ExprOp::Xor:
      return a ^ b;
    default:
      throw std::runtime_error("apply supports AND, OR, XOR");
  }
}

}  // namespace

Mdd apply(const Instance& inst, const Mdd& left, const Mdd& right, ExprOp op) {
  const std::vector<int> order = merge_orders(left.order, right.order);
  Builder builder;
  std::unordered_map<PairKey, NodeRef, PairKeyHash> memo;

  auto cofactor = [](const Mdd& m, NodeRef r, int var, int j) -> NodeRef {
    if (is_terminal(r)) return r;
    const MddNode& nd = m.node(r);
    return nd.var == var ? nd.kids[static_cast<size_t>(j)] : r;
  };

  std::function<NodeRef(size_t, NodeRef, NodeRef)> rec = [&](size_t pos, NodeRef x, NodeRef y) -> NodeRef {
    if (is_terminal(x) && is_terminal(y))
      return apply_op(op, x == kTrueRef, y == kTrueRef) ? kTrueRef : kFalseRef;
    if (op == ExprOp::And && (x == kFalseRef || y == kFalseRef)) return kFalseRef;
    if (op == ExprOp::Or && (x == kTrueRef || y == kTrueRef)) return kTrueRef;
    const PairKey key{pos, x, y};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int var = order[pos];
    const int dom = inst.domain(var);
    std::vector<NodeRef> kids(static_cast<size_t>(dom));
    for (int j = 0; j < dom; ++j)
      kids[static_cast<size_t>(j)] = rec(pos + 1, cofactor(left, x, var, j), cofactor(right, y, var, j));
    const NodeRef r = builder.make(var, std::move(kids));
    memo.emplace(key, r);
    return r;
  };

  const NodeRef root = rec(0, left.root, right.root);
  return builder.finish(root, order);
}

Mdd reduce(const Mdd& m) {
  Builder builder;
  std::vector<NodeRef> remap(m.nodes.size());
  for (size_t i = 0; i < m.nodes.size(); ++i) {  // children precede parents
    MddNode nd = m.nodes[i];
    std::vector<NodeRef> kids = nd.kids;
    for (NodeRef& k : kids)
      if (!is_terminal(k)) k = remap[static_cast<size_t>(k - 2)];
    remap[i] = builder.make(nd.var, std::move(kids));
  }
  const NodeRef root = is_terminal(m.root) ? m.root : remap[static_cast<size_t>(m.root - 2)];
  return builder.finish(root, m.order);
}

bool mdd_equal(const Mdd& a, const Mdd& b) {
  if (a.order != b.order) return false;
  Builder builder;
  auto copy_in = [&](const Mdd& m) -> NodeRef {
    std::vector<NodeRef> remap(m.nodes.size());
    for (size_t i = 0; i < m.nodes.size(); ++i) {
      std::vector<NodeRef> kids = m.nodes[i].kids;
      for (NodeRef& k : kids)
        if (!is_terminal(k)) k = remap[static_cast<size_t>(k - 2)];
      remap[i] = builder.make(m.nodes[i].var, std::move(kids));
    }
    return is_terminal(m.root) ? m.root : remap[static_cast<size_t>(m.root - 2)];
  };
  return copy_in(a) == copy_in(b);
}

}  // namespace fcsp

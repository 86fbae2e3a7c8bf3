#include "edge_table.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fcsp {

int EdgeTable::domain_of(int v) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return var_domain[i];
  throw std::runtime_error("variable " + std::to_string(v) + " not in edge table");
}

EdgeTable to_edge_table(const Mdd& m, const Instance& inst, int pad_to) {
  EdgeTable t;
  if (m.constant()) {
    t.is_constant = true;
    t.constant_value = m.root == kTrueRef;
    t.false_id = 1;
    t.true_id = 2;
    if (pad_to > 0) {
      t.vid.assign(static_cast<size_t>(pad_to), 0);
      t.nid.assign(static_cast<size_t>(pad_to), 0);
      t.eid.assign(static_cast<size_t>(pad_to), 0);
      t.cid.assign(static_cast<size_t>(pad_to), 0);
    }
    return t;
  }

  // Breadth-first ids from the root, children scanned in edge order. The
  // diagram's non-terminal edges descend exactly one level, so BFS order is
  // level order and the row sweep is a sound schedule.
  std::vector<int32_t> id(m.nodes.size(), 0);
  std::deque<NodeRef> queue{m.root};
  int32_t next_id = 1;
  id[static_cast<size_t>(m.root - 2)] = next_id++;
  std::vector<NodeRef> bfs{m.root};
  while (!queue.empty()) {
    const NodeRef r = queue.front();
    queue.pop_front();
    for (NodeRef k : m.node(r).kids) {
      if (is_terminal(k)) continue;
      int32_t& kid_id = id[static_cast<size_t>(k - 2)];
      if (kid_id == 0) {
        kid_id = next_id++;
        queue.push_back(k);
        bfs.push_back(k);
      }
    }
  }

  t.node_count = static_cast<int>(bfs.size());
  t.false_id = static_cast<int32_t>(t.node_count + 1);
  t.true_id = static_cast<int32_t>(t.node_count + 2);
  t.root_id = 1;
  t.edges = m.edge_count();
  if (pad_to == 0) pad_to = t.edges;
  if (pad_to < t.edges) throw std::runtime_error("pad_to smaller than edge count");

  t.vid.reserve(static_cast<size_t>(pad_to));
  for (NodeRef r : bfs) {
    const MddNode& nd = m.node(r);
    for (size_t j = 0; j < nd.kids.size(); ++j) {
      const NodeRef k = nd.kids[j];
      t.vid.push_back(static_cast<int32_t>(nd.var));
      t.nid.push_back(id[static_cast<size_t>(r - 2)]);
      t.eid.push_back(static_cast<int32_t>(j));
      t.cid.push_back(k == kFalseRef ? t.false_id
                                     : (k == kTrueRef ? t.true_id : id[static_cast<size_t>(k - 2)]));
    }
    if (std::find(t.vars.begin(), t.vars.end(), nd.var) == t.vars.end()) {
      t.vars.push_back(nd.var);
      t.var_domain.push_back(inst.domain(nd.var));
    }
  }
  while (t.rows() < pad_to) {
    t.vid.push_back(0);
    t.nid.push_back(0);
    t.eid.push_back(0);
    t.cid.push_back(0);
  }
  return t;
}

Mdd mdd_from_table(const EdgeTable& t) {
  Mdd m;
  m.order = t.vars;
  if (t.is_constant) {
    m.root = t.constant_value ? kTrueRef : kFalseRef;
    return m;
  }
  // Group rows by source node, remembering where each node's rows start.
  struct Entry {
    int var = 0;
    int first_row = -1;
    std::vector<int32_t> kids;
  };
  std::map<int32_t, Entry> by_id;
  for (int r = 0; r < t.rows(); ++r) {
    const size_t i = static_cast<size_t>(r);
    if (t.vid[i] == 0) continue;
    Entry& entry = by_id[t.nid[i]];
    entry.var = t.vid[i];
    if (entry.first_row < 0) entry.first_row = r;
    const size_t e = static_cast<size_t>(t.eid[i]);
    if (entry.kids.size() <= e) entry.kids.resize(e + 1, 0);
    entry.kids[e] = t.cid[i];
  }
  // Rows are in topological source order, so reverse row order visits
  // children before parents.
  std::vector<int32_t> ids;
  ids.reserve(by_id.size());
  for (const auto& [id, entry] : by_id) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [&](int32_t a, int32_t b) {
    return by_id.at(a).first_row > by_id.at(b).first_row;
  });
  std::map<int32_t, NodeRef> ref_of;
  ref_of[t.false_id] = kFalseRef;
  ref_of[t.true_id] = kTrueRef;
  for (int32_t id : ids) {
    const Entry& entry = by_id.at(id);
    MddNode nd;
    nd.var = entry.var;
    for (int32_t kid : entry.kids) nd.kids.push_back(ref_of.at(kid));
    m.nodes.push_back(std::move(nd));
    ref_of[id] = static_cast<NodeRef>(m.nodes.size() + 1);
  }
  m.root = ref_of.at(t.root_id);
  return m;
}

namespace {

[[noreturn]] void bad(const std::string& origin, const std::string& msg) {
  throw std::runtime_error(origin + ": " + msg);
}

}  // namespace

EdgeTable read_mdd_text(const std::string& text, const std::string& origin) {
  EdgeTable t;
  t.has_trailer = false;
  std::istringstream in(text);
  std::string line;
  bool saw_trailer = false;
  bool saw_constant = false;
  bool constant_value = false;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    std::string comment;
    if (hash != std::string::npos) {
      comment = line.substr(hash + 1);
      line.erase(hash);
    }
    // Trailer comments: "# true=<id> false=<id>" or "# constant=true|false".
    {
      std::istringstream cs(comment);
      std::string tok;
      while (cs >> tok) {
        if (tok.rfind("true=", 0) == 0) {
          t.true_id = std::atoi(tok.c_str() + 5);
          saw_trailer = true;
        } else if (tok.rfind("false=", 0) == 0) {
          t.false_id = std::atoi(tok.c_str() + 6);
          saw_trailer = true;
        } else if (tok == "constant=true") {
          saw_constant = true;
          constant_value = true;
        } else if (tok == "constant=false") {
          saw_constant = true;
          constant_value = false;
        }
      }
    }
    std::istringstream ls(line);
    long long a, b, c, d;
    if (!(ls >> a)) continue;  // blank
    if (!(ls >> b >> c >> d)) bad(origin, "malformed row '" + line + "'");
    std::string extra;
    if (ls >> extra) bad(origin, "malformed row '" + line + "' (expected 4 fields)");
    if (a < 0 || b < 0 || c < 0 || d < 0) bad(origin, "negative field in row '" + line + "'");
    t.vid.push_back(static_cast<int32_t>(a));
    t.nid.push_back(static_cast<int32_t>(b));
    t.eid.push_back(static_cast<int32_t>(c));
    t.cid.push_back(static_cast<int32_t>(d));
  }

  // Split padding from data.
  int edges = 0;
  for (int r = 0; r < t.rows(); ++r) {
    const size_t i = static_cast<size_t>(r);
    const bool zero = t.vid[i] == 0 && t.nid[i] == 0 && t.eid[i] == 0 && t.cid[i] == 0;
    if (!zero) {
      if (t.vid[i] == 0 || t.nid[i] == 0 || t.cid[i] == 0)
        bad(origin, "row " + std::to_string(r + 1) + " uses reserved id 0");
      ++edges;
    }
  }
  t.edges = edges;

  if (edges == 0) {
    if (saw_constant) {
      t.is_constant = true;
      t.constant_value = constant_value;
      t.false_id = 1;
      t.true_id = 2;
      t.has_trailer = true;
      return t;
    }
    bad(origin, "no rows");
  }

  // Per-node bookkeeping.
  struct NodeInfo {
    int var = 0;
    std::map<int32_t, int32_t> kids;  // eid -> cid
    int first_nid_row = -1;
  };
  std::map<int32_t, NodeInfo> nodes;
  std::map<int32_t, int> last_cid_row;
  for (int r = 0; r < t.rows(); ++r) {
    const size_t i = static_cast<size_t>(r);
    if (t.vid[i] == 0) continue;
    NodeInfo& nd = nodes[t.nid[i]];
    if (nd.var == 0)
      nd.var = t.vid[i];
    else if (nd.var != t.vid[i])
      bad(origin, "node " + std::to_string(t.nid[i]) + " carries two variable ids");
    if (!nd.kids.emplace(t.eid[i], t.cid[i]).second)
      bad(origin, "duplicate edge for node " + std::to_string(t.nid[i]) + " label " +
                      std::to_string(t.eid[i]) + " (determinism)");
    if (nd.first_nid_row < 0) nd.first_nid_row = r;
    last_cid_row[t.cid[i]] = r;
  }

  // Domain sizes implied per variable; every node of a variable must carry
  // the full contiguous label set.
  std::map<int, int> dom;
  for (const auto& [id, nd] : nodes) {
    const int d = static_cast<int>(nd.kids.rbegin()->first) + 1;
    auto [it, fresh] = dom.emplace(nd.var, d);
    if (!fresh && it->second != d)
      bad(origin, "variable " + std::to_string(nd.var) + " has inconsistent edge counts");
  }
  for (const auto& [id, nd] : nodes) {
    const int d = dom.at(nd.var);
    if (d < 2) bad(origin, "variable " + std::to_string(nd.var) + " has fewer than 2 edge labels");
    for (int j = 0; j < d; ++j)
      if (!nd.kids.count(j))
        bad(origin, "node " + std::to_string(id) + " missing edge label " + std::to_string(j));
  }

  // Sinks and terminals.
  std::vector<int32_t> sinks;
  for (const auto& [cid, row] : last_cid_row)
    if (!nodes.count(cid)) sinks.push_back(cid);
  if (saw_trailer) {
    if (t.true_id == 0 || t.false_id == 0) bad(origin, "trailer must name both terminals");
    if (t.true_id == t.false_id) bad(origin, "terminals must be distinct");
    for (int32_t s : sinks)
      if (s != t.true_id && s != t.false_id)
        bad(origin, "dangling child id " + std::to_string(s));
    if (nodes.count(t.true_id) || nodes.count(t.false_id)) bad(origin, "terminal id also used as a node");
    t.has_trailer = true;
  } else {
    if (sinks.size() != 2)
      bad(origin, "cannot identify terminals: " + std::to_string(sinks.size()) +
                      " sink ids and no `# true=<id> false=<id>` trailer");
    t.false_id = std::min(sinks[0], sinks[1]);
    t.true_id = std::max(sinks[0], sinks[1]);
    t.terminal_heuristic_used = true;
  }

  // Unique root: a node id never referenced as a child.
  std::vector<int32_t> roots;
  for (const auto& [id, nd] : nodes)
    if (!last_cid_row.count(id)) roots.push_back(id);
  if (roots.empty()) bad(origin, "no root (cyclic structure)");
  if (roots.size() > 1) bad(origin, "multiple roots");
  t.root_id = roots[0];

  // Level order: first appearance of each variable, scanning rows in order.
  for (int r = 0; r < t.rows(); ++r) {
    const size_t i = static_cast<size_t>(r);
    if (t.vid[i] == 0) continue;
    if (std::find(t.vars.begin(), t.vars.end(), t.vid[i]) == t.vars.end()) {
      t.vars.push_back(t.vid[i]);
      t.var_domain.push_back(dom.at(t.vid[i]));
    }
  }
  auto level_of = [&](int var) {
    return static_cast<int>(std::find(t.vars.begin(), t.vars.end(), var) - t.vars.begin());
  };

  // Orderedness: along every edge the child's variable sits strictly deeper.
  for (const auto& [id, nd] : nodes) {
    for (const auto& [e, cid] : nd.kids) {
      if (cid == t.true_id || cid == t.false_id) continue;
      auto child = nodes.find(cid);
      if (child == nodes.end()) bad(origin, "dangling child id " + std::to_string(cid));
      if (level_of(child->second.var) <= level_of(nd.var))
        bad(origin, "not ordered: edge from variable " + std::to_string(nd.var) + " to " +
                        std::to_string(child->second.var));
    }
  }

  // Schedule soundness: all writes into a node happen before its own rows.
  for (const auto& [id, nd] : nodes) {
    auto w = last_cid_row.find(id);
    if (w != last_cid_row.end() && w->second >= nd.first_nid_row)
      bad(origin, "row order unsound: node " + std::to_string(id) +
                      " is written after its own rows begin");
  }

  t.node_count = static_cast<int>(nodes.size());
  return t;
}

EdgeTable read_mdd_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mdd file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_mdd_text(buf.str(), path);
}

std::string write_mdd_text(const EdgeTable& t) {
  std::ostringstream out;
  out << "# vid, nid, eid, cid\n";
  for (int r = 0; r < t.rows(); ++r) {
    const size_t i = static_cast<size_t>(r);
    out << t.vid[i] << ' ' << t.nid[i] << ' ' << t.eid[i] << ' ' << t.cid[i] << '\n';
  }
  if (t.is_constant)
    out << "# constant=" << (t.constant_value ? "true" : "false") << '\n';
  else if (t.has_trailer)
    out << "# true=" << t.true_id << " false=" << t.false_id << '\n';
  return out.str();
}

void write_mdd_file(const EdgeTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mdd file '" + path + "'");
  out << write_mdd_text(t);
}

}  // namespace fcsp

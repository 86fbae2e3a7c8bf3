#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdd.hpp"

namespace fcsp {

// Flattened MDD: one row per edge, (vid, nid, eid, cid), sources in level
// order so a single forward sweep is a valid top-down schedule. Shorter
// tables are padded with all-zero rows. Node ids are 1..node_count with the
// two terminals taking the next two ids (FALSE then TRUE).
struct EdgeTable {
  std::vector<int32_t> vid, nid, eid, cid;

  int edges = 0;       // data rows (padding excluded)
  int node_count = 0;  // decision nodes
  int32_t false_id = 0;
  int32_t true_id = 0;
  int32_t root_id = 0;

  std::vector<int> vars;        // distinct vids in level order
  std::vector<int> var_domain;  // parallel to vars

  bool is_constant = false;  // zero-row table for a constant function
  bool constant_value = false;

  bool has_trailer = true;              // emit "# true=.. false=.." on write
  bool terminal_heuristic_used = false; // reader lacked a trailer

  int rows() const { return static_cast<int>(vid.size()); }
  int domain_of(int v) const;
};

// pad_to = 0 means "exactly the edge count"; pad_to < edges is an error.
EdgeTable to_edge_table(const Mdd& m, const Instance& inst, int pad_to = 0);

// Reconstruct the diagram; table must already be valid (as read_mdd_file
// guarantees). The variable order is the table's level order.
Mdd mdd_from_table(const EdgeTable& t);

// Parses and fully validates: orderedness, determinism, complete edge labels,
// schedule soundness, unique root, resolvable terminals.
EdgeTable read_mdd_file(const std::string& path);
EdgeTable read_mdd_text(const std::string& text, const std::string& origin = "<string>");

void write_mdd_file(const EdgeTable& t, const std::string& path);
std::string write_mdd_text(const EdgeTable& t);

}  // namespace fcsp

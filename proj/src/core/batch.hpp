#pragma once

#include <span>

#include "cop.hpp"

namespace fcsp {

// k edge tables flattened into rectangular row arrays (k x R, zero padded).
// Message buffers are partitioned per table: table t owns msg[msg_off[t] ..
// msg_off[t] + node_count_t + 2). Row r of table t lives at index t*R + r.
// Tables are traversed by ascending (descending) row index, which is sound
// because each table's rows are in topological source order.
struct Batch {
  int k = 0;
  int R = 0;
  std::vector<int32_t> vid, nid, eid, cid;
  std::vector<int> msg_off;                      // per table
  std::vector<int32_t> root_id, true_id, false_id;  // per table, local 1-based ids
  int msg_len = 0;
  std::vector<int> pointer_id;  // 1-based variable id -> offset into the flat point

  int row_index(int table, int row) const { return table * R + row; }
};

// Pads every table to the widest one (pad_to = 0) or to an explicit width.
Batch pack(const Instance& inst, std::span<const Mdd> mdds, int pad_to = 0);
Batch pack_tables(const Instance& inst, std::span<const EdgeTable> tables, int pad_to = 0);

// Per-table circuit-output probabilities; cop_out has length k.
void batch_top_down(const Batch& b, const SimplexPoint& p, std::span<double> cop_out,
                    ThreadPool* pool = nullptr);

// Top-down plus bottom-up sweep; grad accumulates sum_t weights[t] * dCOP_t.
// Chunks of tables get private gradient buffers merged in fixed order, so the
// result is independent of the thread count.
void batch_gradient(const Batch& b, const SimplexPoint& p, std::span<const double> weights,
                    std::span<double> cop_out, std::span<double> grad, ThreadPool* pool = nullptr);

// Batched evaluation path behind the optimizer: MDD-compiled constraints are
// grouped by unpadded edge count (one Batch per shape class), closed forms
// stay scalar.
struct BatchObjective {
  std::vector<Batch> groups;
  std::vector<std::vector<double>> group_weights;
  std::vector<std::pair<Structured, double>> closed;
};

BatchObjective build_batch_objective(const Instance& inst, const Compiled& comp);

double batch_objective_eval(const BatchObjective& bo, const SimplexPoint& p, std::span<double> grad,
                            ThreadPool* pool = nullptr);

}  // namespace fcsp

#include "batch.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fcsp {

Batch pack_tables(const Instance& inst, std::span<const EdgeTable> tables, int pad_to) {
  if (tables.empty()) throw std::runtime_error("pack: empty table list");
  Batch b;
  b.k = static_cast<int>(tables.size());
  int width = pad_to;
  for (const auto& t : tables) width = std::max(width, t.rows());
  b.R = width;

  b.vid.assign(static_cast<size_t>(b.k) * static_cast<size_t>(b.R), 0);
  b.nid.assign(b.vid.size(), 0);
  b.eid.assign(b.vid.size(), 0);
  b.cid.assign(b.vid.size(), 0);

  for (int t = 0; t < b.k; ++t) {
    const EdgeTable& et = tables[static_cast<size_t>(t)];
    if (et.rows() > b.R) throw std::runtime_error("pack: table wider than target row count");
    const size_t base = static_cast<size_t>(t) * static_cast<size_t>(b.R);
    for (int r = 0; r < et.rows(); ++r) {
      b.vid[base + static_cast<size_t>(r)] = et.vid[static_cast<size_t>(r)];
      b.nid[base + static_cast<size_t>(r)] = et.nid[static_cast<size_t>(r)];
      b.eid[base + static_cast<size_t>(r)] = et.eid[static_cast<size_t>(r)];
      b.cid[base + static_cast<size_t>(r)] = et.cid[static_cast<size_t>(r)];
    }
    b.msg_off.push_back(b.msg_len);
    b.msg_len += et.node_count + 2;
    // A constant table has no rows; pointing the root at a terminal preseeds
    // the answer and the padded sweep leaves it untouched.
    b.root_id.push_back(et.is_constant ? (et.constant_value ? et.true_id : et.false_id) : et.root_id);
    b.true_id.push_back(et.true_id);
    b.false_id.push_back(et.false_id);
  }

  b.pointer_id.assign(static_cast<size_t>(inst.var_count()) + 1, 0);
  int off = 0;
  for (int v = 1; v <= inst.var_count(); ++v) {
    b.pointer_id[static_cast<size_t>(v)] = off;
    off += inst.domain(v);
  }
  return b;
}

Batch pack(const Instance& inst, std::span<const Mdd> mdds, int pad_to) {
  std::vector<EdgeTable> tables;
  tables.reserve(mdds.size());
  for (const auto& m : mdds) tables.push_back(to_edge_table(m, inst));
  return pack_tables(inst, tables, pad_to);
}

namespace {

void table_top_down(const Batch& b, int t, std::span<const double> p, std::span<double> msg) {
  const size_t base = static_cast<size_t>(b.msg_off[static_cast<size_t>(t)]);
  msg[base + static_cast<size_t>(b.root_id[static_cast<size_t>(t)]) - 1] = 1.0;
  const size_t row0 = static_cast<size_t>(t) * static_cast<size_t>(b.R);
  for (int r = 0; r < b.R; ++r) {
    const size_t i = row0 + static_cast<size_t>(r);
    const int32_t v = b.vid[i];
    if (v == 0) continue;
    msg[base + static_cast<size_t>(b.cid[i]) - 1] +=
        msg[base + static_cast<size_t>(b.nid[i]) - 1] *
        p[static_cast<size_t>(b.pointer_id[static_cast<size_t>(v)] + b.eid[i])];
  }
}

void table_bottom_up(const Batch& b, int t, std::span<const double> p, std::span<double> msg) {
  const size_t base = static_cast<size_t>(b.msg_off[static_cast<size_t>(t)]);
  msg[base + static_cast<size_t>(b.true_id[static_cast<size_t>(t)]) - 1] = 1.0;
  const size_t row0 = static_cast<size_t>(t) * static_cast<size_t>(b.R);
  for (int r = b.R; r-- > 0;) {
    const size_t i = row0 + static_cast<size_t>(r);
    const int32_t v = b.vid[i];
    if (v == 0) continue;
    msg[base + static_cast<size_t>(b.nid[i]) - 1] +=
        msg[base + static_cast<size_t>(b.cid[i]) - 1] *
        p[static_cast<size_t>(b.pointer_id[static_cast<size_t>(v)] + b.eid[i])];
  }
}

}  // namespace

void batch_top_down(const Batch& b, const SimplexPoint& p, std::span<double> cop_out, ThreadPool* pool) {
  // Message segments are disjoint per table, so one shared buffer serves the
  // parallel case too.
  std::vector<double> msg(static_cast<size_t>(b.msg_len), 0.0);
  const auto& pf = p.flat();
  auto run = [&](int t) {
    table_top_down(b, t, pf, msg);
    cop_out[static_cast<size_t>(t)] =
        msg[static_cast<size_t>(b.msg_off[static_cast<size_t>(t)]) +
            static_cast<size_t>(b.true_id[static_cast<size_t>(t)]) - 1];
  };
  if (pool && pool->size() > 1) {
    pool->parallel_for(b.k, run);
    return;
  }
  for (int t = 0; t < b.k; ++t) run(t);
}

void batch_gradient(const Batch& b, const SimplexPoint& p, std::span<const double> weights,
                    std::span<double> cop_out, std::span<double> grad, ThreadPool* pool) {
  const auto& pf = p.flat();
  const int threads = pool ? pool->size() : 1;

  auto run_table = [&](int t, std::span<double> msg_td, std::span<double> msg_bu, std::span<double> g) {
    table_top_down(b, t, pf, msg_td);
    table_bottom_up(b, t, pf, msg_bu);
    const size_t base = static_cast<size_t>(b.msg_off[static_cast<size_t>(t)]);
    cop_out[static_cast<size_t>(t)] =
        msg_td[base + static_cast<size_t>(b.true_id[static_cast<size_t>(t)]) - 1];
    if (g.empty()) return;
    const double w = weights[static_cast<size_t>(t)];
    const size_t row0 = static_cast<size_t>(t) * static_cast<size_t>(b.R);
    for (int r = 0; r < b.R; ++r) {
      const size_t i = row0 + static_cast<size_t>(r);
      const int32_t v = b.vid[i];
      if (v == 0) continue;
      g[static_cast<size_t>(b.pointer_id[static_cast<size_t>(v)] + b.eid[i])] +=
          w * msg_td[base + static_cast<size_t>(b.nid[i]) - 1] *
          msg_bu[base + static_cast<size_t>(b.cid[i]) - 1];
    }
  };

  if (threads == 1 || b.k < 4) {
    thread_local std::vector<double> td, bu;
    td.assign(static_cast<size_t>(b.msg_len), 0.0);
    bu.assign(static_cast<size_t>(b.msg_len), 0.0);
    for (int t = 0; t < b.k; ++t) run_table(t, td, bu, grad);
    return;
  }

  // One strided slice of tables per worker; gradient partials merged in slice
  // order. Message segments are disjoint per table, so td/bu can be shared.
  const int tasks = std::min(threads, b.k);
  std::vector<std::vector<double>> partial(static_cast<size_t>(tasks));
  std::vector<double> td_all(static_cast<size_t>(b.msg_len), 0.0);
  std::vector<double> bu_all(static_cast<size_t>(b.msg_len), 0.0);
  pool->parallel_for(tasks, [&](int ti) {
    std::span<double> g;
    if (!grad.empty()) {
      partial[static_cast<size_t>(ti)].assign(grad.size(), 0.0);
      g = partial[static_cast<size_t>(ti)];
    }
    for (int t = ti; t < b.k; t += tasks) run_table(t, td_all, bu_all, g);
  });
  if (!grad.empty())
    for (int ti = 0; ti < tasks; ++ti)
      for (size_t j = 0; j < grad.size(); ++j) grad[j] += partial[static_cast<size_t>(ti)][j];
}

BatchObjective build_batch_objective(const Instance& inst, const Compiled& comp) {
  BatchObjective bo;
  std::map<int, std::vector<std::pair<const Mdd*, double>>> by_edges;
  for (const auto& cc : comp.items) {
    if (cc.closed) {
      bo.closed.emplace_back(*cc.closed, cc.weight);
      continue;
    }
    by_edges[cc.mdd->edge_count()].emplace_back(&*cc.mdd, cc.weight);
  }
  for (const auto& [edges, items] : by_edges) {
    std::vector<EdgeTable> tables;
    std::vector<double> weights;
    tables.reserve(items.size());
    for (const auto& [mdd, w] : items) {
      tables.push_back(to_edge_table(*mdd, inst));
      weights.push_back(w);
    }
    bo.groups.push_back(pack_tables(inst, tables));
    bo.group_weights.push_back(std::move(weights));
  }
  return bo;
}

double batch_objective_eval(const BatchObjective& bo, const SimplexPoint& p, std::span<double> grad,
                            ThreadPool* pool) {
  double value = 0;
  std::vector<double> cops;
  for (size_t gi = 0; gi < bo.groups.size(); ++gi) {
    const Batch& b = bo.groups[gi];
    cops.assign(static_cast<size_t>(b.k), 0.0);
    batch_gradient(b, p, bo.group_weights[gi], cops, grad, pool);
    for (int t = 0; t < b.k; ++t) value += bo.group_weights[gi][static_cast<size_t>(t)] * cops[static_cast<size_t>(t)];
  }
  for (const auto& [s, w] : bo.closed) value += w * closed_form_cop(s, p, grad, w);
  return value;
}

}  // namespace fcsp

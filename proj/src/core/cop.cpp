#include "cop.hpp"

#include <algorithm>

namespace fcsp {

double top_down(const Mdd& m, const SimplexPoint& p, MessageState* state) {
  std::vector<double> local;
  std::vector<double>& td = state ? state->msg : local;
  td.assign(m.nodes.size() + 2, 0.0);
  td[static_cast<size_t>(m.root)] = 1.0;
  // Descending arena order puts every node after all of its parents.
  for (int i = static_cast<int>(m.nodes.size()) - 1; i >= 0; --i) {
    const MddNode& nd = m.nodes[static_cast<size_t>(i)];
    const double mv = td[static_cast<size_t>(i + 2)];
    if (mv == 0.0) continue;
    const auto row = p.row(nd.var);
    for (size_t j = 0; j < nd.kids.size(); ++j) td[static_cast<size_t>(nd.kids[j])] += row[j] * mv;
  }
  return td[kTrueRef];
}

double bottom_up(const Mdd& m, const SimplexPoint& p, MessageState* state) {
  std::vector<double> local;
  std::vector<double>& bu = state ? state->msg : local;
  bu.assign(m.nodes.size() + 2, 0.0);
  bu[kTrueRef] = 1.0;
  for (size_t i = 0; i < m.nodes.size(); ++i) {  // children precede parents
    const MddNode& nd = m.nodes[i];
    const auto row = p.row(nd.var);
    double acc = 0;
    for (size_t j = 0; j < nd.kids.size(); ++j) acc += row[j] * bu[static_cast<size_t>(nd.kids[j])];
    bu[i + 2] = acc;
  }
  return bu[static_cast<size_t>(m.root)];
}

double cop_gradient(const Mdd& m, const SimplexPoint& p, std::span<double> grad, double weight) {
  MessageState td_state, bu_state;
  const double cop = top_down(m, p, &td_state);
  bottom_up(m, p, &bu_state);
  if (!grad.empty()) {
    for (size_t i = 0; i < m.nodes.size(); ++i) {
      const MddNode& nd = m.nodes[i];
      const double mv = td_state.msg[i + 2];
      if (mv == 0.0) continue;
      const int off = p.offset(nd.var);
      for (size_t j = 0; j < nd.kids.size(); ++j)
        grad[static_cast<size_t>(off) + j] += weight * mv * bu_state.msg[static_cast<size_t>(nd.kids[j])];
    }
  }
  return cop;
}

namespace {

double less_than_cop(std::span<const double> pu, std::span<const double> pv, int off_u, int off_v,
                     std::span<double> grad, double w) {
  // P[u < v] = sum_j pv[j] * P[u <= j-1], prefix CDF of u.
  double cop = 0;
  double cdf = 0;
  const size_t du = pu.size(), dv = pv.size();
  for (size_t j = 0; j < dv; ++j) {
    if (j >= 1 && j - 1 < du) cdf += pu[j - 1];
    cop += pv[j] * cdf;
  }
  if (!grad.empty()) {
    // d/dpv[j] = P[u < j]; d/dpu[i] = P[v > i] (suffix sums of v).
    double prefix = 0;
    for (size_t j = 0; j < dv; ++j) {
      if (j >= 1 && j - 1 < du) prefix += pu[j - 1];
      grad[static_cast<size_t>(off_v) + j] += w * prefix;
    }
    double suffix = 0;  // P[v > i], domains may differ in size
    for (size_t j = du; j < dv; ++j) suffix += pv[j];
    for (size_t i = du; i-- > 0;) {
      grad[static_cast<size_t>(off_u) + i] += w * suffix;
      if (i < dv) suffix += pv[i];
    }
  }
  return cop;
}

double eq_prob(std::span<const double> pa, std::span<const double> pb) {
  double s = 0;
  const size_t d = std::min(pa.size(), pb.size());
  for (size_t i = 0; i < d; ++i) s += pa[i] * pb[i];
  return s;
}

}  // namespace

double closed_form_cop(const Structured& s, const SimplexPoint& p, std::span<double> grad, double weight) {
  switch (s.kind) {
    case StructuredKind::LessThan: {
      const int u = s.vars[0], v = s.vars[1];
      return less_than_cop(p.row(u), p.row(v), p.offset(u), p.offset(v), grad, weight);
    }
    case StructuredKind::Neq: {
      const int u = s.vars[0], v = s.vars[1];
      const auto pu = p.row(u), pv = p.row(v);
      const double cop = 1.0 - eq_prob(pu, pv);
      if (!grad.empty()) {
        const size_t d = std::min(pu.size(), pv.size());
        for (size_t i = 0; i < d; ++i) {
          grad[static_cast<size_t>(p.offset(u)) + i] -= weight * pv[i];
          grad[static_cast<size_t>(p.offset(v)) + i] -= weight * pu[i];
        }
      }
      return cop;
    }
    case StructuredKind::NeqPair: {
      const int tu = s.vars[0], tv = s.vars[1], su = s.vars[2], sv = s.vars[3];
      const double a = eq_prob(p.row(tu), p.row(tv));
      const double b = eq_prob(p.row(su), p.row(sv));
      const double cop = 1.0 - a * b;
      if (!grad.empty()) {
        const auto ptu = p.row(tu), ptv = p.row(tv), psu = p.row(su), psv = p.row(sv);
        size_t d = std::min(ptu.size(), ptv.size());
        for (size_t i = 0; i < d; ++i) {
          grad[static_cast<size_t>(p.offset(tu)) + i] -= weight * b * ptv[i];
          grad[static_cast<size_t>(p.offset(tv)) + i] -= weight * b * ptu[i];
        }
        d = std::min(psu.size(), psv.size());
        for (size_t i = 0; i < d; ++i) {
          grad[static_cast<size_t>(p.offset(su)) + i] -= weight * a * psv[i];
          grad[static_cast<size_t>(p.offset(sv)) + i] -= weight * a * psu[i];
        }
      }
      return cop;
    }
    case StructuredKind::Parity: {
      // P[sum odd] = (1 - prod_k (1 - 2 q_k)) / 2 with q_k = P[x_k odd].
      const size_t h = s.vars.size();
      std::vector<double> term(h);
      for (size_t k = 0; k < h; ++k) {
        double q = 0;
        const auto row = p.row(s.vars[k]);
        for (size_t j = 1; j < row.size(); j += 2) q += row[j];
        term[k] = 1.0 - 2.0 * q;
      }
      double prod = 1.0;
      for (double t : term) prod *= t;
      const double cop = (1.0 - prod) / 2.0;
      if (!grad.empty()) {
        // prefix/suffix products give prod over l != k without dividing
        std::vector<double> suffix(h + 1, 1.0);
        for (size_t k = h; k-- > 0;) suffix[k] = suffix[k + 1] * term[k];
        double prefix = 1.0;
        for (size_t k = 0; k < h; ++k) {
          const double others = prefix * suffix[k + 1];
          const auto row = p.row(s.vars[k]);
          const int off = p.offset(s.vars[k]);
          for (size_t j = 1; j < row.size(); j += 2)
            grad[static_cast<size_t>(off) + j] += weight * others;
          prefix *= term[k];
        }
      }
      return cop;
    }
  }
  return 0;
}

Compiled compile(const Instance& inst, const CompileOptions& opts) {
  Compiled out;
  out.items.resize(inst.constraints.size());
  for (size_t i = 0; i < inst.constraints.size(); ++i) {
    const Constraint& c = inst.constraints[i];
    CompiledConstraint& cc = out.items[i];
    cc.weight = c.weight;
    cc.soft = c.soft;
    if (opts.closed_forms && c.is_structured())
      cc.closed = c.structured();
    else
      cc.mdd = build_atomic(inst, c, opts.build);
    out.weight_sum += c.weight;
  }
  return out;
}

double objective(const Compiled& comp, const SimplexPoint& p, std::span<double> grad, ThreadPool* pool) {
  const int n = static_cast<int>(comp.items.size());
  auto eval_one = [&](int i, std::span<double> g) {
    const CompiledConstraint& cc = comp.items[static_cast<size_t>(i)];
    if (cc.closed) return cc.weight * closed_form_cop(*cc.closed, p, g, cc.weight);
    return cc.weight * cop_gradient(*cc.mdd, p, g, cc.weight);
  };

  if (!pool || pool->size() == 1 || n < 4) {
    double value = 0;
    for (int i = 0; i < n; ++i) value += eval_one(i, grad);
    return value;
  }

  // One strided slice per worker, partials merged in slice order; bit-for-bit
  // reproducible for a fixed thread count.
  const int tasks = std::min(pool->size(), n);
  std::vector<double> partial_value(static_cast<size_t>(tasks), 0.0);
  std::vector<std::vector<double>> partial_grad(static_cast<size_t>(tasks));
  pool->parallel_for(tasks, [&](int ti) {
    std::span<double> g;
    if (!grad.empty()) {
      partial_grad[static_cast<size_t>(ti)].assign(grad.size(), 0.0);
      g = partial_grad[static_cast<size_t>(ti)];
    }
    double v = 0;
    for (int i = ti; i < n; i += tasks) v += eval_one(i, g);
    partial_value[static_cast<size_t>(ti)] = v;
  });
  double value = 0;
  for (int ti = 0; ti < tasks; ++ti) {
    value += partial_value[static_cast<size_t>(ti)];
    if (!grad.empty()) {
      const auto& g = partial_grad[static_cast<size_t>(ti)];
      for (size_t k = 0; k < grad.size(); ++k) grad[k] += g[k];
    }
  }
  return value;
}

}  // namespace fcsp

#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fcsp {

void project_row(std::span<double> row) {
  for (double x : row)
    if (std::isnan(x)) throw std::runtime_error("NaN in projection input");
  thread_local std::vector<double> sorted;
  sorted.assign(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0;
  double theta = 0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0)
      theta = candidate;
    else
      break;
  }
  for (double& x : row) x = std::max(x - theta, 0.0);
}

void project_point(SimplexPoint& q) {
  for (int i = 1; i <= q.var_count(); ++i) project_row(q.row(i));
}

double gradient_mapping(const SimplexPoint& p, std::span<const double> grad, double eta,
                        SimplexPoint& projected, std::span<double> g) {
  const auto& pf = p.flat();
  auto& qf = projected.flat();
  for (size_t k = 0; k < pf.size(); ++k) qf[k] = pf[k] + eta * grad[k];
  project_point(projected);
  double norm2 = 0;
  for (size_t k = 0; k < pf.size(); ++k) {
    const double gk = (qf[k] - pf[k]) / eta;
    if (!g.empty()) g[k] = gk;
    norm2 += gk * gk;
  }
  return norm2;
}

}  // namespace fcsp

#include "sparsedom/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsedom {

StepFunction::StepFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count())
    throw std::invalid_argument("StepFunction: value count != cell count");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("StepFunction: non-finite value");
}

StepFunction StepFunction::constant(const Grid& grid, double c) {
  return StepFunction(grid, std::vector<double>(grid.cell_count(), c));
}

double StepFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double average(const StepFunction& f, NodeId q) {
  double acc = 0.0;
  f.grid().for_each_cell(q, [&](uint64_t c) { acc += f.value(c); });
  return acc / double(f.grid().cells_per_node(q.level));
}

double average(const StepFunction& f, const DyadicCube& q) {
  return average(f, f.grid().node_of(q));
}

double integral_on(const StepFunction& f, NodeId q) {
  double acc = 0.0;
  f.grid().for_each_cell(q, [&](uint64_t c) { acc += f.value(c); });
  return acc * f.grid().cell_measure();
}

StepFunction restrict_to(const StepFunction& f, NodeId q) {
  std::vector<double> v(f.grid().cell_count(), 0.0);
  f.grid().for_each_cell(q, [&](uint64_t c) { v[c] = f.value(c); });
  return StepFunction(f.grid(), std::move(v));
}

namespace detail {
uint64_t discard_count(double t, double cell_measure, uint64_t limit) {
  if (t <= 0) return 0;
  double q = t / cell_measure;
  if (q >= double(limit)) return limit;
  return uint64_t(std::floor(q));
}
}  // namespace detail

double rearrangement(const StepFunction& f, double t) {
  if (t < 0) throw std::invalid_argument("rearrangement: t must be nonnegative");
  const uint64_t n = f.grid().cell_count();
  uint64_t k = detail::discard_count(t, f.grid().cell_measure(), n);
  if (k >= n) return 0.0;
  std::vector<double> a(f.values());
  for (double& v : a) v = std::fabs(v);
  std::nth_element(a.begin(), a.begin() + k, a.end(), std::greater<double>());
  return a[k];
}

double median(const StepFunction& f, NodeId q) {
  std::vector<double> a;
  a.reserve(f.grid().cells_per_node(q.level));
  f.grid().for_each_cell(q, [&](uint64_t c) { a.push_back(f.value(c)); });
  std::sort(a.begin(), a.end());
  const uint64_t m = a.size();
  // Minimum of the median interval: the ceil(m/2)-th smallest value.
  double cand = a[(m + 1) / 2 - 1];
  // Post-hoc verification of both defining inequalities.
  uint64_t above = 0, below = 0;
  for (double v : a) {
    if (v > cand) ++above;
    if (v < cand) ++below;
  }
  if (2 * above > m || 2 * below > m) throw std::logic_error("median: candidate failed check");
  return cand;
}

double median(const StepFunction& f, const DyadicCube& q) {
  return median(f, f.grid().node_of(q));
}

double oscillation(const StepFunction& f, NodeId q, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("oscillation: lambda must lie in (0,1)");
  std::vector<double> a;
  a.reserve(f.grid().cells_per_node(q.level));
  f.grid().for_each_cell(q, [&](uint64_t c) { a.push_back(f.value(c)); });
  const uint64_t n = a.size();
  const double measure_q = f.grid().node_measure(q.level);
  uint64_t k = detail::discard_count(lambda * measure_q, f.grid().cell_measure(), n);
  if (k >= n) return 0.0;
  std::sort(a.begin(), a.end());
  const uint64_t w = n - k;  // window length
  double best = a[w - 1] - a[0];
  for (uint64_t i = 1; i + w <= n; ++i) best = std::min(best, a[i + w - 1] - a[i]);
  return best / 2.0;
}

double weak_l1_norm(const StepFunction& f) {
  std::vector<double> a(f.values());
  for (double& v : a) v = std::fabs(v);
  std::sort(a.begin(), a.end(), std::greater<double>());
  const double m = f.grid().cell_measure();
  double best = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) break;
    if (i + 1 < a.size() && a[i + 1] == a[i]) continue;  // not the end of a tie run
    best = std::max(best, a[i] * double(i + 1) * m);
  }
  return best;
}

double l1_norm(const StepFunction& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += std::fabs(v);
  return acc * f.grid().cell_measure();
}

}  // namespace sparsedom

#pragma once

#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// A real function constant on the depth-level cells of a rooted grid.
/// Values are stored in lexicographic cell order (first axis most
/// significant). The universal carrier for functions and weights.
class StepFunction {
 public:
  StepFunction(Grid grid, std::vector<double> values);
  static StepFunction constant(const Grid& grid, double c);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double value(uint64_t cell) const { return values_[cell]; }

  double max_abs() const;

  bool same_grid(const StepFunction& o) const { return grid_ == o.grid_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Mean of f over a grid cube (exact cell mean).
double average(const StepFunction& f, NodeId q);
double average(const StepFunction& f, const DyadicCube& q);

/// Integral of f over a grid cube.
double integral_on(const StepFunction& f, NodeId q);

/// f restricted to q and zero elsewhere (on the same grid).
StepFunction restrict_to(const StepFunction& f, NodeId q);

/// Decreasing rearrangement f*(t) = inf{a >= 0 : |{|f| > a}| <= t}.
/// On a step function this is the (k*+1)-th largest of |values| where k*
/// is the number of whole cells of total measure <= t; right-continuous.
double rearrangement(const StepFunction& f, double t);

/// Canonical median of f on q: the minimum m with
/// |q ∩ {f > m}| <= |q|/2 and |q ∩ {f < m}| <= |q|/2.
double median(const StepFunction& f, NodeId q);
double median(const StepFunction& f, const DyadicCube& q);

/// Local oscillation w_lambda(f; q) = inf_c (1_q (f-c))*(lambda |q|).
/// With N cells in q and k* discardable cells, the infimum equals the
/// smallest half-width (max-min)/2 over windows of N-k* consecutive sorted
/// values, attained at the window midpoint; zero when k* >= N.
double oscillation(const StepFunction& f, NodeId q, double lambda);

/// Weak L^1 norm: sup_a a * |{|f| > a}|, attained as a increases to one of
/// the finitely many values, so evaluated as max over distinct values v of
/// v * |{|f| >= v}|.
double weak_l1_norm(const StepFunction& f);

/// L^1 norm over the root.
double l1_norm(const StepFunction& f);

namespace detail {
/// Shared helper: largest whole-cell count k with k * cell_measure <= t,
/// clipped to [0, limit].
uint64_t discard_count(double t, double cell_measure, uint64_t limit);
}  // namespace detail

}  // namespace sparsedom

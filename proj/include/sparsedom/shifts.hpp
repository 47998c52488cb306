#pragma once

#include <utility>
#include <vector>

#include "sparsedom/sparse_family.hpp"
#include "sparsedom/step_function.hpp"

namespace sparsedom {

/// Nonnegative coefficients lambda_Q on the cubes of a rooted grid; defines
/// the positive shift S f = sum_Q lambda_Q <f>_Q 1_Q and its subshifts.
class ShiftCoefficients {
 public:
  explicit ShiftCoefficients(Grid grid);

  const Grid& grid() const { return grid_; }
  double at(NodeId n) const { return lam_[n.level][n.flat]; }
  void set(NodeId n, double lambda);
  const LevelArrays& levels() const { return lam_; }

  std::vector<std::pair<NodeId, double>> entries() const;  // nonzeros, canonical order
  size_t entry_count() const;

 private:
  Grid grid_;
  LevelArrays lam_;
};

/// S f via one bottom-up pass (cube sums) and one top-down pass
/// (accumulated lambda_Q <f>_Q along root-to-cell paths): O(#nodes).
StepFunction apply_shift(const ShiftCoefficients& c, const StepFunction& f);

/// Literal double loop over (entry, cell) pairs, O(#cells * #entries);
/// the oracle for the tree evaluation and the baseline of the speedup check.
StepFunction apply_shift_naive(const ShiftCoefficients& c, const StepFunction& f);

/// Subshift S_Q: the sum restricted to cubes inside q.
StepFunction apply_subshift(const ShiftCoefficients& c, NodeId q, const StepFunction& f);
StepFunction apply_subshift_naive(const ShiftCoefficients& c, NodeId q, const StepFunction& f);

/// A positive dyadic shift of complexity k over a sparse family: each
/// family cube K contributes the average of f on its k-th ancestor,
///   S_k f = sum_K 1_K <f>_{K^(k)}.
struct SkPlusSpec {
  SparseFamily family;
  int complexity = 0;

  SkPlusSpec() = default;
  SkPlusSpec(SparseFamily fam, int k);  // validates ancestors exist
};

StepFunction apply_skplus(const SkPlusSpec& s, const StepFunction& f);
/// Adjoint under the Lebesgue pairing: sum_K 1_{K^(k)} / |K^(k)| int_K f.
StepFunction apply_skplus_adjoint(const SkPlusSpec& s, const StepFunction& f);
StepFunction apply_skplus_naive(const SkPlusSpec& s, const StepFunction& f);
StepFunction apply_skplus_adjoint_naive(const SkPlusSpec& s, const StepFunction& f);

/// Lebesgue pairing of two step functions on the same grid.
double pairing_l2(const StepFunction& a, const StepFunction& b);

/// The sharpness construction on [0,1): the family of all leftmost
/// descendant chains below level k and the normalized function
/// f = 2^k sum_L 1_{L_(k)}; the adjoint shift maps f to the constant k+1.
struct ExtremalPair {
  SkPlusSpec spec;
  StepFunction f;
};
ExtremalPair extremal_family(int k, int depth);  // depth >= 2k

/// weak-L1 norm of the shift output over the L1 norm of the input.
double weak11_ratio(const SkPlusSpec& s, const StepFunction& f, bool adjoint);
double weak11_ratio(const ShiftCoefficients& c, const StepFunction& f);

/// Oscillation of the adjoint output on a cube against (1+k) <g>_L.
struct OscAdjoint {
  double lhs = 0.0;  // w_lambda((S_k)* g; L)
  double rhs = 0.0;  // (1+k) <g>_L
};
OscAdjoint oscillation_of_adjoint(const SkPlusSpec& s, const StepFunction& g, NodeId L,
                                  double lambda);

}  // namespace sparsedom

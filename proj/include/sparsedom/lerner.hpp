#pragma once

#include <cmath>
#include <vector>

#include "sparsedom/sparse_family.hpp"
#include "sparsedom/step_function.hpp"

namespace sparsedom {

/// Default oscillation fraction for the local oscillation decomposition.
inline double lerner_lambda(int d) { return std::ldexp(1.0, -d - 2); }

/// Result of the local oscillation decomposition of f on its root cube:
/// |f - base_median| <= 2 * sum_L coefficients[L] * 1_L pointwise, with the
/// family sparse (gamma >= 1/2 at the default lambda).
struct LernerDecomposition {
  double base_median = 0.0;
  double lambda = 0.0;
  SparseFamily family;
  std::vector<double> coefficients;  // oscillation of f on each family cube
  std::vector<int> generation;       // recursion generation per cube (root = 0)
};

/// The maximal proper subcubes S of q whose children's medians escape the
/// local rearrangement threshold of q:
///   max_{C in ch(S)} |median(f, C) - median(f, q)| > (1_q(f - m))*(lambda |q|),
/// strict inequality, top-down scan (a cube is skipped when an ancestor
/// within q was already selected). Below the grid depth f is constant, so
/// cells are compared through their own value.
std::vector<NodeId> stopping_children(const StepFunction& f, NodeId q, double lambda);

/// Runs the stopping recursion from the root of f: the root and every
/// stopping cube enter the family, each stopping cube restarting the
/// recursion as a new base. Terminates because cells carry constant values.
LernerDecomposition decompose(const StepFunction& f, NodeId q0, double lambda);
LernerDecomposition decompose(const StepFunction& f, double lambda);
LernerDecomposition decompose(const StepFunction& f);

struct DominationReport {
  double min_slack = 0.0;    // min over cells of 2 sum_L w_L 1_L - |f - m0|
  bool sparseness_ok = true;  // disjoint major subsets with |E(L)| >= |L|/2
};

DominationReport verify_domination(const StepFunction& f, const LernerDecomposition& dec);

/// Total measure of the generation-g cubes, indexed from 0 (the root).
std::vector<double> generation_measures(const LernerDecomposition& dec);

}  // namespace sparsedom

#pragma once

#include <vector>

#include "sparsedom/step_function.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// Principal cubes of a pair (f, sigma) on the root: the stopping family
/// where the sigma-average of f more than doubles, with stopping-children
/// structure, per-node stopping parents, and the exhausted sets E(F).
struct CoronaForest {
  struct Member {
    NodeId node;
    int parent = -1;     // forest parent (the base whose scan selected it); -1 for the root
    int generation = 0;
    double avg = 0.0;    // sigma-average of f on the member
  };

  Grid grid;
  std::vector<Member> members;               // member 0 is the root cube
  std::vector<std::vector<int>> children;    // stopping children per member
  std::vector<int> node_member;              // per node ordinal: inclusive stopping parent
  std::vector<std::vector<uint32_t>> e_cells;  // E(F): cells of F not in any stopping child

  int member_at(NodeId n) const;             // -1 when n is not a member
  /// sigma-mass helpers for the packing checks.
  double e_mass(const Weight& sigma, int member) const;
};

/// Builds the forest for f >= 0 against the measure sigma; generations are
/// the maximal proper subcubes whose sigma-average strictly exceeds twice
/// the base average. Terminates: averages double along generations and
/// levels strictly increase.
CoronaForest principal_cubes(const StepFunction& f, const Weight& sigma);

/// The minimal principal cube containing q (q itself when q is a member).
NodeId stopping_parent(const CoronaForest& forest, NodeId q);
int stopping_parent_index(const CoronaForest& forest, NodeId q);

/// The minimal principal cube STRICTLY containing a member (its forest
/// parent); used to route stopping children between the two forests.
int strict_parent_index(const CoronaForest& forest, NodeId q);

/// Stopping children of F routed back to F through the other forest:
/// F' in ch(F) whose strict parent in forestG has stopping parent F in
/// forestF. With this routing the corona projection preserves integrals
/// int_Q g_F omega = int_Q g omega for every Q whose forestF parent is F
/// and whose forestG parent lies inside F.
std::vector<int> starred_children(const CoronaForest& forestF, const CoronaForest& forestG,
                                  int member);

/// g_F = g 1_{E(F)} + sum_{F' starred} <g>^omega_{F'} 1_{F'}.
StepFunction corona_projection(const StepFunction& g, const Weight& omega, int member,
                               const CoronaForest& forestF, const CoronaForest& forestG);

}  // namespace sparsedom

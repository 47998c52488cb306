#pragma once

#include <cstdint>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

/// A set of grid cubes together with pairwise disjoint major subsets
/// E(L) within each cube, |E(L)| >= gamma |L|. Major subsets are stored as
/// cell index lists.
struct SparseFamily {
  Grid grid;
  std::vector<NodeId> cubes;                    // canonical order: level, then flat
  std::vector<std::vector<uint32_t>> major;     // per cube, cells of E(L)
  double gamma = 1.0;

  bool contains(NodeId n) const;
};

/// Derives E(L) = L minus the maximal proper family members inside L.
/// These sets are automatically pairwise disjoint; the resulting family
/// gamma is the worst |E(L)| / |L| ratio (zero cubes => gamma 1).
SparseFamily family_from_cubes(const Grid& g, std::vector<NodeId> cubes);

struct FamilyCheck {
  bool disjoint = true;
  double min_ratio = 1.0;  // min |E(L)| / |L|
};

/// Verifies disjointness of the major subsets and reports the sparseness
/// ratio actually attained.
FamilyCheck check_family(const SparseFamily& fam);

}  // namespace sparsedom

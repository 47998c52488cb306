#pragma once

#include <cstdint>
#include <vector>

#include "sparsedom/rational.hpp"

namespace sparsedom {

constexpr int kMaxDim = 6;

/// A cube of a (possibly shifted) dyadic grid:
///   2^{-level} ([0,1)^d + index + (-1)^level * shift),
/// where shift has coordinates in {0, 1/3, 2/3}, stored as numerators of
/// thirds in {0,1,2}. The alternating sign makes each shifted grid nested:
/// the children of a cube tile it exactly, in integer index arithmetic.
struct DyadicCube {
  int d = 1;
  int level = 0;
  std::vector<long long> index;  // length d
  std::vector<uint8_t> shift;    // length d, values in {0,1,2}

  DyadicCube() = default;
  DyadicCube(int d_, int level_, std::vector<long long> index_, std::vector<uint8_t> shift_);

  /// The unit cube [0,1)^d in the unshifted grid.
  static DyadicCube unit(int d);

  /// The 2^d children at level+1, ordered by offset (first axis most
  /// significant), so that child(0) holds the lower corner.
  std::vector<DyadicCube> children() const;
  DyadicCube child(unsigned offset) const;

  DyadicCube parent() const;
  /// k-fold parent; ancestor(0) is the cube itself.
  DyadicCube ancestor(int k) const;

  Rat corner(int axis) const;  // lower corner coordinate, exact
  Rat side() const { return Rat::pow2(-level); }

  /// Containment within the same shifted grid (exact index arithmetic).
  bool contains(const DyadicCube& other) const;

  bool operator==(const DyadicCube& o) const {
    return d == o.d && level == o.level && index == o.index && shift == o.shift;
  }
  bool operator!=(const DyadicCube& o) const { return !(*this == o); }

  std::string str() const;
};

/// An axis-parallel half-open cube with rational data; input to the
/// shifted-container search only.
struct RealCube {
  std::vector<Rat> corner;
  Rat side;

  RealCube() = default;
  RealCube(std::vector<Rat> corner_, Rat side_);
  int dim() const { return int(corner.size()); }
};

/// Concentric dilate 2^pow * q: same center, side scaled by 2^pow.
RealCube concentric_dilate(const RealCube& q, int pow);

/// Exact test q subset of r, both read as half-open cubes.
bool cube_contains_real(const DyadicCube& r, const RealCube& q);

struct ShiftedContainer {
  std::vector<uint8_t> shift;  // the grid that worked
  DyadicCube cube;             // R with q subset R, 2^k q subset R^{(k)}, l(R) <= 6 l(q)
};

/// Finds a shifted dyadic container for q: a cube R in some grid D^alpha
/// with q in R, the concentric dilate 2^k q inside the k-th ancestor of R,
/// and side(R) <= 6 side(q). Scans alpha in lexicographic order and the
/// (at most three) admissible levels in ascending order, returning the
/// first hit; all predicates are checked in exact rational arithmetic.
/// Exhaustion of the search space indicates a bug and throws.
ShiftedContainer find_shifted_container(const RealCube& q, int k);

}  // namespace sparsedom

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sparsedom/cube.hpp"

namespace sparsedom {

/// A node of a rooted grid: relative level in [0, depth] and the flat index
/// of the cube within that level (first axis most significant).
struct NodeId {
  int level = 0;
  uint64_t flat = 0;

  bool operator==(const NodeId& o) const { return level == o.level && flat == o.flat; }
  bool operator!=(const NodeId& o) const { return !(*this == o); }
  bool operator<(const NodeId& o) const {
    return level != o.level ? level < o.level : flat < o.flat;
  }
};

/// A root cube subdivided to a fixed depth. All step functions, shifts and
/// weights live on such a grid; the relative structure is a complete
/// 2^d-ary tree, so the shift of the root never enters any rooted
/// computation. Cells are the depth-level nodes, ordered lexicographically
/// by multi-index with the first axis most significant.
class Grid {
 public:
  Grid() : Grid(DyadicCube::unit(1), 0) {}
  Grid(DyadicCube root, int depth);

  const DyadicCube& root() const { return root_; }
  int depth() const { return depth_; }
  int dim() const { return root_.d; }

  uint64_t level_size(int s) const { return uint64_t(1) << (uint64_t(s) * dim()); }
  uint64_t cell_count() const { return level_size(depth_); }
  uint64_t node_count() const { return node_offset_[depth_ + 1]; }

  /// Measure of the root, a cell, and a level-s node.
  double root_measure() const { return root_measure_; }
  double cell_measure() const { return node_measure(depth_); }
  double node_measure(int s) const;

  /// Ordinal of a node among all nodes, levels concatenated top down.
  uint64_t node_ord(NodeId n) const { return node_offset_[n.level] + n.flat; }

  NodeId root_node() const { return NodeId{0, 0}; }
  bool is_cell(NodeId n) const { return n.level == depth_; }

  uint64_t child_flat(int level, uint64_t flat, unsigned offset) const;
  uint64_t parent_flat(int level, uint64_t flat) const;
  NodeId parent(NodeId n) const;
  /// Rooted ancestor; throws when k exceeds the levels available above n.
  NodeId ancestor(NodeId n, int k) const;
  /// The level-s node containing a given cell (s <= depth).
  NodeId cell_ancestor(uint64_t cell_flat, int s) const;
  /// Deepest node containing both cells.
  NodeId lca_cells(uint64_t a, uint64_t b) const;
  bool node_contains_cell(NodeId n, uint64_t cell_flat) const;
  /// Number of cells under a node.
  uint64_t cells_per_node(int s) const { return uint64_t(1) << (uint64_t(depth_ - s) * dim()); }

  template <class F>
  void for_each_cell(NodeId n, F&& fn) const;  // fn(uint64_t cell_flat)

  DyadicCube cube_of(NodeId n) const;
  /// Inverse of cube_of; throws when the cube is not a grid cube.
  NodeId node_of(const DyadicCube& q) const;

  void unflatten(int s, uint64_t flat, std::array<long long, kMaxDim>& r) const;
  uint64_t flatten(int s, const std::array<long long, kMaxDim>& r) const;

  bool operator==(const Grid& o) const {
    return root_ == o.root_ && depth_ == o.depth_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  DyadicCube root_;
  int depth_;
  double root_measure_;
  std::vector<uint64_t> node_offset_;  // size depth+2
};

/// One double per node, indexed [level][flat].
using LevelArrays = std::vector<std::vector<double>>;

LevelArrays make_level_arrays(const Grid& g, double init = 0.0);

/// Bottom-up pass: raw sums of cell values over every node.
LevelArrays subtree_sums(const Grid& g, const std::vector<double>& cell_values);

/// Top-down pass: out[cell] = sum of addends[node] over all nodes on the
/// root-to-cell path. `addends` is consumed as scratch.
std::vector<double> push_down_add(const Grid& g, LevelArrays addends);

template <class F>
void Grid::for_each_cell(NodeId n, F&& fn) const {
  const int d = dim();
  const int down = depth_ - n.level;
  std::array<long long, kMaxDim> r{};
  unflatten(n.level, n.flat, r);
  std::array<long long, kMaxDim> lo{}, c{};
  for (int i = 0; i < d; ++i) lo[i] = r[i] << down;
  const uint64_t per_axis = uint64_t(1) << down;
  c = lo;
  // odometer over the cell block
  while (true) {
    fn(flatten(depth_, c));
    int axis = d - 1;
    while (axis >= 0) {
      if (++c[axis] < lo[axis] + (long long)per_axis) break;
      c[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace sparsedom

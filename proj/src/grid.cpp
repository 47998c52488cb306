#include "sparsedom/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsedom {

Grid::Grid(DyadicCube root, int depth) : root_(std::move(root)), depth_(depth) {
  if (depth < 0) throw std::invalid_argument("Grid: negative depth");
  if (uint64_t(depth) * root_.d > 24)
    throw std::invalid_argument("Grid: cell count exceeds 2^24");
  if (std::abs(root_.level) * root_.d > 900)
    throw std::invalid_argument("Grid: root level out of double range");
  root_measure_ = std::ldexp(1.0, -root_.level * root_.d);
  node_offset_.assign(depth_ + 2, 0);
  for (int s = 0; s <= depth_; ++s) node_offset_[s + 1] = node_offset_[s] + level_size(s);
}

double Grid::node_measure(int s) const {
  return std::ldexp(root_measure_, -s * dim());
}

void Grid::unflatten(int s, uint64_t flat, std::array<long long, kMaxDim>& r) const {
  const int d = dim();
  for (int i = d - 1; i >= 0; --i) {
    r[i] = (long long)(flat & ((uint64_t(1) << s) - 1));
    flat >>= s;
  }
}

uint64_t Grid::flatten(int s, const std::array<long long, kMaxDim>& r) const {
  const int d = dim();
  uint64_t flat = 0;
  for (int i = 0; i < d; ++i) flat = (flat << s) | uint64_t(r[i]);
  return flat;
}

uint64_t Grid::child_flat(int level, uint64_t flat, unsigned offset) const {
  const int d = dim();
  std::array<long long, kMaxDim> r{};
  unflatten(level, flat, r);
  for (int i = 0; i < d; ++i) r[i] = 2 * r[i] + ((offset >> (d - 1 - i)) & 1u);
  return flatten(level + 1, r);
}

uint64_t Grid::parent_flat(int level, uint64_t flat) const {
  const int d = dim();
  std::array<long long, kMaxDim> r{};
  unflatten(level, flat, r);
  for (int i = 0; i < d; ++i) r[i] >>= 1;
  return flatten(level - 1, r);
}

NodeId Grid::parent(NodeId n) const {
  if (n.level <= 0) throw std::invalid_argument("Grid::parent: node is the root");
  return NodeId{n.level - 1, parent_flat(n.level, n.flat)};
}

NodeId Grid::ancestor(NodeId n, int k) const {
  if (k < 0) throw std::invalid_argument("Grid::ancestor: negative k");
  if (k > n.level) throw std::invalid_argument("Grid::ancestor: k exceeds root level");
  NodeId a = n;
  for (int i = 0; i < k; ++i) a = parent(a);
  return a;
}

NodeId Grid::cell_ancestor(uint64_t cell_flat, int s) const {
  const int d = dim();
  std::array<long long, kMaxDim> c{};
  unflatten(depth_, cell_flat, c);
  for (int i = 0; i < d; ++i) c[i] >>= (depth_ - s);
  return NodeId{s, flatten(s, c)};
}

NodeId Grid::lca_cells(uint64_t a, uint64_t b) const {
  const int d = dim();
  std::array<long long, kMaxDim> ca{}, cb{};
  unflatten(depth_, a, ca);
  unflatten(depth_, b, cb);
  int s = depth_;
  for (int i = 0; i < d; ++i) {
    unsigned long long x = (unsigned long long)(ca[i] ^ cb[i]);
    int common = depth_ - (x == 0 ? 0 : 64 - __builtin_clzll(x));
    if (common < s) s = common;
  }
  return cell_ancestor(a, s);
}

bool Grid::node_contains_cell(NodeId n, uint64_t cell_flat) const {
  return cell_ancestor(cell_flat, n.level) == n;
}

DyadicCube Grid::cube_of(NodeId n) const {
  if (n.level < 0 || n.level > depth_ || n.flat >= level_size(n.level))
    throw std::invalid_argument("Grid::cube_of: node out of range");
  const int d = dim();
  std::array<long long, kMaxDim> r{};
  unflatten(n.level, n.flat, r);
  DyadicCube q = root_;
  for (int step = n.level - 1; step >= 0; --step) {
    unsigned offset = 0;
    for (int i = 0; i < d; ++i) offset = (offset << 1) | ((r[i] >> step) & 1);
    q = q.child(offset);
  }
  return q;
}

NodeId Grid::node_of(const DyadicCube& q) const {
  if (q.d != root_.d || q.shift != root_.shift)
    throw std::invalid_argument("Grid::node_of: cube lies in a different grid");
  int s = q.level - root_.level;
  if (s < 0 || s > depth_)
    throw std::invalid_argument("Grid::node_of: cube level outside root/depth window");
  const int d = dim();
  std::array<long long, kMaxDim> r{};
  DyadicCube cur = q;
  for (int step = 0; step < s; ++step) {
    DyadicCube par = cur.parent();
    // recover the child offset bit per axis
    const int sgn = (par.level % 2 == 0) ? 1 : -1;
    for (int i = 0; i < d; ++i) {
      long long delta = cur.index[i] - 2 * par.index[i] - (long long)sgn * q.shift[i];
      r[i] |= (delta & 1) << step;
    }
    cur = par;
  }
  if (cur != root_) throw std::invalid_argument("Grid::node_of: cube is outside the root");
  return NodeId{s, flatten(s, r)};
}

LevelArrays make_level_arrays(const Grid& g, double init) {
  LevelArrays a(g.depth() + 1);
  for (int s = 0; s <= g.depth(); ++s) a[s].assign(g.level_size(s), init);
  return a;
}

LevelArrays subtree_sums(const Grid& g, const std::vector<double>& cell_values) {
  LevelArrays sums(g.depth() + 1);
  sums[g.depth()] = cell_values;
  const unsigned nkids = 1u << g.dim();
  for (int s = g.depth() - 1; s >= 0; --s) {
    sums[s].assign(g.level_size(s), 0.0);
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double acc = 0.0;
      for (unsigned off = 0; off < nkids; ++off) acc += sums[s + 1][g.child_flat(s, j, off)];
      sums[s][j] = acc;
    }
  }
  return sums;
}

std::vector<double> push_down_add(const Grid& g, LevelArrays addends) {
  const unsigned nkids = 1u << g.dim();
  for (int s = 0; s < g.depth(); ++s) {
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double v = addends[s][j];
      if (v == 0.0) continue;
      for (unsigned off = 0; off < nkids; ++off) addends[s + 1][g.child_flat(s, j, off)] += v;
    }
  }
  return std::move(addends[g.depth()]);
}

}  // namespace sparsedom

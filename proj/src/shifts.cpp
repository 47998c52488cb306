#include "sparsedom/shifts.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsedom {

ShiftCoefficients::ShiftCoefficients(Grid grid)
    : grid_(std::move(grid)), lam_(make_level_arrays(grid_)) {}

void ShiftCoefficients::set(NodeId n, double lambda) {
  if (lambda < 0) throw std::invalid_argument("ShiftCoefficients: negative coefficient");
  if (n.level < 0 || n.level > grid_.depth() || n.flat >= grid_.level_size(n.level))
    throw std::invalid_argument("ShiftCoefficients: node out of range");
  lam_[n.level][n.flat] = lambda;
}

std::vector<std::pair<NodeId, double>> ShiftCoefficients::entries() const {
  std::vector<std::pair<NodeId, double>> out;
  for (int s = 0; s <= grid_.depth(); ++s)
    for (uint64_t j = 0; j < grid_.level_size(s); ++j)
      if (lam_[s][j] != 0.0) out.push_back({NodeId{s, j}, lam_[s][j]});
  return out;
}

size_t ShiftCoefficients::entry_count() const {
  size_t n = 0;
  for (const auto& lvl : lam_)
    for (double v : lvl)
      if (v != 0.0) ++n;
  return n;
}

namespace {

void check_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("shift: operands on different grids");
}

// Averages of f on every node from the bottom-up sums.
LevelArrays node_averages(const Grid& g, const StepFunction& f) {
  LevelArrays sums = subtree_sums(g, f.values());
  for (int s = 0; s <= g.depth(); ++s) {
    const double inv = 1.0 / double(g.cells_per_node(s));
    for (double& v : sums[s]) v *= inv;
  }
  return sums;
}

}  // namespace

StepFunction apply_shift(const ShiftCoefficients& c, const StepFunction& f) {
  check_grid(c.grid(), f.grid());
  const Grid& g = f.grid();
  LevelArrays avg = node_averages(g, f);
  LevelArrays add = make_level_arrays(g);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double lam = c.at(NodeId{s, j});
      if (lam != 0.0) add[s][j] = lam * avg[s][j];
    }
  return StepFunction(g, push_down_add(g, std::move(add)));
}

StepFunction apply_shift_naive(const ShiftCoefficients& c, const StepFunction& f) {
  check_grid(c.grid(), f.grid());
  const Grid& g = f.grid();
  std::vector<double> out(g.cell_count(), 0.0);
  for (const auto& [node, lam] : c.entries()) {
    double sum = 0.0;
    uint64_t count = 0;
    for (uint64_t cell = 0; cell < g.cell_count(); ++cell) {
      if (g.cell_ancestor(cell, node.level) == node) {
        sum += f.value(cell);
        ++count;
      }
    }
    double contrib = lam * sum / double(count);
    for (uint64_t cell = 0; cell < g.cell_count(); ++cell)
      if (g.cell_ancestor(cell, node.level) == node) out[cell] += contrib;
  }
  return StepFunction(g, std::move(out));
}

StepFunction apply_subshift(const ShiftCoefficients& c, NodeId q, const StepFunction& f) {
  check_grid(c.grid(), f.grid());
  const Grid& g = f.grid();
  LevelArrays avg = node_averages(g, f);
  // top-down only within the subtree of q
  std::vector<double> out(g.cell_count(), 0.0);
  struct Item {
    NodeId n;
    double acc;
  };
  std::vector<Item> stack{{q, 0.0}};
  const unsigned nkids = 1u << g.dim();
  while (!stack.empty()) {
    auto [n, acc] = stack.back();
    stack.pop_back();
    acc += c.at(n) * avg[n.level][n.flat];
    if (g.is_cell(n)) {
      out[n.flat] = acc;
      continue;
    }
    for (unsigned off = 0; off < nkids; ++off)
      stack.push_back({NodeId{n.level + 1, g.child_flat(n.level, n.flat, off)}, acc});
  }
  return StepFunction(g, std::move(out));
}

StepFunction apply_subshift_naive(const ShiftCoefficients& c, NodeId q, const StepFunction& f) {
  // zero out coefficients outside the subtree of q, then run the naive shift
  ShiftCoefficients restricted(c.grid());
  const Grid& g = c.grid();
  for (const auto& [node, lam] : c.entries()) {
    if (node.level >= q.level && g.ancestor(node, node.level - q.level) == q)
      restricted.set(node, lam);
  }
  return apply_shift_naive(restricted, f);
}

SkPlusSpec::SkPlusSpec(SparseFamily fam, int k) : family(std::move(fam)), complexity(k) {
  if (k < 0) throw std::invalid_argument("SkPlusSpec: negative complexity");
  for (NodeId n : family.cubes)
    if (n.level < k)
      throw std::invalid_argument("SkPlusSpec: ancestor K^(k) missing for a family cube");
}

StepFunction apply_skplus(const SkPlusSpec& s, const StepFunction& f) {
  check_grid(s.family.grid, f.grid());
  const Grid& g = f.grid();
  LevelArrays avg = node_averages(g, f);
  LevelArrays add = make_level_arrays(g);
  for (NodeId k : s.family.cubes) {
    NodeId anc = g.ancestor(k, s.complexity);
    add[k.level][k.flat] += avg[anc.level][anc.flat];
  }
  return StepFunction(g, push_down_add(g, std::move(add)));
}

StepFunction apply_skplus_adjoint(const SkPlusSpec& s, const StepFunction& f) {
  check_grid(s.family.grid, f.grid());
  const Grid& g = f.grid();
  LevelArrays sums = subtree_sums(g, f.values());
  LevelArrays add = make_level_arrays(g);
  const double cell_m = g.cell_measure();
  for (NodeId k : s.family.cubes) {
    NodeId anc = g.ancestor(k, s.complexity);
    double integral = sums[k.level][k.flat] * cell_m;
    add[anc.level][anc.flat] += integral / g.node_measure(anc.level);
  }
  return StepFunction(g, push_down_add(g, std::move(add)));
}

StepFunction apply_skplus_naive(const SkPlusSpec& s, const StepFunction& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.cell_count(), 0.0);
  for (NodeId k : s.family.cubes) {
    NodeId anc = g.ancestor(k, s.complexity);
    double a = average(f, anc);
    g.for_each_cell(k, [&](uint64_t c) { out[c] += a; });
  }
  return StepFunction(g, std::move(out));
}

StepFunction apply_skplus_adjoint_naive(const SkPlusSpec& s, const StepFunction& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.cell_count(), 0.0);
  for (NodeId k : s.family.cubes) {
    NodeId anc = g.ancestor(k, s.complexity);
    double contrib = integral_on(f, k) / g.node_measure(anc.level);
    g.for_each_cell(anc, [&](uint64_t c) { out[c] += contrib; });
  }
  return StepFunction(g, std::move(out));
}

double pairing_l2(const StepFunction& a, const StepFunction& b) {
  check_grid(a.grid(), b.grid());
  double acc = 0.0;
  for (uint64_t c = 0; c < a.grid().cell_count(); ++c) acc += a.value(c) * b.value(c);
  return acc * a.grid().cell_measure();
}

ExtremalPair extremal_family(int k, int depth) {
  if (k < 0) throw std::invalid_argument("extremal_family: negative complexity");
  if (depth < 2 * k)
    throw std::invalid_argument("extremal_family: depth must be at least 2k");
  Grid g(DyadicCube::unit(1), depth);

  // Family: for every level-k interval L, the leftmost descendant chain
  // L_(0) ... L_(k); L_(j) has level k+j and index 2^j * index(L).
  std::vector<NodeId> cubes;
  for (uint64_t m = 0; m < (uint64_t(1) << k); ++m)
    for (int j = 0; j <= k; ++j) cubes.push_back(NodeId{k + j, m << j});
  SparseFamily fam = family_from_cubes(g, std::move(cubes));

  // f = 2^k sum_L 1_{L_(k)}: value 2^k on the leftmost level-2k descendant
  // of each L, zero elsewhere; total mass one.
  std::vector<double> values(g.cell_count(), 0.0);
  const double amp = std::ldexp(1.0, k);
  for (uint64_t m = 0; m < (uint64_t(1) << k); ++m) {
    NodeId lk{2 * k, m << k};
    g.for_each_cell(lk, [&](uint64_t c) { values[c] = amp; });
  }
  return ExtremalPair{SkPlusSpec(std::move(fam), k), StepFunction(g, std::move(values))};
}

double weak11_ratio(const SkPlusSpec& s, const StepFunction& f, bool adjoint) {
  double l1 = l1_norm(f);
  if (l1 == 0.0) throw std::invalid_argument("weak11_ratio: zero input");
  StepFunction out = adjoint ? apply_skplus_adjoint(s, f) : apply_skplus(s, f);
  return weak_l1_norm(out) / l1;
}

double weak11_ratio(const ShiftCoefficients& c, const StepFunction& f) {
  double l1 = l1_norm(f);
  if (l1 == 0.0) throw std::invalid_argument("weak11_ratio: zero input");
  return weak_l1_norm(apply_shift(c, f)) / l1;
}

OscAdjoint oscillation_of_adjoint(const SkPlusSpec& s, const StepFunction& g, NodeId L,
                                  double lambda) {
  StepFunction adj = apply_skplus_adjoint(s, g);
  OscAdjoint out;
  out.lhs = oscillation(adj, L, lambda);
  out.rhs = (1.0 + s.complexity) * average(g, L);
  return out;
}

}  // namespace sparsedom

#include "sparsedom/sampling.hpp"

#include <cmath>

namespace sparsedom {

StepFunction random_step_function(const Grid& g, Rng& rng) {
  const uint64_t n = g.cell_count();
  std::vector<double> v(n);
  switch (rng.below(3)) {
    case 0:
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      break;
    case 1: {
      // mostly flat with a few large spikes
      double base = rng.uniform(-0.5, 0.5);
      for (double& x : v) x = base;
      uint64_t spikes = 1 + rng.below(std::max<uint64_t>(1, n / 8));
      for (uint64_t s = 0; s < spikes; ++s)
        v[rng.below(n)] = rng.uniform(-8.0, 8.0);
      break;
    }
    default:
      for (double& x : v) x = std::exp(rng.uniform(-2.0, 2.0));
      break;
  }
  return StepFunction(g, std::move(v));
}

StepFunction random_nonneg_function(const Grid& g, Rng& rng) {
  StepFunction f = random_step_function(g, rng);
  std::vector<double> v = f.values();
  for (double& x : v) x = std::fabs(x);
  return StepFunction(g, std::move(v));
}

Weight random_weight(const Grid& g, Rng& rng, double level_spread) {
  std::vector<double> v(g.cell_count());
  for (double& x : v) x = std::exp(rng.uniform(-level_spread, level_spread));
  return Weight(StepFunction(g, std::move(v)));
}

SparseFamily random_sparse_family(const Grid& g, Rng& rng, double q, int min_level) {
  std::vector<NodeId> cubes;
  struct Frame {
    NodeId node;
    int nearest;  // index into `cubes` of the nearest selected ancestor, -1 above
  };
  // Remaining cell budget below each selected cube before 1/2-sparseness
  // would break.
  std::vector<uint64_t> budget;
  std::vector<int> parent_sel;
  std::vector<Frame> stack{{g.root_node(), -1}};
  const unsigned nkids = 1u << g.dim();
  // DFS, children in ascending index order for determinism
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    int nearest = fr.nearest;
    if (fr.node.level >= min_level && rng.bernoulli(q)) {
      uint64_t cells = g.cells_per_node(fr.node.level);
      bool ok = true;
      // charging the nearest selected ancestor keeps every ancestor's
      // maximal-descendant cover at half measure or less
      if (nearest >= 0 && budget[nearest] < cells) ok = false;
      if (ok) {
        if (nearest >= 0) budget[nearest] -= cells;
        cubes.push_back(fr.node);
        budget.push_back(cells / 2);
        parent_sel.push_back(nearest);
        nearest = int(cubes.size()) - 1;
      }
    }
    if (!g.is_cell(fr.node)) {
      for (unsigned off = nkids; off-- > 0;)
        stack.push_back(
            {NodeId{fr.node.level + 1, g.child_flat(fr.node.level, fr.node.flat, off)},
             nearest});
    }
  }
  return family_from_cubes(g, std::move(cubes));
}

ShiftCoefficients random_shift_coefficients(const Grid& g, Rng& rng, double density) {
  ShiftCoefficients c(g);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j)
      if (rng.bernoulli(density)) c.set(NodeId{s, j}, std::exp(rng.uniform(-1.0, 1.0)));
  return c;
}

RealCube random_rational_cube(int d, Rng& rng) {
  const long long den = 1 + (long long)rng.below(4096);
  std::vector<Rat> corner(d);
  for (int i = 0; i < d; ++i)
    corner[i] = Rat((long long)rng.below(8 * den + 1) - 4 * den, den);
  long long num = 1 + (long long)rng.below(4 * den);  // side in (0, 4]
  Rat side(num, den);
  if (side < Rat(1, 64)) side = side + Rat(1, 64);
  return RealCube(std::move(corner), side);
}

}  // namespace sparsedom

#include "sparsedom/lerner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace sparsedom {

namespace {

// Sorted cell values per node, one contiguous segment per node and level.
// Gives O(1) medians during the stopping scans.
struct SortedTree {
  const Grid* g;
  std::vector<std::vector<double>> by_level;  // [s]: concatenated sorted segments

  explicit SortedTree(const StepFunction& f) : g(&f.grid()) {
    by_level.resize(g->depth() + 1);
    for (int s = 0; s <= g->depth(); ++s) {
      auto& lvl = by_level[s];
      lvl.resize(g->cell_count());
      const uint64_t per = g->cells_per_node(s);
      for (uint64_t j = 0; j < g->level_size(s); ++j) {
        uint64_t pos = j * per;
        g->for_each_cell(NodeId{s, j}, [&](uint64_t c) { lvl[pos++] = f.value(c); });
        std::sort(lvl.begin() + j * per, lvl.begin() + (j + 1) * per);
      }
    }
  }

  const double* segment(NodeId n) const {
    return by_level[n.level].data() + n.flat * g->cells_per_node(n.level);
  }

  double median_at(NodeId n) const {
    const uint64_t m = g->cells_per_node(n.level);
    return segment(n)[(m + 1) / 2 - 1];
  }
};

// (1_q(f - m))*(lambda |q|) over the cells of q.
double local_threshold(const StepFunction& f, NodeId q, double m, double lambda) {
  const Grid& g = f.grid();
  std::vector<double> dev;
  dev.reserve(g.cells_per_node(q.level));
  g.for_each_cell(q, [&](uint64_t c) { dev.push_back(std::fabs(f.value(c) - m)); });
  uint64_t k = detail::discard_count(lambda * g.node_measure(q.level), g.cell_measure(),
                                     dev.size());
  if (k >= dev.size()) return 0.0;
  std::nth_element(dev.begin(), dev.begin() + k, dev.end(), std::greater<double>());
  return dev[k];
}

// Oscillation from an ascending sorted segment: best window of length n-k.
double oscillation_sorted(const double* a, uint64_t n, uint64_t k) {
  if (k >= n) return 0.0;
  const uint64_t w = n - k;
  double best = a[w - 1] - a[0];
  for (uint64_t i = 1; i + w <= n; ++i) best = std::min(best, a[i + w - 1] - a[i]);
  return best / 2.0;
}

std::vector<NodeId> scan_stopping(const StepFunction& f, const SortedTree& tree, NodeId q,
                                  double base_median, double threshold) {
  const Grid& g = f.grid();
  std::vector<NodeId> selected;
  std::vector<NodeId> stack;
  const unsigned nkids = 1u << g.dim();
  auto push_children = [&](NodeId n) {
    for (unsigned off = 0; off < nkids; ++off)
      stack.push_back(NodeId{n.level + 1, g.child_flat(n.level, n.flat, off)});
  };
  if (g.is_cell(q)) return selected;
  push_children(q);
  while (!stack.empty()) {
    NodeId s = stack.back();
    stack.pop_back();
    double gap;
    if (g.is_cell(s)) {
      // children of a cell carry the cell's own value
      gap = std::fabs(f.value(s.flat) - base_median);
    } else {
      gap = 0.0;
      for (unsigned off = 0; off < nkids; ++off) {
        NodeId c{s.level + 1, g.child_flat(s.level, s.flat, off)};
        gap = std::max(gap, std::fabs(tree.median_at(c) - base_median));
      }
    }
    if (gap > threshold) {
      selected.push_back(s);
    } else if (!g.is_cell(s)) {
      push_children(s);
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

void validate_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lerner: lambda must lie in (0,1)");
}

}  // namespace

std::vector<NodeId> stopping_children(const StepFunction& f, NodeId q, double lambda) {
  validate_lambda(lambda);
  SortedTree tree(f);
  double m = median(f, q);
  double thr = local_threshold(f, q, m, lambda);
  return scan_stopping(f, tree, q, m, thr);
}

LernerDecomposition decompose(const StepFunction& f, NodeId q0, double lambda) {
  validate_lambda(lambda);
  if (q0 != f.grid().root_node())
    throw std::invalid_argument("decompose: base must be the root of f");

  SortedTree tree(f);
  LernerDecomposition dec;
  dec.lambda = lambda;

  struct Pending {
    NodeId base;
    int gen;
  };
  std::deque<Pending> queue{{q0, 0}};
  std::vector<NodeId> members;
  while (!queue.empty()) {
    auto [base, gen] = queue.front();
    queue.pop_front();
    double m = tree.median_at(base);
    if (gen == 0) dec.base_median = m;
    double thr = local_threshold(f, base, m, lambda);
    members.push_back(base);
    dec.coefficients.push_back(oscillation_sorted(
        tree.segment(base), f.grid().cells_per_node(base.level),
        detail::discard_count(lambda * f.grid().node_measure(base.level),
                              f.grid().cell_measure(), f.grid().cells_per_node(base.level))));
    dec.generation.push_back(gen);
    for (NodeId s : scan_stopping(f, tree, base, m, thr)) queue.push_back({s, gen + 1});
  }

  // family_from_cubes sorts canonically; keep coefficients aligned.
  std::vector<size_t> order(members.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return members[a] < members[b]; });
  std::vector<NodeId> cubes(members.size());
  std::vector<double> coef(members.size());
  std::vector<int> gens(members.size());
  for (size_t i = 0; i < order.size(); ++i) {
    cubes[i] = members[order[i]];
    coef[i] = dec.coefficients[order[i]];
    gens[i] = dec.generation[order[i]];
  }
  dec.family = family_from_cubes(f.grid(), cubes);
  dec.coefficients = std::move(coef);
  dec.generation = std::move(gens);
  return dec;
}

LernerDecomposition decompose(const StepFunction& f, double lambda) {
  return decompose(f, f.grid().root_node(), lambda);
}

LernerDecomposition decompose(const StepFunction& f) {
  return decompose(f, lerner_lambda(f.grid().dim()));
}

DominationReport verify_domination(const StepFunction& f, const LernerDecomposition& dec) {
  const Grid& g = f.grid();
  LevelArrays add = make_level_arrays(g);
  for (size_t i = 0; i < dec.family.cubes.size(); ++i) {
    NodeId n = dec.family.cubes[i];
    add[n.level][n.flat] += 2.0 * dec.coefficients[i];
  }
  std::vector<double> bound = push_down_add(g, std::move(add));

  DominationReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (uint64_t c = 0; c < g.cell_count(); ++c)
    rep.min_slack = std::min(rep.min_slack, bound[c] - std::fabs(f.value(c) - dec.base_median));

  FamilyCheck fc = check_family(dec.family);
  rep.sparseness_ok = fc.disjoint && fc.min_ratio >= 0.5;
  return rep;
}

std::vector<double> generation_measures(const LernerDecomposition& dec) {
  std::vector<double> out;
  for (size_t i = 0; i < dec.family.cubes.size(); ++i) {
    int gen = dec.generation[i];
    if (int(out.size()) <= gen) out.resize(gen + 1, 0.0);
    out[gen] += dec.family.grid.node_measure(dec.family.cubes[i].level);
  }
  return out;
}

}  // namespace sparsedom

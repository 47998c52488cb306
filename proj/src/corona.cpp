#include "sparsedom/corona.hpp"

#include <deque>
#include <stdexcept>

namespace sparsedom {

int CoronaForest::member_at(NodeId n) const {
  int m = node_member[grid.node_ord(n)];
  return members[m].node == n ? m : -1;
}

double CoronaForest::e_mass(const Weight& sigma, int member) const {
  double acc = 0.0;
  for (uint32_t c : e_cells[member]) acc += sigma.value(c);
  return acc * grid.cell_measure();
}

CoronaForest principal_cubes(const StepFunction& f, const Weight& sigma) {
  if (f.grid() != sigma.grid())
    throw std::invalid_argument("principal_cubes: f and sigma on different grids");
  for (double v : f.values())
    if (v < 0) throw std::invalid_argument("principal_cubes: f must be nonnegative");
  const Grid& g = f.grid();

  // sigma-averages of f on every node
  std::vector<double> fs(g.cell_count());
  for (uint64_t c = 0; c < g.cell_count(); ++c) fs[c] = f.value(c) * sigma.value(c);
  LevelArrays num = subtree_sums(g, fs);
  LevelArrays den = subtree_sums(g, sigma.fn().values());
  auto avg = [&](NodeId n) { return num[n.level][n.flat] / den[n.level][n.flat]; };

  CoronaForest forest;
  forest.grid = g;
  const unsigned nkids = 1u << g.dim();

  std::deque<int> pending;
  forest.members.push_back({g.root_node(), -1, 0, avg(g.root_node())});
  forest.children.emplace_back();
  pending.push_back(0);

  while (!pending.empty()) {
    int base = pending.front();
    pending.pop_front();
    const NodeId bn = forest.members[base].node;
    const double threshold = 2.0 * forest.members[base].avg;
    if (g.is_cell(bn)) continue;
    // maximal proper subcubes with sigma-average strictly above threshold
    std::vector<NodeId> stack;
    for (unsigned off = 0; off < nkids; ++off)
      stack.push_back(NodeId{bn.level + 1, g.child_flat(bn.level, bn.flat, off)});
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      if (avg(n) > threshold) {
        int id = int(forest.members.size());
        forest.members.push_back({n, base, forest.members[base].generation + 1, avg(n)});
        forest.children.emplace_back();
        forest.children[base].push_back(id);
        pending.push_back(id);
        continue;
      }
      if (!g.is_cell(n))
        for (unsigned off = 0; off < nkids; ++off)
          stack.push_back(NodeId{n.level + 1, g.child_flat(n.level, n.flat, off)});
    }
  }

  // inclusive stopping parent per node, top-down
  forest.node_member.assign(g.node_count(), 0);
  std::vector<int> is_member(g.node_count(), -1);
  for (size_t i = 0; i < forest.members.size(); ++i)
    is_member[g.node_ord(forest.members[i].node)] = int(i);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId n{s, j};
      uint64_t ord = g.node_ord(n);
      if (is_member[ord] >= 0)
        forest.node_member[ord] = is_member[ord];
      else if (s == 0)
        forest.node_member[ord] = 0;
      else
        forest.node_member[ord] = forest.node_member[g.node_ord(g.parent(n))];
    }

  // E(F) = F minus its stopping children
  forest.e_cells.resize(forest.members.size());
  for (size_t i = 0; i < forest.members.size(); ++i) {
    std::vector<uint8_t> excluded(g.cell_count(), 0);
    for (int ch : forest.children[i])
      g.for_each_cell(forest.members[ch].node, [&](uint64_t c) { excluded[c] = 1; });
    g.for_each_cell(forest.members[i].node, [&](uint64_t c) {
      if (!excluded[c]) forest.e_cells[i].push_back(uint32_t(c));
    });
  }
  return forest;
}

int stopping_parent_index(const CoronaForest& forest, NodeId q) {
  return forest.node_member[forest.grid.node_ord(q)];
}

NodeId stopping_parent(const CoronaForest& forest, NodeId q) {
  return forest.members[stopping_parent_index(forest, q)].node;
}

int strict_parent_index(const CoronaForest& forest, NodeId q) {
  int m = forest.member_at(q);
  if (m == 0) throw std::invalid_argument("strict_parent_index: the root has no strict parent");
  if (m > 0) return forest.members[m].parent;
  return stopping_parent_index(forest, q);
}

std::vector<int> starred_children(const CoronaForest& forestF, const CoronaForest& forestG,
                                  int member) {
  std::vector<int> out;
  for (int ch : forestF.children[member]) {
    NodeId fp = forestF.members[ch].node;
    NodeId g_parent = forestG.members[strict_parent_index(forestG, fp)].node;
    if (stopping_parent_index(forestF, g_parent) == member) out.push_back(ch);
  }
  return out;
}

StepFunction corona_projection(const StepFunction& g, const Weight& omega, int member,
                               const CoronaForest& forestF, const CoronaForest& forestG) {
  if (member < 0 || member >= int(forestF.members.size()))
    throw std::invalid_argument("corona_projection: no such member");
  const Grid& grid = g.grid();
  if (grid != omega.grid() || grid != forestF.grid || grid != forestG.grid)
    throw std::invalid_argument("corona_projection: grid mismatch");

  std::vector<double> out(grid.cell_count(), 0.0);
  for (uint32_t c : forestF.e_cells[member]) out[c] = g.value(c);
  for (int ch : starred_children(forestF, forestG, member)) {
    NodeId fp = forestF.members[ch].node;
    double num = 0.0, den = 0.0;
    grid.for_each_cell(fp, [&](uint64_t c) {
      num += g.value(c) * omega.value(c);
      den += omega.value(c);
    });
    const double wavg = num / den;
    grid.for_each_cell(fp, [&](uint64_t c) { out[c] = wavg; });
  }
  return StepFunction(grid, std::move(out));
}

}  // namespace sparsedom

#include "sparsedom/sparse_family.hpp"

#include <algorithm>

namespace sparsedom {

bool SparseFamily::contains(NodeId n) const {
  return std::binary_search(cubes.begin(), cubes.end(), n);
}

SparseFamily family_from_cubes(const Grid& g, std::vector<NodeId> cubes) {
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());

  // member flag per node ordinal
  std::vector<uint8_t> member(g.node_count(), 0);
  for (NodeId n : cubes) member[g.node_ord(n)] = 1;

  SparseFamily fam{g, std::move(cubes), {}, 1.0};
  fam.major.resize(fam.cubes.size());

  double worst = 1.0;
  for (size_t i = 0; i < fam.cubes.size(); ++i) {
    NodeId L = fam.cubes[i];
    std::vector<uint32_t> cells;
    // DFS below L; a subtree under a member is excluded wholesale.
    std::vector<NodeId> stack{L};
    while (!stack.empty()) {
      NodeId cur = stack.back();
      stack.pop_back();
      if (cur != L && member[g.node_ord(cur)]) continue;  // maximal member below L
      if (g.is_cell(cur)) {
        cells.push_back(uint32_t(cur.flat));
        continue;
      }
      for (unsigned off = 0; off < (1u << g.dim()); ++off)
        stack.push_back(NodeId{cur.level + 1, g.child_flat(cur.level, cur.flat, off)});
    }
    std::sort(cells.begin(), cells.end());
    double ratio = double(cells.size()) / double(g.cells_per_node(L.level));
    worst = std::min(worst, ratio);
    fam.major[i] = std::move(cells);
  }
  fam.gamma = fam.cubes.empty() ? 1.0 : worst;
  return fam;
}

FamilyCheck check_family(const SparseFamily& fam) {
  FamilyCheck out;
  std::vector<uint8_t> seen(fam.grid.cell_count(), 0);
  for (size_t i = 0; i < fam.cubes.size(); ++i) {
    for (uint32_t c : fam.major[i]) {
      if (seen[c]) out.disjoint = false;
      seen[c] = 1;
    }
    double ratio =
        double(fam.major[i].size()) / double(fam.grid.cells_per_node(fam.cubes[i].level));
    out.min_ratio = std::min(out.min_ratio, ratio);
  }
  return out;
}

}  // namespace sparsedom

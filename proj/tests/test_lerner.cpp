#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsedom/lerner.hpp"
#include "sparsedom/rng.hpp"
#include "sparsedom/sampling.hpp"

using namespace sparsedom;

namespace {

Grid unit_grid(int depth, int d = 1) { return Grid(DyadicCube::unit(d), depth); }

StepFunction half_indicator(int depth) {
  Grid g = unit_grid(depth);
  std::vector<double> v(g.cell_count(), 0.0);
  for (uint64_t c = 0; c < g.cell_count() / 2; ++c) v[c] = 1.0;
  return StepFunction(g, std::move(v));
}

// Exhaustive reimplementation of the stopping scan, straight from the
// selection rule: enumerate every proper subcube of q in level order,
// evaluate the criterion via the public median, keep the maximal ones.
std::vector<NodeId> stopping_oracle(const StepFunction& f, NodeId q, double lambda) {
  const Grid& g = f.grid();
  double m = median(f, q);
  std::vector<double> dev;
  g.for_each_cell(q, [&](uint64_t c) { dev.push_back(std::fabs(f.value(c) - m)); });
  std::sort(dev.begin(), dev.end(), std::greater<double>());
  uint64_t kstar = detail::discard_count(lambda * g.node_measure(q.level),
                                         g.cell_measure(), dev.size());
  double alpha = kstar >= dev.size() ? 0.0 : dev[kstar];

  auto inside = [&](NodeId a, NodeId b) {  // a strictly inside b
    return a.level > b.level && g.ancestor(a, a.level - b.level) == b;
  };
  auto satisfies = [&](NodeId s) {
    if (g.is_cell(s)) return std::fabs(f.value(s.flat) - m) > alpha;
    double gap = 0.0;
    for (unsigned off = 0; off < (1u << g.dim()); ++off) {
      NodeId c{s.level + 1, g.child_flat(s.level, s.flat, off)};
      gap = std::max(gap, std::fabs(median(f, c) - m));
    }
    return gap > alpha;
  };

  std::vector<NodeId> selected;
  for (int s = q.level + 1; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId n{s, j};
      if (!inside(n, q) || !satisfies(n)) continue;
      bool shadowed = false;
      for (NodeId chosen : selected)
        if (inside(n, chosen)) shadowed = true;
      if (!shadowed) selected.push_back(n);
    }
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace

TEST_CASE("stopping children: constants never stop") {
  Grid g = unit_grid(5);
  StepFunction c = StepFunction::constant(g, 4.0);
  CHECK(stopping_children(c, g.root_node(), 1.0 / 8).empty());
}

TEST_CASE("stopping children: half indicator at lambda 1/8 stays empty") {
  StepFunction h = half_indicator(5);
  // threshold 1, child median gaps never exceed 1, strict inequality fails
  CHECK(stopping_children(h, h.grid().root_node(), 1.0 / 8).empty());
  CHECK(stopping_oracle(h, h.grid().root_node(), 1.0 / 8).empty());
}

TEST_CASE("stopping children: single tall cell matches the exhaustive scan") {
  Grid g = unit_grid(2);
  StepFunction f(g, {0.0, 0.0, 0.0, 8.0});
  auto got = stopping_children(f, g.root_node(), 1.0 / 8);
  auto want = stopping_oracle(f, g.root_node(), 1.0 / 8);
  CHECK(got == want);
}

TEST_CASE("stopping children match the exhaustive scan on random data") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    int d = trial % 3 == 2 ? 2 : 1;
    Grid g = unit_grid(d == 1 ? 5 : 3, d);
    StepFunction f = random_step_function(g, rng);
    int s = int(rng.below(uint64_t(g.depth())));
    NodeId q{s, rng.below(g.level_size(s))};
    double lambda = lerner_lambda(d);
    auto got = stopping_children(f, q, lambda);
    auto want = stopping_oracle(f, q, lambda);
    CHECK(got == want);
  }
  CHECK_THROWS(stopping_children(half_indicator(3), NodeId{0, 0}, 1.5));
}

TEST_CASE("decompose: constant functions give a single zero-coefficient cube") {
  Grid g = unit_grid(4);
  StepFunction c = StepFunction::constant(g, -3.0);
  LernerDecomposition dec = decompose(c);
  CHECK(dec.family.cubes.size() == 1);
  CHECK(dec.family.cubes[0] == g.root_node());
  CHECK(dec.coefficients[0] == 0.0);
  CHECK(dec.base_median == -3.0);
  DominationReport rep = verify_domination(c, dec);
  CHECK(rep.min_slack == 0.0);
  CHECK(rep.sparseness_ok);
}

TEST_CASE("decompose: half indicator reaches equality") {
  StepFunction h = half_indicator(5);
  LernerDecomposition dec = decompose(h, 1.0 / 8);
  CHECK(dec.family.cubes.size() == 1);
  CHECK(dec.coefficients[0] == 0.5);
  CHECK(dec.base_median == 0.0);
  DominationReport rep = verify_domination(h, dec);
  CHECK(rep.min_slack == 0.0);  // 2 * (1/2) - |1 - 0| on the support
  CHECK(rep.sparseness_ok);
  CHECK_THROWS(decompose(h, NodeId{1, 0}, 1.0 / 8));
}

TEST_CASE("decompose: seeded random functions dominate with half-sparse families") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    int d = trial % 3 == 2 ? 2 : 1;
    Grid g = unit_grid(d == 1 ? 4 + int(rng.below(5)) : 2 + int(rng.below(3)), d);
    StepFunction f = random_step_function(g, rng);
    LernerDecomposition dec = decompose(f);
    DominationReport rep = verify_domination(f, dec);
    CHECK(rep.min_slack >= -1e-12 * f.max_abs());
    CHECK(rep.sparseness_ok);
    std::vector<double> gm = generation_measures(dec);
    for (size_t i = 0; i + 1 < gm.size(); ++i) CHECK(2.0 * gm[i + 1] <= gm[i] * (1 + 1e-12));
    CHECK(int(gm.size()) <= g.depth() + 1);
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sparsedom/corona.hpp"
#include "sparsedom/rng.hpp"
#include "sparsedom/sampling.hpp"
#include "sparsedom/two_weight.hpp"

using namespace sparsedom;

namespace {

Grid unit_grid(int depth, int d = 1) { return Grid(DyadicCube::unit(d), depth); }

Weight constant_weight(const Grid& g, double c) {
  return Weight(StepFunction::constant(g, c));
}

double sigma_average(const StepFunction& f, const Weight& sigma, NodeId q) {
  double num = 0.0, den = 0.0;
  f.grid().for_each_cell(q, [&](uint64_t c) {
    num += f.value(c) * sigma.value(c);
    den += sigma.value(c);
  });
  return num / den;
}

// exhaustive scan for the maximal strictly-doubling subcubes of the root
std::vector<NodeId> doubling_children_oracle(const StepFunction& f, const Weight& sigma) {
  const Grid& g = f.grid();
  double base = sigma_average(f, sigma, g.root_node());
  std::vector<NodeId> out;
  for (int s = 1; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId n{s, j};
      if (!(sigma_average(f, sigma, n) > 2.0 * base)) continue;
      bool shadowed = false;
      for (NodeId m : out)
        if (n.level > m.level && g.ancestor(n, n.level - m.level) == m) shadowed = true;
      if (!shadowed) out.push_back(n);
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("principal cubes of a constant stay at the root") {
  Grid g = unit_grid(4);
  CoronaForest forest = principal_cubes(StepFunction::constant(g, 1.0),
                                        constant_weight(g, 1.0));
  CHECK(forest.members.size() == 1);
  CHECK(forest.members[0].node == g.root_node());
  CHECK(forest.e_cells[0].size() == g.cell_count());
}

TEST_CASE("principal cubes of a quarter indicator") {
  Grid g = unit_grid(4);
  std::vector<double> v(g.cell_count(), 0.0);
  for (uint64_t c = 0; c < g.cell_count() / 4; ++c) v[c] = 1.0;
  StepFunction f(g, std::move(v));
  Weight one = constant_weight(g, 1.0);
  CoronaForest forest = principal_cubes(f, one);
  // averages along [0,1) -> [0,1/2) -> [0,1/4) are 1/4 -> 1/2 -> 1; only the
  // last strictly doubles, and it is maximal
  REQUIRE(forest.children[0].size() == 1);
  NodeId child = forest.members[forest.children[0][0]].node;
  CHECK(child == NodeId{2, 0});
  auto oracle = doubling_children_oracle(f, one);
  REQUIRE(oracle.size() == 1);
  CHECK(oracle[0] == child);
  CHECK_THROWS(principal_cubes(StepFunction(g, {std::vector<double>(g.cell_count(), -1.0)}),
                               one));
}

TEST_CASE("principal cube children match the exhaustive scan") {
  Rng rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    Grid g = unit_grid(5);
    StepFunction f = random_nonneg_function(g, rng);
    Weight sigma = random_weight(g, rng, 2.0);
    CoronaForest forest = principal_cubes(f, sigma);
    std::vector<NodeId> got;
    for (int ch : forest.children[0]) got.push_back(forest.members[ch].node);
    std::sort(got.begin(), got.end());
    CHECK(got == doubling_children_oracle(f, sigma));
    // Carleson packing for every member
    for (size_t m = 0; m < forest.members.size(); ++m) {
      double em = forest.e_mass(sigma, int(m));
      double fm = integral_on(sigma.fn(), forest.members[m].node);
      CHECK(em >= 0.5 * fm * (1 - 1e-12));
    }
  }
}

TEST_CASE("stopping parents") {
  Grid g = unit_grid(5);
  Rng rng(62);
  StepFunction f = random_nonneg_function(g, rng);
  Weight sigma = random_weight(g, rng, 2.0);
  CoronaForest forest = principal_cubes(f, sigma);
  CHECK(stopping_parent(forest, g.root_node()) == g.root_node());
  for (const auto& m : forest.members) CHECK(stopping_parent(forest, m.node) == m.node);
  for (int probe = 0; probe < 50; ++probe) {
    int s = int(rng.below(6));
    NodeId q{s, rng.below(g.level_size(s))};
    // linear scan: the minimal member containing q
    NodeId best{-1, 0};
    for (const auto& m : forest.members) {
      bool contains = q.level >= m.node.level &&
                      g.ancestor(q, q.level - m.node.level) == m.node;
      if (contains && m.node.level >= best.level) best = m.node;
    }
    CHECK(stopping_parent(forest, q) == best);
  }
}

TEST_CASE("corona projection: trivial forest returns g itself") {
  Grid g = unit_grid(3);
  Rng rng(63);
  StepFunction gg = random_nonneg_function(g, rng);
  Weight one = constant_weight(g, 1.0);
  CoronaForest trivialF = principal_cubes(StepFunction::constant(g, 1.0), one);
  CoronaForest forestG = principal_cubes(gg, one);
  StepFunction proj = corona_projection(gg, one, 0, trivialF, forestG);
  for (uint64_t c = 0; c < g.cell_count(); ++c) CHECK(proj.value(c) == gg.value(c));
}

TEST_CASE("corona projection of a constant lands in {0,1}") {
  Grid g = unit_grid(4);
  Rng rng(64);
  StepFunction f = random_nonneg_function(g, rng);
  Weight sigma = random_weight(g, rng, 2.0);
  Weight omega = random_weight(g, rng, 2.0);
  StepFunction one_fn = StepFunction::constant(g, 1.0);
  CoronaForest forestF = principal_cubes(f, sigma);
  CoronaForest forestG = principal_cubes(one_fn, omega);  // trivial
  for (size_t m = 0; m < forestF.members.size(); ++m) {
    StepFunction proj = corona_projection(one_fn, omega, int(m), forestF, forestG);
    for (uint64_t c = 0; c < g.cell_count(); ++c)
      CHECK((proj.value(c) == 0.0 || proj.value(c) == doctest::Approx(1.0)));
  }
}

TEST_CASE("corona projection preserves integrals inside the block") {
  Rng rng(65);
  for (int trial = 0; trial < 30; ++trial) {
    Grid g = unit_grid(5);
    StepFunction f = random_nonneg_function(g, rng);
    StepFunction gg = random_nonneg_function(g, rng);
    Weight sigma = random_weight(g, rng, 2.0);
    Weight omega = random_weight(g, rng, 2.0);
    CoronaForest forestF = principal_cubes(f, sigma);
    CoronaForest forestG = principal_cubes(gg, omega);
    for (int probe = 0; probe < 100; ++probe) {
      int s = int(rng.below(6));
      NodeId q{s, rng.below(g.level_size(s))};
      int fi = stopping_parent_index(forestF, q);
      NodeId fnode = forestF.members[fi].node;
      NodeId gnode = stopping_parent(forestG, q);
      if (gnode.level < fnode.level) continue;  // other half of the split
      StepFunction proj = corona_projection(gg, omega, fi, forestF, forestG);
      double want = 0.0, got = 0.0;
      g.for_each_cell(q, [&](uint64_t c) {
        want += gg.value(c) * omega.value(c);
        got += proj.value(c) * omega.value(c);
      });
      CHECK(got == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("pairing: single cube and zero input") {
  Grid g = unit_grid(3);
  ShiftCoefficients c(g);
  c.set(g.root_node(), 2.0);
  Weight one = constant_weight(g, 1.0);
  StepFunction f = StepFunction::constant(g, 3.0);
  StepFunction gg = StepFunction::constant(g, 5.0);
  // lambda <f sigma> <g omega> |Q| = 2 * 3 * 5 * 1
  CHECK(pairing(c, f, one, gg, one) == doctest::Approx(30.0));
  CHECK(pairing(c, StepFunction::constant(g, 0.0), one, gg, one) == 0.0);
}

TEST_CASE("pairing split re-sums exactly") {
  Rng rng(66);
  for (int trial = 0; trial < 40; ++trial) {
    Grid g = unit_grid(3 + int(rng.below(4)));
    ShiftCoefficients c = random_shift_coefficients(g, rng, 0.3);
    Weight sigma = random_weight(g, rng, 2.0);
    Weight omega = random_weight(g, rng, 2.0);
    StepFunction f = random_nonneg_function(g, rng);
    StepFunction gg = random_nonneg_function(g, rng);
    CoronaForest forestF = principal_cubes(f, sigma);
    CoronaForest forestG = principal_cubes(gg, omega);
    double whole = pairing(c, f, sigma, gg, omega);
    PairingSplit split = pairing_split(c, f, sigma, gg, omega, forestF, forestG);
    CHECK(split.total() == doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("operator norm: averaging cube and zero coefficients") {
  Grid g = unit_grid(3);
  Weight one = constant_weight(g, 1.0);
  ShiftCoefficients c(g);
  c.set(g.root_node(), 1.0);
  CHECK(operator_norm_l2(c, one, one) == doctest::Approx(1.0).epsilon(1e-12));
  ShiftCoefficients zero(g);
  CHECK(operator_norm_l2(zero, one, one) == 0.0);

  Grid huge = unit_grid(13);  // 8192 cells: beyond the certified guard
  ShiftCoefficients ch(huge);
  CHECK_THROWS(operator_norm_l2(ch, constant_weight(huge, 1.0), constant_weight(huge, 1.0)));
}

TEST_CASE("dense norm matches the power-iteration oracle") {
  Rng rng(67);
  for (int trial = 0; trial < 25; ++trial) {
    Grid g = unit_grid(6);  // 64 cells
    ShiftCoefficients c = random_shift_coefficients(g, rng, 0.3);
    Weight sigma = random_weight(g, rng, 2.0);
    Weight omega = random_weight(g, rng, 2.0);
    double dense = operator_norm_l2(c, sigma, omega);
    double power = operator_norm_l2_power(c, sigma, omega, 1000 + trial);
    CHECK(power == doctest::Approx(dense).epsilon(1e-6));
  }
}

TEST_CASE("lower bound search stays below the exact norm") {
  Rng rng(68);
  Grid g = unit_grid(4);
  Weight one = constant_weight(g, 1.0);
  ShiftCoefficients c(g);
  c.set(g.root_node(), 1.0);
  CHECK(norm_lower_bound_search(c, one, one, 2.0, 2.0, 32, 9) ==
        doctest::Approx(1.0).epsilon(1e-9));
  for (int trial = 0; trial < 10; ++trial) {
    ShiftCoefficients cc = random_shift_coefficients(g, rng, 0.3);
    Weight sigma = random_weight(g, rng, 1.0);
    Weight omega = random_weight(g, rng, 1.0);
    double exact = operator_norm_l2(cc, sigma, omega);
    double lower = norm_lower_bound_search(cc, sigma, omega, 2.0, 2.0, 64, trial);
    CHECK(lower <= exact + 1e-8);
    CHECK(lower >= 0.0);
  }
  CHECK_THROWS(norm_lower_bound_search(c, one, one, 2.0, 1.5, 8, 0));  // q < p
}

TEST_CASE("sandwich verification") {
  Grid g = unit_grid(3);
  Weight one = constant_weight(g, 1.0);
  ShiftCoefficients c(g);
  c.set(g.root_node(), 1.0);
  LsuReport rep = verify_lsu(c, one, one, 2.0, 2.0);
  CHECK(rep.norm_exact);
  CHECK(rep.norm == doctest::Approx(1.0));
  CHECK(rep.test == doctest::Approx(1.0));
  CHECK(rep.upper_ok);  // 1 <= 160
  CHECK(rep.lower_ok);

  ShiftCoefficients zero(g);
  LsuReport rz = verify_lsu(zero, one, one, 2.0, 2.0);
  CHECK(rz.norm == 0.0);
  CHECK(rz.test == 0.0);
  CHECK(rz.upper_ok);
  CHECK(rz.lower_ok);

  Rng rng(69);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g5 = unit_grid(5);
    ShiftCoefficients cc = random_shift_coefficients(g5, rng, 0.25);
    Weight sigma = random_weight(g5, rng, 2.0);
    Weight omega = random_weight(g5, rng, 2.0);
    LsuReport r = verify_lsu(cc, sigma, omega, 2.0, 2.0);
    CHECK(r.upper_ok);
    CHECK(r.lower_ok);
  }
  // general (p, q) reports a lower bound
  LsuReport rg = verify_lsu(c, one, one, 1.5, 2.0);
  CHECK_FALSE(rg.norm_exact);
  CHECK(rg.upper_ok);
}

#include <doctest.h>

#include <cmath>

#include "sparsedom/rng.hpp"
#include "sparsedom/sampling.hpp"
#include "sparsedom/shifts.hpp"

using namespace sparsedom;

namespace {

Grid unit_grid(int depth, int d = 1) { return Grid(DyadicCube::unit(d), depth); }

bool close_all(const StepFunction& a, const StepFunction& b, double tol) {
  double scale = std::max(1.0, std::max(a.max_abs(), b.max_abs()));
  for (uint64_t c = 0; c < a.grid().cell_count(); ++c)
    if (std::fabs(a.value(c) - b.value(c)) > tol * scale) return false;
  return true;
}

}  // namespace

TEST_CASE("single root coefficient averages") {
  Grid g = unit_grid(3);
  ShiftCoefficients c(g);
  c.set(g.root_node(), 1.0);
  StepFunction one = StepFunction::constant(g, 1.0);
  StepFunction out = apply_shift(c, one);
  for (double v : out.values()) CHECK(v == 1.0);

  ShiftCoefficients zero(g);
  StepFunction out0 = apply_shift(zero, one);
  for (double v : out0.values()) CHECK(v == 0.0);

  CHECK_THROWS(c.set(g.root_node(), -0.5));
}

TEST_CASE("tree shift equals the quadratic oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int d = trial % 3 == 2 ? 2 : 1;
    Grid g = unit_grid(d == 1 ? 6 : 3, d);
    ShiftCoefficients c = random_shift_coefficients(g, rng, 0.3);
    StepFunction f = random_step_function(g, rng);
    CHECK(close_all(apply_shift(c, f), apply_shift_naive(c, f), 1e-12));
  }
}

TEST_CASE("positivity: nonnegative input gives nonnegative output") {
  Rng rng(32);
  Grid g = unit_grid(6);
  for (int trial = 0; trial < 20; ++trial) {
    ShiftCoefficients c = random_shift_coefficients(g, rng, 0.3);
    StepFunction f = random_nonneg_function(g, rng);
    StepFunction out = apply_shift(c, f);
    for (double v : out.values()) CHECK(v >= 0.0);
  }
}

TEST_CASE("subshift restricts to the subtree") {
  Rng rng(33);
  Grid g = unit_grid(5);
  for (int trial = 0; trial < 30; ++trial) {
    ShiftCoefficients c = random_shift_coefficients(g, rng, 0.4);
    StepFunction f = random_step_function(g, rng);
    CHECK(close_all(apply_subshift(c, g.root_node(), f), apply_shift(c, f), 1e-12));
    int s = int(rng.below(6));
    NodeId q{s, rng.below(g.level_size(s))};
    CHECK(close_all(apply_subshift(c, q, f), apply_subshift_naive(c, q, f), 1e-12));
  }
  // a cell keeps only its own coefficient
  ShiftCoefficients c(g);
  NodeId cell{5, 13};
  c.set(cell, 2.0);
  c.set(g.root_node(), 5.0);
  StepFunction f = StepFunction::constant(g, 1.0);
  StepFunction out = apply_subshift(c, cell, f);
  for (uint64_t i = 0; i < g.cell_count(); ++i)
    CHECK(out.value(i) == (i == cell.flat ? 2.0 : 0.0));
}

TEST_CASE("complexity zero is self-dual") {
  Rng rng(34);
  Grid g = unit_grid(6);
  for (int trial = 0; trial < 20; ++trial) {
    SparseFamily fam = random_sparse_family(g, rng, 0.4, 0);
    if (fam.cubes.empty()) continue;
    SkPlusSpec spec(fam, 0);
    StepFunction f = random_step_function(g, rng);
    CHECK(close_all(apply_skplus(spec, f), apply_skplus_adjoint(spec, f), 1e-12));
  }
}

TEST_CASE("the adjoint pairing identity holds") {
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    int k = int(rng.below(4));
    Grid g = unit_grid(8);
    SparseFamily fam = random_sparse_family(g, rng, 0.4, k);
    if (fam.cubes.empty()) continue;
    SkPlusSpec spec(fam, k);
    StepFunction f = random_step_function(g, rng);
    StepFunction h = random_step_function(g, rng);
    double lhs = pairing_l2(apply_skplus(spec, f), h);
    double rhs = pairing_l2(f, apply_skplus_adjoint(spec, h));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(close_all(apply_skplus(spec, f), apply_skplus_naive(spec, f), 1e-12));
    CHECK(close_all(apply_skplus_adjoint(spec, f), apply_skplus_adjoint_naive(spec, f),
                    1e-12));
  }
}

TEST_CASE("complexity-one adjoint of the paired-spike function") {
  // family over [0,1): all level-1 intervals and their leftmost halves;
  // the adjoint maps 2(1_[0,1/4) + 1_[1/2,3/4)) to the constant 2
  ExtremalPair pair = extremal_family(1, 2);
  CHECK(pair.f.values() == std::vector<double>{2.0, 0.0, 2.0, 0.0});
  StepFunction out = apply_skplus_adjoint(pair.spec, pair.f);
  for (double v : out.values()) CHECK(v == 2.0);
}

TEST_CASE("extremal family identities for every complexity") {
  for (int k = 0; k <= 6; ++k) {
    ExtremalPair pair = extremal_family(k, 2 * k);
    CHECK(l1_norm(pair.f) == 1.0);
    StepFunction out = apply_skplus_adjoint(pair.spec, pair.f);
    for (double v : out.values()) CHECK(v == double(k + 1));
    CHECK(weak_l1_norm(out) == double(k + 1));
    FamilyCheck fc = check_family(pair.spec.family);
    CHECK(fc.disjoint);
    CHECK(fc.min_ratio >= 0.5);
  }
  // k = 0 degenerates to the unit interval itself
  ExtremalPair base = extremal_family(0, 0);
  CHECK(base.spec.family.cubes.size() == 1);
  CHECK(base.f.values() == std::vector<double>{1.0});
  // deeper grids work too: k = 5 at depth 10 gives the constant 6
  ExtremalPair five = extremal_family(5, 10);
  StepFunction out5 = apply_skplus_adjoint(five.spec, five.f);
  for (double v : out5.values()) CHECK(v == 6.0);
  CHECK_THROWS(extremal_family(3, 5));  // depth below 2k
}

TEST_CASE("weak (1,1) ratios") {
  for (int k = 0; k <= 4; ++k) {
    ExtremalPair pair = extremal_family(k, 2 * k);
    CHECK(weak11_ratio(pair.spec, pair.f, true) == double(k + 1));
  }
  Grid g = unit_grid(3);
  SparseFamily fam = family_from_cubes(g, {g.root_node()});
  SkPlusSpec spec(fam, 0);
  StepFunction one = StepFunction::constant(g, 1.0);
  CHECK(weak11_ratio(spec, one, false) == 1.0);
  CHECK_THROWS(weak11_ratio(spec, StepFunction::constant(g, 0.0), false));
}

TEST_CASE("oscillation of the adjoint against the averaged input") {
  Grid g = unit_grid(4);
  SparseFamily fam = family_from_cubes(g, {g.root_node()});
  SkPlusSpec spec(fam, 0);

  OscAdjoint zero = oscillation_of_adjoint(spec, StepFunction::constant(g, 0.0),
                                           g.root_node(), 1.0 / 8);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  OscAdjoint one = oscillation_of_adjoint(spec, StepFunction::constant(g, 1.0),
                                          g.root_node(), 1.0 / 8);
  CHECK(one.lhs == 0.0);  // adjoint output is constant
  CHECK(one.rhs == 1.0);

  // whenever the local average vanishes the local oscillation must too
  Rng rng(36);
  double worst_const = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    int k = int(rng.below(3));
    Grid g8 = unit_grid(8);
    SparseFamily f8 = random_sparse_family(g8, rng, 0.4, k);
    if (f8.cubes.empty()) continue;
    SkPlusSpec s8(f8, k);
    StepFunction gfun = random_nonneg_function(g8, rng);
    int s = int(rng.below(9));
    NodeId L{s, rng.below(g8.level_size(s))};
    OscAdjoint oa = oscillation_of_adjoint(s8, gfun, L, 1.0 / 8);
    if (oa.rhs == 0.0)
      CHECK(oa.lhs == 0.0);
    else
      worst_const = std::max(worst_const, oa.lhs / oa.rhs);
  }
  CHECK(std::isfinite(worst_const));
}

TEST_CASE("spec validation rejects missing ancestors") {
  Grid g = unit_grid(3);
  SparseFamily fam = family_from_cubes(g, {NodeId{1, 0}});
  CHECK_THROWS(SkPlusSpec(fam, 2));  // level-1 cube has no level -1 ancestor
}

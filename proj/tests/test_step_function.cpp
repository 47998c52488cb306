#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsedom/rng.hpp"
#include "sparsedom/sampling.hpp"
#include "sparsedom/step_function.hpp"

using namespace sparsedom;

namespace {

Grid unit_grid(int depth, int d = 1) { return Grid(DyadicCube::unit(d), depth); }

StepFunction half_indicator(int depth) {
  Grid g = unit_grid(depth);
  std::vector<double> v(g.cell_count(), 0.0);
  for (uint64_t c = 0; c < g.cell_count() / 2; ++c) v[c] = 1.0;
  return StepFunction(g, std::move(v));
}

// inf{a >= 0 : |{|f| > a}| <= t} scanned over the value set, smallest first.
double rearrangement_oracle(const StepFunction& f, double t) {
  std::vector<double> cand{0.0};
  for (double v : f.values()) cand.push_back(std::fabs(v));
  std::sort(cand.begin(), cand.end());
  const double m = f.grid().cell_measure();
  for (double a : cand) {
    uint64_t over = 0;
    for (double v : f.values())
      if (std::fabs(v) > a) ++over;
    if (double(over) * m <= t) return a;
  }
  return cand.back();
}

// rearrangement of the masked deviation on q at level t, independent of the
// windowing code: sort |f - c| over the cells of q and discard whole cells.
double masked_deviation_level(const StepFunction& f, NodeId q, double c, double t) {
  std::vector<double> dev;
  f.grid().for_each_cell(q, [&](uint64_t cell) {
    dev.push_back(std::fabs(f.value(cell) - c));
  });
  std::sort(dev.begin(), dev.end(), std::greater<double>());
  uint64_t k = detail::discard_count(t, f.grid().cell_measure(), dev.size());
  if (k >= dev.size()) return 0.0;
  return dev[k];
}

// brute-force infimum over c: a 1001-point grid spanning the value range,
// augmented with every value and pairwise midpoint (the candidate optima of
// the piecewise-linear objective), so the infimum is exact.
double oscillation_oracle(const StepFunction& f, NodeId q, double lambda) {
  std::vector<double> vals;
  f.grid().for_each_cell(q, [&](uint64_t cell) { vals.push_back(f.value(cell)); });
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  std::vector<double> cand;
  for (int i = 0; i <= 1000; ++i) cand.push_back(lo + (hi - lo) * i / 1000.0);
  for (size_t a = 0; a < vals.size(); ++a)
    for (size_t b = a; b < vals.size(); ++b) cand.push_back((vals[a] + vals[b]) / 2.0);
  const double t = lambda * f.grid().node_measure(q.level);
  double best = std::numeric_limits<double>::infinity();
  for (double c : cand) best = std::min(best, masked_deviation_level(f, q, c, t));
  return best;
}

// sup over a of a |{|f| > a}| probed just below each distinct value.
double weak_l1_oracle(const StepFunction& f) {
  const double m = f.grid().cell_measure();
  double best = 0.0;
  for (double v : f.values()) {
    double a = std::fabs(v) * (1.0 - 1e-9);
    if (a <= 0.0) continue;
    uint64_t over = 0;
    for (double u : f.values())
      if (std::fabs(u) > a) ++over;
    best = std::max(best, a * double(over) * m);
  }
  return best;
}

}  // namespace

TEST_CASE("averages: constants, indicators, random oracle") {
  Grid g = unit_grid(4);
  StepFunction c = StepFunction::constant(g, 3.25);
  for (int s = 0; s <= 4; ++s) CHECK(average(c, NodeId{s, 0}) == 3.25);

  StepFunction h = half_indicator(4);
  CHECK(average(h, g.root_node()) == 0.5);

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    StepFunction f = random_step_function(g, rng);
    int s = int(rng.below(5));
    NodeId q{s, rng.below(g.level_size(s))};
    double direct = 0.0;
    uint64_t count = 0;
    g.for_each_cell(q, [&](uint64_t cell) {
      direct += f.value(cell);
      ++count;
    });
    CHECK(average(f, q) == doctest::Approx(direct / double(count)).epsilon(1e-13));
  }
  CHECK_THROWS(average(h, DyadicCube::unit(2)));  // different grid
}

TEST_CASE("rearrangement on the half indicator") {
  StepFunction h = half_indicator(4);
  CHECK(rearrangement(h, 0.5) == 0.0);
  CHECK(rearrangement(h, 0.25) == 1.0);
  CHECK(rearrangement_oracle(h, 0.25) == 1.0);
  CHECK_THROWS(rearrangement(h, -0.1));
}

TEST_CASE("rearrangement of a constant") {
  Grid g = unit_grid(3);
  StepFunction c = StepFunction::constant(g, -2.5);
  CHECK(rearrangement(c, 0.999) == 2.5);
  CHECK(rearrangement(c, 1.0) == 0.0);
}

TEST_CASE("rearrangement agrees with the infimum oracle and is monotone") {
  Grid g = unit_grid(5);
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    StepFunction f = random_step_function(g, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 16; ++j) {
      double t = j / 16.0;
      double got = rearrangement(f, t);
      CHECK(got == doctest::Approx(rearrangement_oracle(f, t)).epsilon(1e-13));
      CHECK(got <= prev);
      prev = got;
    }
    // right continuity: constant on each whole-cell step
    const double m = g.cell_measure();
    for (int j = 1; j < 8; ++j) {
      CHECK(rearrangement(f, j * m) == rearrangement(f, j * m + m / 2));
      CHECK(rearrangement(f, j * m - m / 2) >= rearrangement(f, j * m));
    }
  }
}

TEST_CASE("canonical median") {
  StepFunction h = half_indicator(4);
  CHECK(median(h, h.grid().root_node()) == 0.0);

  Grid g = unit_grid(3);
  StepFunction c = StepFunction::constant(g, 7.0);
  CHECK(median(c, g.root_node()) == 7.0);

  Grid g2 = unit_grid(2);
  StepFunction f(g2, {1.0, 2.0, 3.0, 4.0});
  // oracle: scan candidate medians over a fine grid, keep the minimum
  // satisfying both defining inequalities
  double best = std::numeric_limits<double>::infinity();
  for (double cand = 0.0; cand <= 5.0; cand += 1.0 / 64) {
    int above = 0, below = 0;
    for (double v : f.values()) {
      if (v > cand) ++above;
      if (v < cand) ++below;
    }
    if (2 * above <= 4 && 2 * below <= 4) best = std::min(best, cand);
  }
  CHECK(best == 2.0);
  CHECK(median(f, g2.root_node()) == 2.0);
}

TEST_CASE("oscillation: paper cases and the brute-force oracle") {
  Grid g = unit_grid(4);
  StepFunction c = StepFunction::constant(g, 3.0);
  CHECK(oscillation(c, g.root_node(), 0.25) == 0.0);

  StepFunction h = half_indicator(4);
  CHECK(oscillation(h, g.root_node(), 0.5) == 0.0);
  CHECK(oscillation(h, g.root_node(), 0.25) == 0.5);
  CHECK(oscillation_oracle(h, g.root_node(), 0.25) == 0.5);

  CHECK_THROWS(oscillation(h, g.root_node(), 0.0));
  CHECK_THROWS(oscillation(h, g.root_node(), 1.0));

  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    StepFunction f = random_step_function(g, rng);
    int s = int(rng.below(4));
    NodeId q{s, rng.below(g.level_size(s))};
    double lambda = 0.05 + 0.9 * rng.uniform();
    double got = oscillation(f, q, lambda);
    double want = oscillation_oracle(f, q, lambda);
    CHECK(std::fabs(got - want) <= 1e-12);
  }
}

TEST_CASE("weak L1 norm") {
  Grid g = unit_grid(2);
  CHECK(weak_l1_norm(StepFunction::constant(g, 3.0)) == 3.0);  // (k+1) = 3 on [0,1)
  CHECK(weak_l1_norm(StepFunction::constant(g, 0.0)) == 0.0);
  StepFunction spike(g, {4.0, 0.0, 0.0, 0.0});
  CHECK(weak_l1_norm(spike) == 1.0);

  Rng rng(8);
  Grid g5 = unit_grid(5);
  for (int trial = 0; trial < 30; ++trial) {
    StepFunction f = random_step_function(g5, rng);
    CHECK(weak_l1_norm(f) == doctest::Approx(weak_l1_oracle(f)).epsilon(1e-8));
  }
}

TEST_CASE("median lemma bounds on seeded data") {
  Rng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    int d = trial % 3 == 2 ? 2 : 1;
    Grid g = unit_grid(d == 1 ? 5 : 3, d);
    StepFunction f = random_step_function(g, rng);
    int s = int(rng.below(uint64_t(g.depth()) + 1));
    NodeId q{s, rng.below(g.level_size(s))};
    double m = median(f, q);
    for (double nu : {0.05, 0.15, 0.25, 0.35, 0.45}) {
      double t = nu * g.node_measure(s);
      CHECK(std::fabs(m) <= rearrangement(restrict_to(f, q), t) + 1e-12);
      CHECK(masked_deviation_level(f, q, m, t) <= 2 * oscillation(f, q, nu) + 1e-12);
    }
    double wn = weak_l1_norm(f);
    for (double t : {0.1, 0.35, 0.6, 0.9})
      CHECK(rearrangement(f, t) <= wn / t + 1e-12);
  }
}

TEST_CASE("half-fraction remark: only the canonical median survives") {
  StepFunction h = half_indicator(4);
  NodeId root = h.grid().root_node();
  CHECK(masked_deviation_level(h, root, 0.0, 0.5) == 0.0);
  for (double m : {0.1, 0.3, 0.5, 0.7, 0.9})
    CHECK(masked_deviation_level(h, root, m, 0.5) > 0.0);
  CHECK(oscillation(h, root, 0.5) == 0.0);
}

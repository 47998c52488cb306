#include "sparsedom/two_weight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsedom/linalg.hpp"
#include "sparsedom/rng.hpp"

namespace sparsedom {

namespace {

void check_grids(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("two_weight: operands on different grids");
}

std::vector<double> cellwise_product(const StepFunction& f, const Weight& w) {
  std::vector<double> v(f.grid().cell_count());
  for (uint64_t c = 0; c < v.size(); ++c) v[c] = f.value(c) * w.value(c);
  return v;
}

// Path prefix P[node] = sum over ancestors (node included) of lambda / |Q|.
LevelArrays path_prefix(const ShiftCoefficients& c) {
  const Grid& g = c.grid();
  LevelArrays p = make_level_arrays(g);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double v = c.at(NodeId{s, j}) / g.node_measure(s);
      if (s > 0) v += p[s - 1][g.parent_flat(s, j)];
      p[s][j] = v;
    }
  return p;
}

// Kernel application (Kz)_i = sum_{Q owning i} (lambda_Q/|Q|) sum_{j in Q} z_j.
std::vector<double> apply_kernel(const ShiftCoefficients& c, const std::vector<double>& z) {
  const Grid& g = c.grid();
  LevelArrays sums = subtree_sums(g, z);
  LevelArrays add = make_level_arrays(g);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double lam = c.at(NodeId{s, j});
      if (lam != 0.0) add[s][j] = lam / g.node_measure(s) * sums[s][j];
    }
  return push_down_add(g, std::move(add));
}

}  // namespace

double pairing(const ShiftCoefficients& c, const StepFunction& f, const Weight& sigma,
               const StepFunction& g, const Weight& omega) {
  check_grids(c.grid(), f.grid());
  check_grids(c.grid(), g.grid());
  check_grids(f.grid(), sigma.grid());
  check_grids(g.grid(), omega.grid());
  const Grid& grid = c.grid();
  LevelArrays fs = subtree_sums(grid, cellwise_product(f, sigma));
  LevelArrays gw = subtree_sums(grid, cellwise_product(g, omega));
  const double cell_m = grid.cell_measure();
  double acc = 0.0;
  for (int s = 0; s <= grid.depth(); ++s)
    for (uint64_t j = 0; j < grid.level_size(s); ++j) {
      double lam = c.at(NodeId{s, j});
      if (lam == 0.0) continue;
      // lambda <f sigma>_Q <g omega>_Q |Q| = lambda (int fs)(int gw) / |Q|
      acc += lam * (fs[s][j] * cell_m) * (gw[s][j] * cell_m) / grid.node_measure(s);
    }
  return acc;
}

PairingSplit pairing_split(const ShiftCoefficients& c, const StepFunction& f,
                           const Weight& sigma, const StepFunction& g, const Weight& omega,
                           const CoronaForest& forestF, const CoronaForest& forestG) {
  check_grids(c.grid(), forestF.grid);
  check_grids(c.grid(), forestG.grid);
  const Grid& grid = c.grid();
  LevelArrays fs = subtree_sums(grid, cellwise_product(f, sigma));
  LevelArrays gw = subtree_sums(grid, cellwise_product(g, omega));
  const double cell_m = grid.cell_measure();
  PairingSplit out;
  for (int s = 0; s <= grid.depth(); ++s)
    for (uint64_t j = 0; j < grid.level_size(s); ++j) {
      double lam = c.at(NodeId{s, j});
      if (lam == 0.0) continue;
      NodeId q{s, j};
      double term = lam * (fs[s][j] * cell_m) * (gw[s][j] * cell_m) / grid.node_measure(s);
      NodeId pf = stopping_parent(forestF, q);
      NodeId pg = stopping_parent(forestG, q);
      // both contain q, hence nested; deeper level = smaller cube
      if (pg.level >= pf.level)
        out.part_g_inside_f += term;
      else
        out.part_f_inside_g += term;
    }
  return out;
}

StepFunction apply_weighted(const ShiftCoefficients& c, const StepFunction& f,
                            const Weight& sigma) {
  check_grids(c.grid(), f.grid());
  check_grids(f.grid(), sigma.grid());
  return apply_shift(c, StepFunction(f.grid(), cellwise_product(f, sigma)));
}

double operator_norm_l2(const ShiftCoefficients& c, const Weight& sigma, const Weight& omega) {
  check_grids(c.grid(), sigma.grid());
  check_grids(c.grid(), omega.grid());
  const Grid& g = c.grid();
  const uint64_t n = g.cell_count();
  if (n > 4096) throw std::invalid_argument("operator_norm_l2: more than 4096 cells");
  if (n > 512) return operator_norm_l2_power(c, sigma, omega, 0x5eed0201u);

  // B_ij = sqrt(omega_i m) K_ij sqrt(sigma_j m), K_ij the shared-ancestor
  // path prefix at the LCA of cells i and j.
  LevelArrays prefix = path_prefix(c);
  const double cell_m = g.cell_measure();
  std::vector<double> sw(n), ss(n);
  for (uint64_t i = 0; i < n; ++i) {
    sw[i] = std::sqrt(omega.value(i) * cell_m);
    ss[i] = std::sqrt(sigma.value(i) * cell_m);
  }
  std::vector<double> b(n * n);
  for (uint64_t i = 0; i < n; ++i)
    for (uint64_t j = 0; j < n; ++j) {
      NodeId l = g.lca_cells(i, j);
      b[i * n + j] = sw[i] * prefix[l.level][l.flat] * ss[j];
    }
  // G = B^T B, symmetric positive semidefinite
  SymMatrix gm(n);
  for (uint64_t i = 0; i < n; ++i)
    for (uint64_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (uint64_t t = 0; t < n; ++t) acc += b[t * n + i] * b[t * n + j];
      gm.at(i, j) = acc;
      gm.at(j, i) = acc;
    }
  double lam = largest_eigenvalue_jacobi(std::move(gm));
  return std::sqrt(std::max(0.0, lam));
}

double operator_norm_l2_power(const ShiftCoefficients& c, const Weight& sigma,
                              const Weight& omega, uint64_t seed) {
  const Grid& g = c.grid();
  const uint64_t n = g.cell_count();
  const double cell_m = g.cell_measure();
  std::vector<double> sw(n), ss(n);
  for (uint64_t i = 0; i < n; ++i) {
    sw[i] = std::sqrt(omega.value(i) * cell_m);
    ss[i] = std::sqrt(sigma.value(i) * cell_m);
  }
  auto apply_g = [&](const std::vector<double>& x) {
    std::vector<double> t(n);
    for (uint64_t i = 0; i < n; ++i) t[i] = ss[i] * x[i];
    t = apply_kernel(c, t);
    for (uint64_t i = 0; i < n; ++i) t[i] *= sw[i] * sw[i];
    t = apply_kernel(c, t);
    for (uint64_t i = 0; i < n; ++i) t[i] *= ss[i];
    return t;
  };
  auto norm2 = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };

  double best = 0.0;
  for (int restart = 0; restart < 5; ++restart) {
    Rng rng(Rng::mix(seed + restart));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform(0.1, 1.0);
    double nx = norm2(x);
    for (double& v : x) v /= nx;
    double rho = 0.0;
    int stable = 0;
    for (int iter = 0; iter < 30000; ++iter) {
      std::vector<double> y = apply_g(x);
      double r = 0.0;
      for (uint64_t i = 0; i < n; ++i) r += x[i] * y[i];
      double ny = norm2(y);
      if (ny == 0.0) {
        rho = 0.0;
        break;
      }
      for (uint64_t i = 0; i < n; ++i) x[i] = y[i] / ny;
      if (std::fabs(r - rho) <= 1e-15 * std::max(1.0, std::fabs(r)))
        ++stable;
      else
        stable = 0;
      rho = r;
      if (stable >= 8) break;
    }
    best = std::max(best, rho);
  }
  return std::sqrt(std::max(0.0, best));
}

namespace {

double rayleigh_ratio(const ShiftCoefficients& c, const Weight& sigma, const Weight& omega,
                      double p, double q, const std::vector<double>& f) {
  StepFunction sf(c.grid(), f);
  double den = weighted_norm(sf, sigma, p);
  if (den == 0.0) return 0.0;
  return weighted_norm(apply_weighted(c, sf, sigma), omega, q) / den;
}

}  // namespace

double norm_lower_bound_search(const ShiftCoefficients& c, const Weight& sigma,
                               const Weight& omega, double p, double q, int budget,
                               uint64_t seed) {
  if (!(p > 1.0 && p <= q && std::isfinite(q)))
    throw std::invalid_argument("norm_lower_bound_search: need 1 < p <= q < infinity");
  const Grid& g = c.grid();
  const uint64_t n = g.cell_count();
  Rng rng(Rng::mix(seed ^ 0x10b0u));

  double best = 0.0;
  std::vector<double> best_f(n, 1.0);
  auto consider = [&](const std::vector<double>& f) {
    double r = rayleigh_ratio(c, sigma, omega, p, q, f);
    if (r > best) {
      best = r;
      best_f = f;
    }
  };

  // cube indicators
  int used = 0;
  for (int s = 0; s <= g.depth() && used < budget; ++s)
    for (uint64_t j = 0; j < g.level_size(s) && used < budget; ++j, ++used) {
      std::vector<double> f(n, 0.0);
      g.for_each_cell(NodeId{s, j}, [&](uint64_t cell) { f[cell] = 1.0; });
      consider(f);
    }

  // corona-set profiles of the best indicator so far
  {
    StepFunction probe(g, best_f);
    CoronaForest forest = principal_cubes(probe, sigma);
    for (size_t m = 0; m < forest.members.size() && int(m) < budget; ++m) {
      std::vector<double> f(n, 0.0);
      for (uint32_t cell : forest.e_cells[m]) f[cell] = 1.0;
      bool nonzero = false;
      for (double v : f) nonzero |= (v != 0.0);
      if (nonzero) consider(f);
    }
  }

  // random positives
  for (int t = 0; t < budget / 2; ++t) {
    std::vector<double> f(n);
    for (double& v : f) v = std::exp(rng.uniform(-2.0, 2.0));
    consider(f);
  }

  // local ascent from the best candidate
  std::vector<double> cur = best_f;
  for (int step = 0; step < budget; ++step) {
    std::vector<double> f = cur;
    uint64_t cell = rng.below(n);
    double factor = std::exp(rng.uniform(-0.5, 0.5));
    f[cell] = std::max(1e-12, f[cell]) * factor;
    double r = rayleigh_ratio(c, sigma, omega, p, q, f);
    if (r > best) {
      best = r;
      cur = f;
      best_f = f;
    }
  }
  return best;
}

LsuReport verify_lsu(const ShiftCoefficients& c, const Weight& sigma, const Weight& omega,
                     double p, double q) {
  if (!(p > 1.0 && p <= q && std::isfinite(q)))
    throw std::invalid_argument("verify_lsu: need 1 < p <= q < infinity");
  LsuReport rep;
  TestingConstants tc = testing_constants(c, sigma, omega, p, q);
  rep.test = tc.test;
  rep.test_dual = tc.test_dual;
  if (p == 2.0 && q == 2.0) {
    rep.norm = operator_norm_l2(c, sigma, omega);
    rep.norm_exact = true;
  } else {
    rep.norm = norm_lower_bound_search(c, sigma, omega, p, q, 128, 0xacce55);
    rep.norm_exact = false;
  }
  const double pp = conjugate_exponent(p);
  const double qq = conjugate_exponent(q);
  const double upper = 20.0 * (pp * q * rep.test + p * qq * rep.test_dual);
  rep.upper_margin = upper - rep.norm;
  rep.lower_margin = rep.norm - std::max(rep.test, rep.test_dual);
  const double tol = 1e-9 * std::max(1.0, rep.norm);
  rep.upper_ok = rep.upper_margin >= -tol;
  rep.lower_ok = rep.lower_margin >= -tol;
  return rep;
}

}  // namespace sparsedom

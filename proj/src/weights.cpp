#include "sparsedom/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparsedom/rational.hpp"

namespace sparsedom {

namespace {

void check_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("weights: operands on different grids");
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("weights: exponent must lie in (1, infinity)");
}

LevelArrays node_averages_abs(const Grid& g, const StepFunction& f) {
  std::vector<double> absv(f.values());
  for (double& v : absv) v = std::fabs(v);
  LevelArrays sums = subtree_sums(g, absv);
  for (int s = 0; s <= g.depth(); ++s) {
    const double inv = 1.0 / double(g.cells_per_node(s));
    for (double& v : sums[s]) v *= inv;
  }
  return sums;
}

}  // namespace

Weight::Weight(StepFunction f) : f_(std::move(f)) {
  for (double v : f_.values())
    if (!(v > 0.0)) throw std::invalid_argument("Weight: values must be strictly positive");
}

double Weight::total_mass() const { return mass(grid().root_node()); }

Weight dual_weight(const Weight& w, double p) {
  check_p(p);
  const double expo = 1.0 - conjugate_exponent(p);
  std::vector<double> v(w.fn().values());
  for (double& x : v) x = std::pow(x, expo);
  return Weight(StepFunction(w.grid(), std::move(v)));
}

double weighted_norm(const StepFunction& f, const Weight& w, double p) {
  check_grid(f.grid(), w.grid());
  check_p(p);
  const double m = f.grid().cell_measure();
  double acc = 0.0;
  for (uint64_t c = 0; c < f.grid().cell_count(); ++c)
    acc += std::pow(std::fabs(f.value(c)), p) * w.value(c) * m;
  return std::pow(acc, 1.0 / p);
}

double weighted_weak_norm(const StepFunction& f, const Weight& w, double p) {
  check_grid(f.grid(), w.grid());
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_weak_norm: p must be >= 1");
  const uint64_t n = f.grid().cell_count();
  const double m = f.grid().cell_measure();
  std::vector<std::pair<double, double>> cells(n);  // (|f|, w mass)
  for (uint64_t c = 0; c < n; ++c) cells[c] = {std::fabs(f.value(c)), w.value(c) * m};
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0, wmass = 0.0;
  for (uint64_t i = 0; i < n; ++i) {
    if (cells[i].first == 0.0) break;
    wmass += cells[i].second;
    if (i + 1 < n && cells[i + 1].first == cells[i].first) continue;
    best = std::max(best, cells[i].first * std::pow(wmass, 1.0 / p));
  }
  return best;
}

StepFunction maximal(const StepFunction& f) {
  const Grid& g = f.grid();
  LevelArrays best = node_averages_abs(g, f);
  const unsigned nkids = 1u << g.dim();
  for (int s = 0; s < g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j)
      for (unsigned off = 0; off < nkids; ++off) {
        uint64_t cf = g.child_flat(s, j, off);
        best[s + 1][cf] = std::max(best[s + 1][cf], best[s][j]);
      }
  return StepFunction(g, std::move(best[g.depth()]));
}

StepFunction maximal_weighted(const StepFunction& f, const Weight& sigma) {
  check_grid(f.grid(), sigma.grid());
  const Grid& g = f.grid();
  std::vector<double> fs(g.cell_count());
  for (uint64_t c = 0; c < g.cell_count(); ++c) fs[c] = std::fabs(f.value(c)) * sigma.value(c);
  LevelArrays num = subtree_sums(g, fs);
  LevelArrays den = subtree_sums(g, sigma.fn().values());
  LevelArrays best = make_level_arrays(g);
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) best[s][j] = num[s][j] / den[s][j];
  const unsigned nkids = 1u << g.dim();
  for (int s = 0; s < g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j)
      for (unsigned off = 0; off < nkids; ++off) {
        uint64_t cf = g.child_flat(s, j, off);
        best[s + 1][cf] = std::max(best[s + 1][cf], best[s][j]);
      }
  return StepFunction(g, std::move(best[g.depth()]));
}

double ap_constant(const Weight& w, const Weight& sigma, double p) {
  check_grid(w.grid(), sigma.grid());
  check_p(p);
  const Grid& g = w.grid();
  LevelArrays ws = subtree_sums(g, w.fn().values());
  LevelArrays ss = subtree_sums(g, sigma.fn().values());
  double best = 0.0;
  for (int s = 0; s <= g.depth(); ++s) {
    const double inv = 1.0 / double(g.cells_per_node(s));
    for (uint64_t j = 0; j < g.level_size(s); ++j)
      best = std::max(best, ws[s][j] * inv * std::pow(ss[s][j] * inv, p - 1.0));
  }
  return best;
}

double ap_constant_naive(const Weight& w, const Weight& sigma, double p) {
  const Grid& g = w.grid();
  double best = 0.0;
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId q{s, j};
      best = std::max(best, average(w.fn(), q) * std::pow(average(sigma.fn(), q), p - 1.0));
    }
  return best;
}

double ainfty_constant(const Weight& sigma) {
  const Grid& g = sigma.grid();
  LevelArrays sums = subtree_sums(g, sigma.fn().values());
  const double cell_m = g.cell_measure();
  const unsigned nkids = 1u << g.dim();
  double best = 0.0;
  // For x in Q, M(1_Q sigma)(x) = max over x in R <= Q of <sigma>_R, so the
  // integral is one running-max pass over the subtree of Q.
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      double integral = 0.0;
      struct Item {
        NodeId n;
        double running;
      };
      std::vector<Item> stack{{NodeId{s, j}, 0.0}};
      while (!stack.empty()) {
        auto [n, running] = stack.back();
        stack.pop_back();
        double avg = sums[n.level][n.flat] / double(g.cells_per_node(n.level));
        running = std::max(running, avg);
        if (g.is_cell(n)) {
          integral += running * cell_m;
          continue;
        }
        for (unsigned off = 0; off < nkids; ++off)
          stack.push_back({NodeId{n.level + 1, g.child_flat(n.level, n.flat, off)}, running});
      }
      best = std::max(best, integral / (sums[s][j] * cell_m));
    }
  return best;
}

double ainfty_constant_naive(const Weight& sigma) {
  const Grid& g = sigma.grid();
  double best = 0.0;
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId q{s, j};
      StepFunction loc = restrict_to(sigma.fn(), q);
      StepFunction m = maximal(loc);
      best = std::max(best, integral_on(m, q) / sigma.mass(q));
    }
  return best;
}

namespace {

// ||S_Q test_fn||_{L^r(measure)}^r with the sum restricted to cubes inside Q:
// one pass down the subtree of Q accumulating lambda <test_fn> along paths.
double testing_numerator(const ShiftCoefficients& c, const LevelArrays& avg,
                         const Weight& measure, double r, NodeId q) {
  const Grid& g = c.grid();
  const double cell_m = g.cell_measure();
  const unsigned nkids = 1u << g.dim();
  double acc = 0.0;
  struct Item {
    NodeId n;
    double run;
  };
  std::vector<Item> stack{{q, 0.0}};
  while (!stack.empty()) {
    auto [n, run] = stack.back();
    stack.pop_back();
    run += c.at(n) * avg[n.level][n.flat];
    if (g.is_cell(n)) {
      acc += std::pow(run, r) * measure.value(n.flat) * cell_m;
      continue;
    }
    for (unsigned off = 0; off < nkids; ++off)
      stack.push_back({NodeId{n.level + 1, g.child_flat(n.level, n.flat, off)}, run});
  }
  return acc;
}

LevelArrays weight_averages(const Grid& g, const Weight& w) {
  LevelArrays sums = subtree_sums(g, w.fn().values());
  for (int s = 0; s <= g.depth(); ++s) {
    const double inv = 1.0 / double(g.cells_per_node(s));
    for (double& v : sums[s]) v *= inv;
  }
  return sums;
}

}  // namespace

TestingConstants testing_constants(const ShiftCoefficients& c, const Weight& sigma,
                                   const Weight& omega, double p, double q) {
  check_grid(c.grid(), sigma.grid());
  check_grid(c.grid(), omega.grid());
  check_p(p);
  check_p(q);
  if (p > q) throw std::invalid_argument("testing_constants: requires p <= q");
  const Grid& g = c.grid();
  const double pp = conjugate_exponent(p);
  const double qq = conjugate_exponent(q);
  LevelArrays savg = weight_averages(g, sigma);
  LevelArrays wavg = weight_averages(g, omega);

  TestingConstants out;
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId node{s, j};
      double nq = std::pow(testing_numerator(c, savg, omega, q, node), 1.0 / q);
      out.test = std::max(out.test, nq / std::pow(sigma.mass(node), 1.0 / p));
      double np = std::pow(testing_numerator(c, wavg, sigma, pp, node), 1.0 / pp);
      out.test_dual = std::max(out.test_dual, np / std::pow(omega.mass(node), 1.0 / qq));
    }
  return out;
}

TestingConstants testing_constants_naive(const ShiftCoefficients& c, const Weight& sigma,
                                         const Weight& omega, double p, double q) {
  const Grid& g = c.grid();
  const double pp = conjugate_exponent(p);
  const double qq = conjugate_exponent(q);
  TestingConstants out;
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId node{s, j};
      StepFunction ts = apply_subshift_naive(c, node, sigma.fn());
      out.test = std::max(out.test, weighted_norm(ts, omega, q) /
                                        std::pow(sigma.mass(node), 1.0 / p));
      StepFunction tw = apply_subshift_naive(c, node, omega.fn());
      out.test_dual = std::max(out.test_dual, weighted_norm(tw, sigma, pp) /
                                                  std::pow(omega.mass(node), 1.0 / qq));
    }
  return out;
}

double testing_condition_ratio(const SparseFamily& fam, const Weight& w, const Weight& sigma,
                               double p, NodeId q) {
  check_grid(fam.grid, w.grid());
  check_grid(fam.grid, sigma.grid());
  check_p(p);
  const Grid& g = fam.grid;
  // coefficients 1 on family cubes
  ShiftCoefficients c(g);
  for (NodeId n : fam.cubes) c.set(n, 1.0);
  LevelArrays savg = weight_averages(g, sigma);
  double numerator = testing_numerator(c, savg, w, p, q);
  double denom = ap_constant(w, sigma, p) * ainfty_constant(sigma) * sigma.mass(q);
  return numerator / denom;
}

double testing_condition_worst_ratio(const SparseFamily& fam, const Weight& w,
                                     const Weight& sigma, double p) {
  check_grid(fam.grid, w.grid());
  check_grid(fam.grid, sigma.grid());
  check_p(p);
  const Grid& g = fam.grid;
  ShiftCoefficients c(g);
  for (NodeId n : fam.cubes) c.set(n, 1.0);
  LevelArrays savg = weight_averages(g, sigma);
  const double scale = ap_constant(w, sigma, p) * ainfty_constant(sigma);
  double best = 0.0;
  for (int s = 0; s <= g.depth(); ++s)
    for (uint64_t j = 0; j < g.level_size(s); ++j) {
      NodeId q{s, j};
      best = std::max(best, testing_numerator(c, savg, w, p, q) / (scale * sigma.mass(q)));
    }
  return best;
}

MultOutChain multout_check(const std::vector<double>& a, int k, double alpha) {
  const int n = int(a.size());
  if (n < 1 || n > 12 || k < 0 || k > 4)
    throw std::invalid_argument("multout_check: size guard (len <= 12, k <= 4)");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("multout_check: alpha must lie in [0,1]");
  for (double v : a)
    if (v < 0) throw std::invalid_argument("multout_check: entries must be nonnegative");

  auto powa = [&](double base) { return alpha == 0.0 ? 1.0 : std::pow(base, alpha); };

  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i];

  MultOutChain out;
  out.lhs = std::pow(prefix[n], double(k) + alpha);

  // mid: (k+1) sum over all k-tuples of products times A_min^alpha
  double mid = 0.0;
  std::vector<int> idx(k, 0);
  while (true) {
    double prod = 1.0;
    int mn = n - 1;
    for (int t = 0; t < k; ++t) {
      prod *= a[idx[t]];
      mn = std::min(mn, idx[t]);
    }
    mid += prod * powa(prefix[(k == 0 ? n - 1 : mn) + 1]);
    int t = k - 1;
    while (t >= 0 && ++idx[t] == n) idx[t--] = 0;
    if (t < 0) break;
  }
  out.mid = double(k + 1) * mid;

  // rhs: (k+1)! over ordered chains i1 >= ... >= ik >= j
  double factorial = 1.0;
  for (int t = 2; t <= k + 1; ++t) factorial *= t;
  double rhs = 0.0;
  std::vector<int> chain(k + 1, 0);
  while (true) {
    bool ordered = true;
    for (int t = 0; t + 1 <= k; ++t)
      if (chain[t] < chain[t + 1]) ordered = false;
    if (ordered) {
      double prod = 1.0;
      for (int t = 0; t < k; ++t) prod *= a[chain[t]];
      rhs += prod * powa(a[chain[k]]);
    }
    int t = k;
    while (t >= 0 && ++chain[t] == n) chain[t--] = 0;
    if (t < 0) break;
  }
  out.rhs = factorial * rhs;
  return out;
}

namespace {

Rat rat_pow(const Rat& base, int e) {
  Rat r(1);
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

}  // namespace

bool multout_chain_exact(const std::vector<long long>& a, int k, int alpha01) {
  const int n = int(a.size());
  if (n < 1 || n > 12 || k < 0 || k > 4)
    throw std::invalid_argument("multout_chain_exact: size guard");
  if (alpha01 != 0 && alpha01 != 1)
    throw std::invalid_argument("multout_chain_exact: alpha must be 0 or 1");
  for (long long v : a)
    if (v < 0) throw std::invalid_argument("multout_chain_exact: negative entry");

  std::vector<Rat> prefix(n + 1, Rat(0));
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + Rat(a[i]);
  auto powa = [&](const Rat& base) { return alpha01 == 0 ? Rat(1) : base; };

  Rat lhs = rat_pow(prefix[n], k + alpha01);

  Rat mid(0);
  {
    std::vector<int> idx(k, 0);
    while (true) {
      Rat prod(1);
      int mn = n - 1;
      for (int t = 0; t < k; ++t) {
        prod = prod * Rat(a[idx[t]]);
        mn = std::min(mn, idx[t]);
      }
      mid = mid + prod * powa(prefix[(k == 0 ? n - 1 : mn) + 1]);
      int t = k - 1;
      while (t >= 0 && ++idx[t] == n) idx[t--] = 0;
      if (t < 0 || k == 0) break;
    }
    mid = mid * Rat(k + 1);
  }

  Rat rhs(0);
  {
    long long factorial = 1;
    for (int t = 2; t <= k + 1; ++t) factorial *= t;
    std::vector<int> chain(k + 1, 0);
    while (true) {
      bool ordered = true;
      for (int t = 0; t + 1 <= k; ++t)
        if (chain[t] < chain[t + 1]) ordered = false;
      if (ordered) {
        Rat prod(1);
        for (int t = 0; t < k; ++t) prod = prod * Rat(a[chain[t]]);
        rhs = rhs + prod * powa(Rat(a[chain[k]]));
      }
      int t = k;
      while (t >= 0 && ++chain[t] == n) chain[t--] = 0;
      if (t < 0) break;
    }
    rhs = rhs * Rat(factorial);
  }
  return lhs <= mid && mid <= rhs;
}

LemmaSides sparse_sum_max(const SparseFamily& fam, const Weight& w, NodeId p_cube,
                          double gamma) {
  check_grid(fam.grid, w.grid());
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::invalid_argument("sparse_sum_max: gamma must lie in [0,1)");
  const Grid& g = fam.grid;
  LemmaSides out;
  for (NodeId L : fam.cubes) {
    if (!(L.level >= p_cube.level && g.ancestor(L, L.level - p_cube.level) == p_cube)) continue;
    out.lhs += std::pow(average(w.fn(), L), gamma) * g.node_measure(L.level);
  }
  out.rhs = std::pow(average(w.fn(), p_cube), gamma) * g.node_measure(p_cube.level);
  return out;
}

LemmaSides sparse_sum_joint(const SparseFamily& fam, const Weight& w, const Weight& sigma,
                            NodeId p_cube, double alpha, double beta, double p) {
  check_grid(fam.grid, w.grid());
  check_grid(fam.grid, sigma.grid());
  check_p(p);
  if (!(0.0 <= alpha && alpha <= beta * (p - 1.0) && beta * (p - 1.0) < alpha + p - 1.0))
    throw std::invalid_argument("sparse_sum_joint: need 0 <= alpha <= beta(p-1) < alpha+p-1");
  const Grid& g = fam.grid;
  LemmaSides out;
  for (NodeId L : fam.cubes) {
    if (!(L.level >= p_cube.level && g.ancestor(L, L.level - p_cube.level) == p_cube)) continue;
    out.lhs += std::pow(average(sigma.fn(), L), alpha) * std::pow(average(w.fn(), L), beta) *
               g.node_measure(L.level);
  }
  out.rhs = std::pow(ap_constant(w, sigma, p), alpha / (p - 1.0)) *
            std::pow(average(w.fn(), p_cube), beta - alpha / (p - 1.0)) *
            g.node_measure(p_cube.level);
  return out;
}

}  // namespace sparsedom

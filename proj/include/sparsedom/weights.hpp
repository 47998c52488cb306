#pragma once

#include <vector>

#include "sparsedom/shifts.hpp"
#include "sparsedom/sparse_family.hpp"
#include "sparsedom/step_function.hpp"

namespace sparsedom {

/// A strictly positive step function; carries the measures w(Q).
class Weight {
 public:
  explicit Weight(StepFunction f);

  const StepFunction& fn() const { return f_; }
  const Grid& grid() const { return f_.grid(); }
  double value(uint64_t cell) const { return f_.value(cell); }
  /// w(Q), exact sum of cell masses.
  double mass(NodeId q) const { return integral_on(f_, q); }
  double total_mass() const;

 private:
  StepFunction f_;
};

/// The dual weight w^{1-p'}, computed cellwise.
Weight dual_weight(const Weight& w, double p);

/// (sum |f|^p w m)^{1/p} over the root.
double weighted_norm(const StepFunction& f, const Weight& w, double p);

/// sup_a a * w({|f| > a})^{1/p}.
double weighted_weak_norm(const StepFunction& f, const Weight& w, double p);

/// Dyadic maximal function M f(x) = max over grid cubes Q owning x of <|f|>_Q.
StepFunction maximal(const StepFunction& f);

/// Weighted dyadic maximal M_s f(x) = max over Q owning x of (int_Q |f| s) / s(Q).
StepFunction maximal_weighted(const StepFunction& f, const Weight& sigma);

/// Joint Muckenhoupt constant sup_Q <w>_Q <sigma>_Q^{p-1} over all grid cubes.
double ap_constant(const Weight& w, const Weight& sigma, double p);
double ap_constant_naive(const Weight& w, const Weight& sigma, double p);

/// Fujii-Wilson constant sup_Q (1/s(Q)) int_Q M(1_Q s), with the maximal
/// function of the localized weight (equivalently, the maximal over
/// subcubes of Q).
double ainfty_constant(const Weight& sigma);
double ainfty_constant_naive(const Weight& sigma);

/// Sawyer-type testing constants of a positive shift between weighted
/// spaces: T = sup_Q ||S_Q sigma||_{L^q(omega)} / sigma(Q)^{1/p} and the
/// dual T* with (omega, p', q') in place of (sigma, q, p).
struct TestingConstants {
  double test = 0.0;
  double test_dual = 0.0;
};
TestingConstants testing_constants(const ShiftCoefficients& c, const Weight& sigma,
                                   const Weight& omega, double p, double q);
TestingConstants testing_constants_naive(const ShiftCoefficients& c, const Weight& sigma,
                                         const Weight& omega, double p, double q);

/// ||sum_{L in fam, L within Q} <sigma>_L 1_L||^p_{L^p(w)} divided by
/// [w,sigma]_{A_p} [sigma]_{A_infty} sigma(Q).
double testing_condition_ratio(const SparseFamily& fam, const Weight& w, const Weight& sigma,
                               double p, NodeId q);

/// Maximum of testing_condition_ratio over every grid cube (the constants
/// in the denominator are computed once).
double testing_condition_worst_ratio(const SparseFamily& fam, const Weight& w,
                                     const Weight& sigma, double p);

/// The two-step multiplying-out chain for (sum a_i)^{k+alpha}:
///   lhs <= (k+1) sum_{i1..ik} a_{i1}...a_{ik} (sum_{j<=min} a_j)^alpha
///       <= (k+1)! sum_{i1>=...>=ik>=j} a_{i1}...a_{ik} a_j^alpha.
/// Sizes are guarded (len <= 12, k <= 4).
struct MultOutChain {
  double lhs = 0.0;
  double mid = 0.0;
  double rhs = 0.0;
};
MultOutChain multout_check(const std::vector<double>& a, int k, double alpha);

/// Exact-rational check of the same chain for integer inputs and
/// alpha in {0, 1}; returns true when both inequalities hold exactly.
bool multout_chain_exact(const std::vector<long long>& a, int k, int alpha01);

/// Both sides of the packing lemmas over a sparse family, without the
/// implicit constants:
///   sparse_sum_max:   sum_{L in fam, L <= P} <w>_L^g |L|   vs  <w>_P^g |P|
///   sparse_sum_joint: sum <sigma>_L^a <w>_L^b |L|          vs
///                     [w,sigma]_{A_p}^{a/(p-1)} <w>_P^{b-a/(p-1)} |P|.
struct LemmaSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
LemmaSides sparse_sum_max(const SparseFamily& fam, const Weight& w, NodeId p_cube,
                          double gamma);
LemmaSides sparse_sum_joint(const SparseFamily& fam, const Weight& w, const Weight& sigma,
                            NodeId p_cube, double alpha, double beta, double p);

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

}  // namespace sparsedom

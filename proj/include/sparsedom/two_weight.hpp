#pragma once

#include "sparsedom/corona.hpp"
#include "sparsedom/shifts.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// <T(f sigma), g omega> = sum_Q lambda_Q <f sigma>_Q <g omega>_Q |Q|.
double pairing(const ShiftCoefficients& c, const StepFunction& f, const Weight& sigma,
               const StepFunction& g, const Weight& omega);

/// The same sum split by stopping parents: cubes whose forestG parent sits
/// inside their forestF parent, and the rest. The parts re-sum exactly.
struct PairingSplit {
  double part_g_inside_f = 0.0;
  double part_f_inside_g = 0.0;
  double total() const { return part_g_inside_f + part_f_inside_g; }
};
PairingSplit pairing_split(const ShiftCoefficients& c, const StepFunction& f,
                           const Weight& sigma, const StepFunction& g, const Weight& omega,
                           const CoronaForest& forestF, const CoronaForest& forestG);

/// T(f sigma) as a step function (tree evaluation).
StepFunction apply_weighted(const ShiftCoefficients& c, const StepFunction& f,
                            const Weight& sigma);

/// Exact L2(sigma) -> L2(omega) operator norm of f -> T(f sigma): the
/// largest singular value of the similarity-transformed kernel. Dense
/// Jacobi for grids up to 512 cells, matrix-free power iteration beyond;
/// refuses more than 4096 cells.
double operator_norm_l2(const ShiftCoefficients& c, const Weight& sigma, const Weight& omega);

/// Independent power-iteration route (matrix-free, restarted, seeded);
/// the oracle for the dense path.
double operator_norm_l2_power(const ShiftCoefficients& c, const Weight& sigma,
                              const Weight& omega, uint64_t seed);

/// Best ratio ||T(f sigma)||_{L^q(omega)} / ||f||_{L^p(sigma)} found over a
/// budget of candidates: cube indicators, corona-set profiles, random
/// positives and a local ascent; always a valid lower bound.
double norm_lower_bound_search(const ShiftCoefficients& c, const Weight& sigma,
                               const Weight& omega, double p, double q, int budget,
                               uint64_t seed);

/// The sandwich max(T, T*) <= norm <= 20 (p'q T + p q' T*), with the exact
/// norm at p = q = 2 and the search lower bound otherwise.
struct LsuReport {
  double norm = 0.0;
  bool norm_exact = false;
  double test = 0.0;
  double test_dual = 0.0;
  bool upper_ok = false;   // norm <= 20 (p'q T + pq' T*)
  bool lower_ok = false;   // max(T, T*) <= norm
  double upper_margin = 0.0;
  double lower_margin = 0.0;
};
LsuReport verify_lsu(const ShiftCoefficients& c, const Weight& sigma, const Weight& omega,
                     double p, double q);

}  // namespace sparsedom

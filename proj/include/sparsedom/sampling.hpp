#pragma once

#include "sparsedom/cube.hpp"
#include "sparsedom/rng.hpp"
#include "sparsedom/shifts.hpp"
#include "sparsedom/sparse_family.hpp"
#include "sparsedom/step_function.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

/// Mixed-profile test function: per draw one of uniform values in [-1,1],
/// sparse spikes, or log-uniform positives.
StepFunction random_step_function(const Grid& g, Rng& rng);

/// Nonnegative variant (profiles folded to [0, inf)).
StepFunction random_nonneg_function(const Grid& g, Rng& rng);

/// Cell values exp(U) with U uniform on [-L, L].
Weight random_weight(const Grid& g, Rng& rng, double level_spread);

/// Top-down sampler: each visited cube at level >= min_level is selected
/// with probability q; a candidate is kept only while the cubes kept below
/// its nearest selected ancestor cover at most half of it, so the result is
/// always 1/2-sparse. Deterministic scan order (level, then index).
SparseFamily random_sparse_family(const Grid& g, Rng& rng, double q, int min_level);

/// Independent nonnegative coefficients: Bernoulli(density) times exp(U).
ShiftCoefficients random_shift_coefficients(const Grid& g, Rng& rng, double density);

/// Random cube with corner coordinates in [-4, 4] and side in [1/64, 4],
/// all entries rationals with denominator at most 4096 (keeps the exact
/// search arithmetic far from 128-bit limits).
RealCube random_rational_cube(int d, Rng& rng);

}  // namespace sparsedom

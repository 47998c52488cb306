#pragma once

#include <cstddef>
#include <vector>

namespace sparsedom {

/// Dense symmetric matrix in row-major storage.
struct SymMatrix {
  size_t n = 0;
  std::vector<double> a;  // n*n

  explicit SymMatrix(size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  double& at(size_t i, size_t j) { return a[i * n + j]; }
  double at(size_t i, size_t j) const { return a[i * n + j]; }
};

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations,
/// run to machine precision. Deterministic; destroys the input.
double largest_eigenvalue_jacobi(SymMatrix m);

}  // namespace sparsedom

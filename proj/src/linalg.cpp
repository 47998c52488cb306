#include "sparsedom/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sparsedom {

double largest_eigenvalue_jacobi(SymMatrix m) {
  const size_t n = m.n;
  if (n == 0) return 0.0;
  if (n == 1) return m.at(0, 0);

  auto off_norm2 = [&]() {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) s += m.at(i, j) * m.at(i, j);
    return s;
  };

  double scale = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(m.at(i, j)));
  if (scale == 0.0) return 0.0;
  const double tol = 1e-30 * scale * scale * double(n) * double(n);

  for (int sweep = 0; sweep < 64 && off_norm2() > tol; ++sweep) {
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (apq == 0.0) continue;
        double app = m.at(p, p), aqq = m.at(q, q);
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (size_t i = 0; i < n; ++i) {
          double aip = m.at(i, p), aiq = m.at(i, q);
          m.at(i, p) = c * aip - s * aiq;
          m.at(i, q) = s * aip + c * aiq;
        }
        for (size_t i = 0; i < n; ++i) {
          double api = m.at(p, i), aqi = m.at(q, i);
          m.at(p, i) = c * api - s * aqi;
          m.at(q, i) = s * api + c * aqi;
        }
      }
  }

  double best = m.at(0, 0);
  for (size_t i = 1; i < n; ++i) best = std::max(best, m.at(i, i));
  return best;
}

}  // namespace sparsedom

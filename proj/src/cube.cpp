#include "sparsedom/cube.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsedom {

namespace {

long long floor_div2(long long a) { return a >= 0 ? a / 2 : (a - 1) / 2; }

int parity_sign(int level) { return (level % 2 == 0) ? 1 : -1; }

}  // namespace

DyadicCube::DyadicCube(int d_, int level_, std::vector<long long> index_,
                       std::vector<uint8_t> shift_)
    : d(d_), level(level_), index(std::move(index_)), shift(std::move(shift_)) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("DyadicCube: dimension out of range");
  if (int(index.size()) != d || int(shift.size()) != d)
    throw std::invalid_argument("DyadicCube: index/shift length mismatch");
  for (uint8_t t : shift)
    if (t > 2) throw std::invalid_argument("DyadicCube: shift numerator must be 0, 1 or 2");
}

DyadicCube DyadicCube::unit(int d) {
  return DyadicCube(d, 0, std::vector<long long>(d, 0), std::vector<uint8_t>(d, 0));
}

DyadicCube DyadicCube::child(unsigned offset) const {
  // Children of (l, m): index 2m + (-1)^l t + delta, delta in {0,1}^d.
  const int s = parity_sign(level);
  std::vector<long long> m(d);
  for (int i = 0; i < d; ++i) {
    unsigned bit = (offset >> (d - 1 - i)) & 1u;
    m[i] = 2 * index[i] + (long long)s * shift[i] + bit;
  }
  return DyadicCube(d, level + 1, std::move(m), shift);
}

std::vector<DyadicCube> DyadicCube::children() const {
  std::vector<DyadicCube> out;
  out.reserve(1u << d);
  for (unsigned off = 0; off < (1u << d); ++off) out.push_back(child(off));
  return out;
}

DyadicCube DyadicCube::parent() const {
  const int s = parity_sign(level - 1);
  std::vector<long long> p(d);
  for (int i = 0; i < d; ++i) p[i] = floor_div2(index[i] - (long long)s * shift[i]);
  return DyadicCube(d, level - 1, std::move(p), shift);
}

DyadicCube DyadicCube::ancestor(int k) const {
  if (k < 0) throw std::invalid_argument("ancestor: negative generation count");
  DyadicCube q = *this;
  for (int i = 0; i < k; ++i) q = q.parent();
  return q;
}

Rat DyadicCube::corner(int axis) const {
  // (3 m + (-1)^level t) / (3 * 2^level)
  const int s = parity_sign(level);
  Rat num = Rat(3 * index[axis] + (long long)s * shift[axis]);
  return num / (Rat(3) * Rat::pow2(level));
}

bool DyadicCube::contains(const DyadicCube& other) const {
  if (d != other.d || shift != other.shift) return false;
  if (other.level < level) return false;
  return other.ancestor(other.level - level) == *this;
}

std::string DyadicCube::str() const {
  std::string s = "{l=" + std::to_string(level) + ", m=(";
  for (int i = 0; i < d; ++i) s += (i ? "," : "") + std::to_string(index[i]);
  s += "), t=(";
  for (int i = 0; i < d; ++i) s += (i ? "," : "") + std::to_string(int(shift[i]));
  return s + ")}";
}

RealCube::RealCube(std::vector<Rat> corner_, Rat side_)
    : corner(std::move(corner_)), side(side_) {
  if (corner.empty() || int(corner.size()) > kMaxDim)
    throw std::invalid_argument("RealCube: dimension out of range");
  if (!side.is_positive()) throw std::invalid_argument("RealCube: side must be positive");
}

RealCube concentric_dilate(const RealCube& q, int pow) {
  // corner' = corner - (2^pow - 1) * side / 2
  Rat margin = (Rat::pow2(pow) - Rat(1)) * q.side / Rat(2);
  std::vector<Rat> c(q.corner.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = q.corner[i] - margin;
  return RealCube(std::move(c), q.side * Rat::pow2(pow));
}

bool cube_contains_real(const DyadicCube& r, const RealCube& q) {
  if (r.d != q.dim()) return false;
  Rat rside = r.side();
  for (int i = 0; i < r.d; ++i) {
    Rat lo = r.corner(i);
    if (q.corner[i] < lo) return false;
    if (q.corner[i] + q.side > lo + rside) return false;
  }
  return true;
}

ShiftedContainer find_shifted_container(const RealCube& q, int k) {
  const int d = q.dim();
  if (k < 0) throw std::invalid_argument("find_shifted_container: k must be nonnegative");

  // Admissible levels j: side(q) <= 2^{-j} <= 6 side(q). The ratio 6 < 8
  // leaves at most three powers of two in range. Locate the smallest such j
  // from a floating estimate, then correct with exact comparisons.
  int j = -int(std::floor(std::log2(6.0 * q.side.to_double())));
  while (Rat::pow2(-j) > Rat(6) * q.side) ++j;
  while (Rat::pow2(-(j - 1)) <= Rat(6) * q.side) --j;

  std::vector<int> levels;
  for (int jj = j; Rat::pow2(-jj) >= q.side; ++jj) levels.push_back(jj);

  const RealCube dilated = concentric_dilate(q, k);

  std::vector<uint8_t> alpha(d, 0);
  long long alpha_count = 1;
  for (int i = 0; i < d; ++i) alpha_count *= 3;

  for (long long a = 0; a < alpha_count; ++a) {
    long long rem = a;
    for (int i = d - 1; i >= 0; --i) {  // last axis varies fastest: lexicographic in alpha
      alpha[i] = uint8_t(rem % 3);
      rem /= 3;
    }
    for (int lev : levels) {
      // The level-`lev` cube of D^alpha whose half-open box holds q's corner.
      const int s = (lev % 2 == 0) ? 1 : -1;
      std::vector<long long> m(d);
      for (int i = 0; i < d; ++i) {
        Rat v = (Rat(3) * q.corner[i] * Rat::pow2(lev) - Rat((long long)s * alpha[i])) / Rat(3);
        m[i] = v.floor();
      }
      DyadicCube r(d, lev, std::move(m), alpha);
      if (!cube_contains_real(r, q)) continue;
      if (!cube_contains_real(r.ancestor(k), dilated)) continue;
      return ShiftedContainer{alpha, std::move(r)};
    }
  }
  throw std::logic_error("find_shifted_container: exhaustive search failed (bug)");
}

}  // namespace sparsedom

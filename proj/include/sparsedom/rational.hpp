#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparsedom {

using int128 = __int128;

namespace detail {
inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string128(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), char('0' + int(v % 10)));
    v /= 10;
  }
  return neg ? "-" + s : s;
}
}  // namespace detail

/// Exact rational on 128-bit integers, used by the geometric predicates.
/// Callers keep magnitudes small (coordinates with denominators up to ~1e6
/// and dyadic levels |l| <= 60), so cross products stay far from overflow.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) : num_(n), den_(d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    normalize();
  }

  // 2^e for |e| <= 120.
  static Rat pow2(int e) {
    if (e < -120 || e > 120) throw std::domain_error("Rat::pow2: exponent out of range");
    Rat r;
    if (e >= 0) {
      r.num_ = int128(1) << e;
      r.den_ = 1;
    } else {
      r.num_ = 1;
      r.den_ = int128(1) << (-e);
    }
    return r;
  }

  Rat operator+(const Rat& o) const { return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
  Rat operator-(const Rat& o) const { return make(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
  Rat operator*(const Rat& o) const { return make(num_ * o.num_, den_ * o.den_); }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
    return make(num_ * o.den_, den_ * o.num_);
  }
  Rat operator-() const { return make(-num_, den_); }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Rat& o) const { return num_ * o.den_ <= o.num_ * den_; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  /// Largest integer <= value.
  long long floor() const {
    int128 q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return (long long)q;
  }

  bool is_zero() const { return num_ == 0; }
  bool is_positive() const { return num_ > 0; }

  double to_double() const { return double((long double)num_ / (long double)den_); }

  std::string str() const {
    if (den_ == 1) return detail::to_string128(num_);
    return detail::to_string128(num_) + "/" + detail::to_string128(den_);
  }

 private:
  static Rat make(int128 n, int128 d) {
    Rat r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    int128 g = detail::gcd128(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  int128 num_ = 0;
  int128 den_ = 1;
};

}  // namespace sparsedom

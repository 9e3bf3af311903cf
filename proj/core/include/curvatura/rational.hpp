#pragma once

#include <cstdint>
#include <numeric>

#include "curvatura/types.hpp"

namespace curvatura {

// Exact rational arithmetic on int64 with overflow detection. The symbolic
// reductions in this project only ever need numerators of a few digits times
// powers of ten, so 64 bits (with 128-bit intermediates) is plenty; any
// overflow indicates a logic error and throws rather than silently wrapping.
class Rat {
 public:
  constexpr Rat() : n_(0), d_(1) {}
  Rat(std::int64_t n) : n_(n), d_(1) {}
  Rat(std::int64_t n, std::int64_t d) : n_(n), d_(d) { normalize(); }

  std::int64_t num() const { return n_; }
  std::int64_t den() const { return d_; }
  bool is_zero() const { return n_ == 0; }
  double to_double() const { return static_cast<double>(n_) / static_cast<double>(d_); }
  long double to_long_double() const {
    return static_cast<long double>(n_) / static_cast<long double>(d_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = i128(a.n_) * b.d_ + i128(b.n_) * a.d_;
    __int128 d = i128(a.d_) * b.d_;
    return from128(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + Rat(-b.n_, b.d_); }
  friend Rat operator-(const Rat& a) { return Rat(-a.n_, a.d_); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.n_ == 0) throw invalid_parameter("rational division by zero");
    return from128(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

 private:
  static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

  static Rat from128(__int128 n, __int128 d) {
    if (d == 0) throw invalid_parameter("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw invalid_parameter("rational overflow");
    Rat r;
    r.n_ = static_cast<std::int64_t>(n);
    r.d_ = static_cast<std::int64_t>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }

  void normalize() {
    Rat r = from128(n_, d_);
    n_ = r.n_;
    d_ = r.d_;
  }

  std::int64_t n_, d_;
};

}  // namespace curvatura

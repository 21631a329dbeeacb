#pragma once

#include <cstdint>
#include <stdexcept>

namespace ricci {

/// Exact rational scalar over 128-bit integers. Used as the optional
/// exact-arithmetic mass type for transport conformance tests; masses in
/// those tests are dyadic multiples of small reciprocals, so 128 bits of
/// headroom is ample.
class Rational {
 public:
  using Int = __int128;

  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
  Rational(long long n, long long d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  static Rational from_raw(Int n, Int d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    r.normalize();
    return r;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_raw(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_raw(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_raw(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, long long k) {
    return from_raw(a.num_ * k, a.den_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int a = num_ < 0 ? -num_ : num_;
    Int b = den_;
    while (b != 0) {
      Int t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num_ /= a;
      den_ /= a;
    }
    if (num_ == 0) den_ = 1;
  }

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace ricci

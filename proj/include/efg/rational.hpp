#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace efg {

// Exact rational scalar. Invariant: canonical form, i.e. gcd(num, den) == 1
// and den > 0. Every comparison and every piece of arithmetic is exact;
// nothing in a decision path ever touches floating point.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Rational(long n, long d);
  explicit Rational(const mpz_class& n) : v_(n) {}

  // Accepts "p", "-p", "p/q" with optional sign on p; q > 0 after
  // canonicalization. Rejects empty strings, floats, and zero denominators.
  static std::optional<Rational> parse(std::string_view s);
  static Rational parse_or_throw(const std::string& s);

  static Rational from_mpq(mpq_class v);

  std::string str() const;  // canonical: "p/q", or just "p" when q == 1

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_negative() const { return sgn(v_) < 0; }
  bool is_positive() const { return sgn(v_) > 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational reciprocal() const;  // requires non-zero

  mpz_class floor() const;
  mpz_class ceil() const;

  Rational operator-() const { return from_mpq(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);  // requires o non-zero

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  std::size_t hash() const;

private:
  mpq_class v_;  // kept canonical by construction
};

inline Rational abs(const Rational& x) { return x.is_negative() ? -x : x; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Truncated subtraction: max(x - y, 0).
inline Rational monus(const Rational& x, const Rational& y) {
  Rational d = x - y;
  return d.is_negative() ? Rational(0) : d;
}

// Truncated addition: min(x + y, cap).
inline Rational add_capped(const Rational& x, const Rational& y, const Rational& cap) {
  Rational s = x + y;
  return cap < s ? cap : s;
}

inline Rational midpoint(const Rational& a, const Rational& b) {
  return (a + b) * Rational(1, 2);
}

}  // namespace efg

template <>
struct std::hash<efg::Rational> {
  std::size_t operator()(const efg::Rational& r) const { return r.hash(); }
};

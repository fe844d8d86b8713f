#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace metcomp {

/// Sequence index (n ≥ 1 for regular sequences).
using Index = std::uint64_t;

/// Exact rational number in canonical form (lowest terms, positive
/// denominator). Thin value wrapper around GMP's mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Accepts "p/q" or a plain integer ("-3"). Decimal and exponent forms
  /// are rejected so that every accepted value is exact.
  static Rational parse(std::string_view text);
  static bool try_parse(std::string_view text, Rational& out);

  static Rational from_index(Index n);

  /// "p/q" in lowest terms, q > 0, always with the slash.
  std::string str() const;
  /// Truncated decimal expansion with `digits` fractional digits.
  std::string decimal(unsigned digits) const;

  const mpq_class& mpq() const { return q_; }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }

  /// Smallest integer ≥ value, as an Index. Throws std::domain_error when
  /// the value is not positive or does not fit.
  Index ceil_index() const;

  Rational abs() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

/// 1/n
Rational reciprocal(Index n);

/// Overflow-checked product used for index schedules.
Index checked_mul(Index a, Index b);

}  // namespace metcomp

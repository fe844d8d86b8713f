#include "metcomp/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace metcomp {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  q_ = mpq_class(mpz_class(num), mpz_class(den));
  q_.canonicalize();
}

bool Rational::try_parse(std::string_view text, Rational& out) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den)) return false;
  if (den[0] == '-' || den[0] == '+') return false;
  if (num[0] == '+') num.remove_prefix(1);
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) return false;
  mpq_class q(n, d);
  q.canonicalize();
  out = Rational(q);
  return true;
}

Rational Rational::parse(std::string_view text) {
  Rational r;
  if (!try_parse(text, r)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "' (expected p/q or integer)");
  }
  return r;
}

Rational Rational::from_index(Index n) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return Rational(mpq_class(z));
}

std::string Rational::str() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(unsigned digits) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class num = ::abs(q_.get_num()) * scale;
  mpz_class scaled;
  mpz_tdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q_.get_den().get_mpz_t());
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = sign() < 0 ? "-" : "";
  out += s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return out;
}

Index Rational::ceil_index() const {
  if (sign() <= 0) throw std::domain_error("index bound must be positive, got " + str());
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  if (mpz_sizeinbase(c.get_mpz_t(), 2) > 64) {
    throw std::domain_error("index bound " + c.get_str() + " exceeds 64 bits");
  }
  Index out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, c.get_mpz_t());
  return out;
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational reciprocal(Index n) {
  if (n == 0) throw std::domain_error("reciprocal of zero index");
  return Rational(1) / Rational::from_index(n);
}

Index checked_mul(Index a, Index b) {
  if (a != 0 && b > std::numeric_limits<Index>::max() / a) {
    throw std::domain_error("index schedule overflows 64 bits");
  }
  return a * b;
}

}  // namespace metcomp

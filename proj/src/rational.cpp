#include "efg/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace efg {

Rational::Rational(long n, long d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational Rational::from_mpq(mpq_class v) {
  v.canonicalize();
  Rational r;
  r.v_ = std::move(v);
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  std::string_view num_part = s;
  std::string_view den_part;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num_part = s.substr(0, slash);
    den_part = s.substr(slash + 1);
    if (!all_digits(den_part)) return std::nullopt;
  }
  if (!all_digits(num_part)) return std::nullopt;
  mpz_class n(std::string(num_part), 10);
  mpz_class d = den_part.empty() ? mpz_class(1) : mpz_class(std::string(den_part), 10);
  if (d == 0) return std::nullopt;
  if (neg) n = -n;
  mpq_class q(n, d);
  q.canonicalize();
  return from_mpq(std::move(q));
}

Rational Rational::parse_or_throw(const std::string& s) {
  auto r = parse(s);
  if (!r) throw std::invalid_argument("Rational: cannot parse '" + s + "'");
  return *r;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
  return from_mpq(mpq_class(v_.get_den(), v_.get_num()));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

std::size_t Rational::hash() const {
  std::size_t h = std::hash<std::string>{}(v_.get_num().get_str());
  std::size_t h2 = std::hash<std::string>{}(v_.get_den().get_str());
  return h ^ (h2 * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace efg

#include "multitile/rational.hpp"

#include <cctype>

#include "multitile/errors.hpp"

namespace multitile {

Rational::Rational(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  value_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  if (value_.get_den() == 0) throw DomainError("rational with zero denominator");
  value_.canonicalize();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    neg = text[pos] == '-';
    ++pos;
  }
  if (pos == text.size()) throw ParseError("malformed rational \"" + std::string(whole) + "\"");
  for (std::size_t k = pos; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw ParseError("malformed rational \"" + std::string(whole) + "\"");
    }
  }
  BigInt v(std::string(text.substr(pos)), 10);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
  const auto slash = trimmed.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(trimmed, text));
  const BigInt num = parse_integer(trimmed.substr(0, slash), text);
  const BigInt den = parse_integer(trimmed.substr(slash + 1), text);
  if (den == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(num, den);
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.sign() == 0) throw DomainError("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::pow(long exp) const {
  if (exp < 0) {
    if (sign() == 0) throw DomainError("zero to a negative power");
    return Rational(1) / pow(-exp);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exp));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exp));
  return Rational(num, den);
}

bool Rational::exact_root(unsigned k, Rational& out) const {
  if (k == 0) return false;
  if (sign() < 0 && k % 2 == 0) return false;
  mpz_class num, den;
  const bool num_exact = mpz_root(num.get_mpz_t(), value_.get_num_mpz_t(), k) != 0;
  const bool den_exact = mpz_root(den.get_mpz_t(), value_.get_den_mpz_t(), k) != 0;
  if (!num_exact || !den_exact) return false;
  out = Rational(num, den);
  return true;
}

std::size_t hash_bigint(const BigInt& v) {
  // FNV-1a over the limbs and the sign.
  std::size_t h = 1469598103934665603ull;
  const auto* z = v.get_mpz_t();
  const int size = z->_mp_size;
  h = (h ^ static_cast<std::size_t>(size)) * 1099511628211ull;
  const int n = size < 0 ? -size : size;
  for (int i = 0; i < n; ++i) {
    h = (h ^ static_cast<std::size_t>(z->_mp_d[i])) * 1099511628211ull;
  }
  return h;
}

std::size_t Rational::hash() const {
  const std::size_t a = hash_bigint(value_.get_num());
  const std::size_t b = hash_bigint(value_.get_den());
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace multitile

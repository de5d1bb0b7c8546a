#include "multitile/real.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "multitile/errors.hpp"

namespace multitile {

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(const Rational& value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.raw().get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::log_of(const BigInt& value, mpfr_prec_t bits) {
  if (value <= 0) throw DomainError("logarithm of a non-positive number");
  Real r(bits);
  if (value.fits_ulong_p()) {
    mpfr_log_ui(r.value_, value.get_ui(), MPFR_RNDN);
  } else {
    Real v(bits);
    mpfr_set_z(v.value_, value.get_mpz_t(), MPFR_RNDN);
    mpfr_log(r.value_, v.value_, MPFR_RNDN);
  }
  return r;
}

Real Real::log_of(const Rational& value, mpfr_prec_t bits) {
  if (value.sign() <= 0) throw DomainError("logarithm of a non-positive number");
  Real r = log_of(value.numerator(), bits);
  r -= log_of(value.denominator(), bits);
  return r;
}

Real Real::from_string(const std::string& decimal, mpfr_prec_t bits) {
  Real r(bits);
  if (mpfr_set_str(r.value_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    throw ParseError("malformed decimal \"" + decimal + "\"");
  }
  return r;
}

mpfr_prec_t Real::bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(std::max(digits, 1) * 3.3219280948873623)) + 32;
}

std::string Real::fixed(int digits) const {
  const int n = mpfr_snprintf(nullptr, 0, "%.*RNf", digits, value_);
  std::vector<char> buf(static_cast<std::size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*RNf", digits, value_);
  return std::string(buf.data());
}

std::string Real::significant(int digits) const {
  const int n = mpfr_snprintf(nullptr, 0, "%.*RNg", digits, value_);
  std::vector<char> buf(static_cast<std::size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*RNg", digits, value_);
  return std::string(buf.data());
}

namespace {
mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

Real& Real::operator+=(const Real& o) {
  Real out(wider(*this, o));
  mpfr_add(out.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(out);
}

Real& Real::operator-=(const Real& o) {
  Real out(wider(*this, o));
  mpfr_sub(out.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(out);
}

Real& Real::operator*=(const Real& o) {
  Real out(wider(*this, o));
  mpfr_mul(out.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(out);
}

Real& Real::operator/=(const Real& o) {
  if (o.sign() == 0) throw DomainError("division by zero");
  Real out(wider(*this, o));
  mpfr_div(out.value_, value_, o.value_, MPFR_RNDN);
  return *this = std::move(out);
}

Real Real::abs() const {
  Real out(precision());
  mpfr_abs(out.value_, value_, MPFR_RNDN);
  return out;
}

Real Real::exp() const {
  Real out(precision());
  mpfr_exp(out.value_, value_, MPFR_RNDN);
  return out;
}

Real Real::log() const {
  if (sign() <= 0) throw DomainError("logarithm of a non-positive number");
  Real out(precision());
  mpfr_log(out.value_, value_, MPFR_RNDN);
  return out;
}

}  // namespace multitile

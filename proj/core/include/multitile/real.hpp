#pragma once

#include <string>

#include <mpfr.h>

#include "multitile/rational.hpp"

namespace multitile {

/// Arbitrary-precision binary floating point value (MPFR) with value
/// semantics. Only used for decimal evaluation of exact quantities.
class Real {
public:
  explicit Real(mpfr_prec_t bits = 128);
  Real(const Rational& value, mpfr_prec_t bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  static Real log_of(const BigInt& value, mpfr_prec_t bits);
  static Real log_of(const Rational& value, mpfr_prec_t bits);
  static Real from_string(const std::string& decimal, mpfr_prec_t bits);

  static mpfr_prec_t bits_for_digits(int digits);

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }

  /// Fixed-point rendering with `digits` digits after the decimal point.
  std::string fixed(int digits) const;
  /// Rendering with `digits` significant digits.
  std::string significant(int digits) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  Real abs() const;
  Real exp() const;
  Real log() const;

  bool operator<(const Real& o) const { return mpfr_less_p(value_, o.value_) != 0; }
  bool operator>(const Real& o) const { return mpfr_greater_p(value_, o.value_) != 0; }

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

private:
  mpfr_t value_;
};

}  // namespace multitile

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>

#include "multitile/rational.hpp"
#include "multitile/real.hpp"

namespace multitile {

/// Prime factorization of |value| (value != 0) as prime -> exponent.
std::map<BigInt, long> factorize(const BigInt& value);

/// An exact value sum_p c_p * ln(p) over primes p with rational weights c_p.
///
/// The prime basis makes the representation canonical: ln of distinct primes
/// are linearly independent over Q, so two values are equal iff their term
/// maps are equal, and a value is zero iff it has no terms. Edge lengths
/// ln(1/alpha) and times ln(u) have integer weights; denominators of the
/// asymptotic formulas carry rational weights.
class LogLinearValue {
public:
  using Terms = std::map<BigInt, Rational>;

  LogLinearValue() = default;

  /// ln(r) for a positive rational r.
  static LogLinearValue log_of(const Rational& r);
  /// Builds a value from prime -> weight terms; keys must be primes.
  static LogLinearValue from_prime_terms(Terms terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// -1, 0 or +1. Exact: weights are cleared to integers and the comparison
  /// becomes one between two integers; very large exponents fall back to
  /// adaptive MPFR evaluation, which terminates because a nonzero value is
  /// never exactly zero.
  int sign() const;

  /// True when every weight is an integer, i.e. the value is ln(u) for a
  /// rational u.
  bool is_log_of_rational() const;
  /// u with value == ln(u), when is_log_of_rational().
  std::optional<Rational> exp_rational() const;

  LogLinearValue& operator+=(const LogLinearValue& o);
  LogLinearValue& operator-=(const LogLinearValue& o);
  LogLinearValue& operator*=(const Rational& w);
  friend LogLinearValue operator+(LogLinearValue a, const LogLinearValue& b) { return a += b; }
  friend LogLinearValue operator-(LogLinearValue a, const LogLinearValue& b) { return a -= b; }
  friend LogLinearValue operator*(LogLinearValue a, const Rational& w) { return a *= w; }
  friend LogLinearValue operator*(const Rational& w, LogLinearValue a) { return a *= w; }
  friend LogLinearValue operator-(const LogLinearValue& a) { return a * Rational(-1); }

  friend bool operator==(const LogLinearValue& a, const LogLinearValue& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const LogLinearValue& a, const LogLinearValue& b);

  Real evaluate(mpfr_prec_t bits) const;
  /// Decimal rendering with `digits` digits after the point.
  std::string decimal(int digits) const;
  double to_double() const;

  /// Symbolic rendering: "0", "ln5", "ln(5/3)", "2ln(3/2)" style for integer
  /// weights where possible, otherwise "(4/25)ln2 + (1/4)ln5".
  std::string str() const;
  /// Always the weighted-prime form.
  std::string prime_form() const;

private:
  Terms terms_;
};

}  // namespace multitile

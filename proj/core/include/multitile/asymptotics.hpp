#pragma once

#include <string>
#include <vector>

#include "multitile/errors.hpp"
#include "multitile/graph.hpp"
#include "multitile/rational.hpp"
#include "multitile/scheme.hpp"

namespace multitile {

/// Scale interval with 0 <= a < b <= 1. The densities do not depend on
/// which endpoints are included; the flags only matter for counting.
struct ScaleInterval {
  Rational a;
  Rational b;
  bool left_closed = true;
  bool right_closed = true;

  ScaleInterval(Rational lo, Rational hi, bool lc = true, bool rc = true);
  bool contains(const Rational& scale) const;
  std::string str() const;
};

/// Raised when a density formula is asked of a commensurable scheme.
class CommensurableSchemeError : public SchemeError {
public:
  explicit CommensurableSchemeError(CommensurabilityVerdict verdict);
  const CommensurabilityVerdict& verdict() const { return verdict_; }

private:
  CommensurabilityVerdict verdict_;
};

/// Smallest rule scale that produces a tile of type j.
Rational beta_min(const Scheme& scheme, std::size_t j);

/// The legal scale interval (beta_min, 1] of type j.
ScaleInterval legal_interval(const Scheme& scheme, std::size_t j);

/// A volume fraction: both numerator and denominator are log-linear.
struct VolumeFraction {
  LogLinearValue numerator;
  LogLinearValue denominator;

  Real evaluate(mpfr_prec_t bits) const;
  std::string decimal(int digits) const;
  double to_double() const { return evaluate(128).to_double(); }
};

/// Asymptotic densities of a normalized, irreducible, incommensurable scheme
/// with rational scales. Construction checks the preconditions once.
class Densities {
public:
  explicit Densities(const Scheme& scheme);

  const Scheme& scheme() const { return scheme_; }
  const QMatrix& Q() const { return q_; }
  const CommensurabilityVerdict& verdict() const { return verdict_; }

  /// c_{hj,I}: contribution of edges h -> j.
  Rational phi_coefficient(std::size_t h, std::size_t j, const ScaleInterval& I) const;
  std::vector<Rational> phi_coefficients(std::size_t j, const ScaleInterval& I) const;
  FreqValue phi(std::size_t j, const ScaleInterval& I) const;
  FreqValue phi_total_type(std::size_t j) const;
  /// Sum of phi_total_type over all types.
  FreqValue phi_total() const;

  /// d_{hj,I} as a log-linear value.
  LogLinearValue nu_coefficient(std::size_t h, std::size_t j, const ScaleInterval& I) const;
  VolumeFraction nu(std::size_t j, const ScaleInterval& I) const;
  VolumeFraction nu_total_type(std::size_t j) const;

  /// phi_{j,I} / phi_total(); the shared denominator cancels.
  Rational relative_fraction(std::size_t j, const ScaleInterval& I) const;

  /// Rate of metric paths ending on `edge` inside the sub-interval that
  /// starts ln(start_factor) into the edge and has length ln(length_factor).
  FreqValue edge_interval_rate(std::size_t edge, const Rational& start_factor, const Rational& length_factor) const;
  const SubstGraph& graph() const { return graph_; }

private:
  Scheme scheme_;
  SubstGraph graph_;
  CommensurabilityVerdict verdict_;
  QMatrix q_;
};

}  // namespace multitile

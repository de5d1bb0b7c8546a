#include "multitile/asymptotics.hpp"

#include <optional>

namespace multitile {

ScaleInterval::ScaleInterval(Rational lo, Rational hi, bool lc, bool rc)
    : a(std::move(lo)), b(std::move(hi)), left_closed(lc), right_closed(rc) {
  if (a.sign() < 0 || !(a < b) || b > Rational(1)) {
    throw DomainError("scale interval needs 0 <= a < b <= 1, got " + a.str() + ", " + b.str());
  }
}

bool ScaleInterval::contains(const Rational& scale) const {
  const bool above = left_closed ? scale >= a : scale > a;
  const bool below = right_closed ? scale <= b : scale < b;
  return above && below;
}

std::string ScaleInterval::str() const {
  return std::string(left_closed ? "[" : "(") + a.str() + ", " + b.str() + (right_closed ? "]" : ")");
}

CommensurableSchemeError::CommensurableSchemeError(CommensurabilityVerdict verdict)
    : SchemeError("density formulas need an incommensurable scheme; verdict: " + verdict.summary()),
      verdict_(std::move(verdict)) {}

Rational beta_min(const Scheme& scheme, std::size_t j) {
  if (j >= scheme.size()) throw DomainError("prototile index out of range");
  std::optional<Rational> best;
  for (const auto& rule : scheme.rules) {
    for (const RuleChild& c : rule) {
      if (c.child_type == j && (!best || c.scale < *best)) best = c.scale;
    }
  }
  if (!best) throw SchemeError("prototile " + scheme.prototiles[j].label + " is never produced by the rule");
  return *best;
}

ScaleInterval legal_interval(const Scheme& scheme, std::size_t j) {
  return ScaleInterval(beta_min(scheme, j), Rational(1), false, true);
}

Real VolumeFraction::evaluate(mpfr_prec_t bits) const { return numerator.evaluate(bits) / denominator.evaluate(bits); }

std::string VolumeFraction::decimal(int digits) const {
  return evaluate(Real::bits_for_digits(digits + 10)).fixed(digits);
}

Densities::Densities(const Scheme& scheme) : scheme_(scheme), graph_(build_graph(scheme)) {
  if (!is_normalized(scheme_)) throw DomainError("density formulas need a normalized scheme");
  verdict_ = classify_commensurability(graph_);
  if (!verdict_.incommensurable()) throw CommensurableSchemeError(verdict_);
  q_ = compute_Q(scheme_);
}

namespace {

const Rational& max_of(const Rational& x, const Rational& y) { return x < y ? y : x; }

}  // namespace

Rational Densities::phi_coefficient(std::size_t h, std::size_t j, const ScaleInterval& I) const {
  const long d = scheme_.dimension;
  Rational sum;
  for (const RuleChild& c : scheme_.rules.at(h)) {
    if (c.child_type != j) continue;
    const Rational& eta = max_of(I.a, c.scale);
    const Rational& mu = max_of(I.b, c.scale);
    sum += c.scale.pow(d) * (eta.pow(-d) - mu.pow(-d));
  }
  return sum / Rational(d);
}

std::vector<Rational> Densities::phi_coefficients(std::size_t j, const ScaleInterval& I) const {
  std::vector<Rational> out;
  for (std::size_t h = 0; h < scheme_.size(); ++h) out.push_back(phi_coefficient(h, j, I));
  return out;
}

FreqValue Densities::phi(std::size_t j, const ScaleInterval& I) const {
  if (j >= scheme_.size()) throw DomainError("prototile index out of range");
  Rational num;
  for (std::size_t h = 0; h < scheme_.size(); ++h) num += phi_coefficient(h, j, I) * q_.numerator[0][h];
  return {num, q_.denominator};
}

FreqValue Densities::phi_total_type(std::size_t j) const {
  if (j >= scheme_.size()) throw DomainError("prototile index out of range");
  const long d = scheme_.dimension;
  Rational num;
  for (std::size_t h = 0; h < scheme_.size(); ++h) {
    Rational c;
    for (const RuleChild& child : scheme_.rules[h]) {
      if (child.child_type == j) c += Rational(1) - child.scale.pow(d);
    }
    num += c / Rational(d) * q_.numerator[0][h];
  }
  return {num, q_.denominator};
}

FreqValue Densities::phi_total() const {
  Rational num;
  for (std::size_t j = 0; j < scheme_.size(); ++j) num += phi_total_type(j).numerator;
  return {num, q_.denominator};
}

LogLinearValue Densities::nu_coefficient(std::size_t h, std::size_t j, const ScaleInterval& I) const {
  const long d = scheme_.dimension;
  LogLinearValue sum;
  for (const RuleChild& c : scheme_.rules.at(h)) {
    if (c.child_type != j) continue;
    const Rational& eta = max_of(I.a, c.scale);
    const Rational& mu = max_of(I.b, c.scale);
    sum += LogLinearValue::log_of(mu / eta) * c.scale.pow(d);
  }
  return sum;
}

VolumeFraction Densities::nu(std::size_t j, const ScaleInterval& I) const {
  if (j >= scheme_.size()) throw DomainError("prototile index out of range");
  LogLinearValue num;
  for (std::size_t h = 0; h < scheme_.size(); ++h) num += nu_coefficient(h, j, I) * q_.numerator[0][h];
  return {num, q_.denominator};
}

VolumeFraction Densities::nu_total_type(std::size_t j) const {
  if (j >= scheme_.size()) throw DomainError("prototile index out of range");
  const long d = scheme_.dimension;
  LogLinearValue num;
  for (std::size_t h = 0; h < scheme_.size(); ++h) {
    for (const RuleChild& c : scheme_.rules[h]) {
      if (c.child_type != j) continue;
      num += LogLinearValue::log_of(Rational(1) / c.scale) * (c.scale.pow(d) * q_.numerator[0][h]);
    }
  }
  return {num, q_.denominator};
}

Rational Densities::relative_fraction(std::size_t j, const ScaleInterval& I) const {
  return phi(j, I).numerator / phi_total().numerator;
}

FreqValue Densities::edge_interval_rate(std::size_t edge, const Rational& start_factor,
                                        const Rational& length_factor) const {
  const GraphEdge& e = graph_.edges.at(edge);
  if (start_factor < Rational(1) || length_factor < Rational(1)) {
    throw DomainError("edge sub-interval needs non-negative offset and length");
  }
  if (start_factor * length_factor * e.scale > Rational(1)) {
    throw DomainError("sub-interval exceeds the edge length " + e.length.str());
  }
  const long d = scheme_.dimension;
  const Rational factor = start_factor.pow(-d) * (Rational(1) - length_factor.pow(-d)) / Rational(d);
  return {factor * q_.numerator[0][e.from], q_.denominator};
}

}  // namespace multitile

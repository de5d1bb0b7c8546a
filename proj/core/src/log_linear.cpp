#include "multitile/log_linear.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "multitile/errors.hpp"

namespace multitile {

namespace {

constexpr unsigned long kTrialLimit = 1ul << 16;
constexpr double kExactBitLimit = 1 << 22;

bool is_probable_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

// Pollard-Brent; n is odd, composite, and has no factor below kTrialLimit.
BigInt find_factor(const BigInt& n) {
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const BigInt& v) {
      BigInt out = v * v + c;
      mpz_mod(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
      return out;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          BigInt diff = x - y;
          q = q * abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        BigInt diff = x - ys;
        BigInt a = abs(diff);
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const BigInt& n, std::map<BigInt, long>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += 1;
    return;
  }
  const BigInt d = find_factor(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

std::map<BigInt, long> factorize_uncached(const BigInt& value) {
  std::map<BigInt, long> out;
  BigInt n = abs(value);
  if (n == 0) throw DomainError("factorization of zero");
  for (unsigned long p = 2; p < kTrialLimit && n > 1; p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out[BigInt(p)] += 1;
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) factor_into(n, out);
  return out;
}

struct BigIntHash {
  std::size_t operator()(const BigInt& v) const { return hash_bigint(v); }
};

}  // namespace

std::map<BigInt, long> factorize(const BigInt& value) {
  static std::mutex mutex;
  static std::unordered_map<BigInt, std::map<BigInt, long>, BigIntHash> cache;
  if (abs(value) < BigInt(1u << 20)) {
    const std::lock_guard lock(mutex);
    auto it = cache.find(abs(value));
    if (it != cache.end()) return it->second;
  }
  auto result = factorize_uncached(value);
  if (abs(value) < BigInt(1u << 20)) {
    const std::lock_guard lock(mutex);
    cache.emplace(abs(value), result);
  }
  return result;
}

LogLinearValue LogLinearValue::log_of(const Rational& r) {
  if (r.sign() <= 0) throw DomainError("logarithm of non-positive rational " + r.str());
  LogLinearValue out;
  for (const auto& [p, e] : factorize(r.numerator())) out.terms_[p] += Rational(e);
  for (const auto& [p, e] : factorize(r.denominator())) out.terms_[p] -= Rational(e);
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second.sign() == 0; });
  return out;
}

LogLinearValue LogLinearValue::from_prime_terms(Terms terms) {
  LogLinearValue out;
  out.terms_ = std::move(terms);
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second.sign() == 0; });
  return out;
}

LogLinearValue& LogLinearValue::operator+=(const LogLinearValue& o) {
  for (const auto& [p, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second.sign() == 0) terms_.erase(it);
    }
  }
  return *this;
}

LogLinearValue& LogLinearValue::operator-=(const LogLinearValue& o) {
  for (const auto& [p, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(p, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second.sign() == 0) terms_.erase(it);
    }
  }
  return *this;
}

LogLinearValue& LogLinearValue::operator*=(const Rational& w) {
  if (w.sign() == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= w;
  return *this;
}

int LogLinearValue::sign() const {
  if (terms_.empty()) return 0;
  BigInt lcm = 1;
  for (const auto& [p, c] : terms_) {
    const BigInt den = c.denominator();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
  }
  double bits = 0;
  for (const auto& [p, c] : terms_) {
    const BigInt e = c.numerator() * (lcm / c.denominator());
    bits += std::fabs(e.get_d()) * static_cast<double>(mpz_sizeinbase(p.get_mpz_t(), 2));
  }
  if (bits <= kExactBitLimit) {
    BigInt pos = 1, neg = 1;
    for (const auto& [p, c] : terms_) {
      const BigInt e = c.numerator() * (lcm / c.denominator());
      BigInt power;
      mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), BigInt(abs(e)).get_ui());
      if (e > 0) pos *= power; else neg *= power;
    }
    const int c = cmp(pos, neg);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
  }
  // Value is nonzero, so some precision separates it from zero.
  double magnitude = 0;
  for (const auto& [p, c] : terms_) magnitude += std::fabs(c.to_double()) * (std::log(p.get_d()) + 1);
  for (mpfr_prec_t prec = 256;; prec *= 2) {
    const Real v = evaluate(prec);
    Real bound(Rational(static_cast<long>(std::ceil(magnitude)) + 1) * Rational(static_cast<long>(terms_.size()) + 1), prec);
    mpfr_mul_2si(bound.get(), bound.get(), 8 - static_cast<long>(prec), MPFR_RNDU);
    if (v.abs() > bound) return v.sign();
    if (prec > (1 << 24)) throw DomainError("sign of log-linear value could not be resolved");
  }
}

std::strong_ordering operator<=>(const LogLinearValue& a, const LogLinearValue& b) {
  const int s = (a - b).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool LogLinearValue::is_log_of_rational() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_integer(); });
}

std::optional<Rational> LogLinearValue::exp_rational() const {
  if (!is_log_of_rational()) return std::nullopt;
  BigInt num = 1, den = 1;
  for (const auto& [p, c] : terms_) {
    const BigInt e = c.numerator();
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), BigInt(abs(e)).get_ui());
    if (e > 0) num *= power; else den *= power;
  }
  return Rational(num, den);
}

Real LogLinearValue::evaluate(mpfr_prec_t bits) const {
  Real sum(bits);
  for (const auto& [p, c] : terms_) sum += Real(c, bits) * Real::log_of(p, bits);
  return sum;
}

std::string LogLinearValue::decimal(int digits) const {
  return evaluate(Real::bits_for_digits(digits + 10)).fixed(digits);
}

double LogLinearValue::to_double() const { return evaluate(96).to_double(); }

std::string LogLinearValue::prime_form() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    const bool negative = c.sign() < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    if (mag != Rational(1)) {
      if (mag.is_integer()) os << mag.str();
      else os << "(" << mag.str() << ")";
    }
    os << "ln" << p.get_str();
    first = false;
  }
  return os.str();
}

std::string LogLinearValue::str() const {
  if (terms_.empty()) return "0";
  if (auto u = exp_rational()) {
    if (u->is_integer()) return "ln" + u->str();
    return "ln(" + u->str() + ")";
  }
  return prime_form();
}

}  // namespace multitile

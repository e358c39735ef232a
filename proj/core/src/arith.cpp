#include "heckelab/arith.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace heckelab {

FactoredInt::FactoredInt(std::int64_t n) : value_(n) {
  if (n < 1) throw std::invalid_argument("FactoredInt: n must be positive, got " + std::to_string(n));
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    factors_.push_back({p, e});
  }
  if (m > 1) factors_.push_back({m, 1});
}

FactoredInt FactoredInt::from_factors(std::vector<PrimePower> factors) {
  FactoredInt out;
  std::int64_t v = 1;
  std::int64_t last = 1;
  for (const auto& f : factors) {
    if (f.prime <= last || f.exponent < 1)
      throw std::invalid_argument("FactoredInt: factors must have increasing primes and positive exponents");
    last = f.prime;
    for (int i = 0; i < f.exponent; ++i) {
      if (v > std::numeric_limits<std::int64_t>::max() / f.prime)
        throw std::overflow_error("FactoredInt: value overflows int64");
      v *= f.prime;
    }
  }
  out.value_ = v;
  out.factors_ = std::move(factors);
  return out;
}

bool FactoredInt::is_squarefree() const {
  for (const auto& f : factors_)
    if (f.exponent > 1) return false;
  return true;
}

int FactoredInt::exponent_of(std::int64_t p) const {
  for (const auto& f : factors_)
    if (f.prime == p) return f.exponent;
  return 0;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

FactorSieve::FactorSieve(std::int64_t limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("FactorSieve: limit must be positive");
  if (limit > std::numeric_limits<std::int32_t>::max())
    throw std::invalid_argument("FactorSieve: limit too large");
  spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  spf_[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::int32_t>(i);
    for (std::int64_t j = i * i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::int32_t>(i);
  }
}

FactoredInt FactorSieve::factor(std::int64_t n) const {
  if (n < 1 || n > limit_) throw std::out_of_range("FactorSieve: n outside sieve range");
  std::vector<PrimePower> f;
  while (n > 1) {
    const std::int64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  return FactoredInt::from_factors(std::move(f));
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t ipow_saturating(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::int64_t>::max() / base)
      return std::numeric_limits<std::int64_t>::max();
    r *= base;
  }
  return r;
}

}  // namespace heckelab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace heckelab {

struct PrimePower {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A positive integer together with its prime factorization (primes strictly increasing).
class FactoredInt {
 public:
  FactoredInt() = default;
  /// Factors n by trial division. Throws std::invalid_argument for n < 1.
  explicit FactoredInt(std::int64_t n);
  /// Builds from a factorization; validates ordering and positivity.
  static FactoredInt from_factors(std::vector<PrimePower> factors);

  std::int64_t value() const { return value_; }
  std::span<const PrimePower> factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  bool is_squarefree() const;
  int omega() const { return static_cast<int>(factors_.size()); }
  int exponent_of(std::int64_t p) const;
  std::int64_t largest_prime() const { return factors_.empty() ? 1 : factors_.back().prime; }

 private:
  std::int64_t value_ = 1;
  std::vector<PrimePower> factors_;
};

std::vector<std::int64_t> primes_up_to(std::int64_t n);

/// Smallest-prime-factor sieve for fast repeated factorization below a bound.
class FactorSieve {
 public:
  explicit FactorSieve(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  bool is_prime(std::int64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
  std::int64_t smallest_prime_factor(std::int64_t n) const { return spf_[n]; }
  FactoredInt factor(std::int64_t n) const;

 private:
  std::int64_t limit_;
  std::vector<std::int32_t> spf_;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Exact integer power with overflow saturation to INT64_MAX.
std::int64_t ipow_saturating(std::int64_t base, int exp);

}  // namespace heckelab

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace heckelab {

namespace detail {
// Truncated product of integer coefficient vectors; switches to Kronecker
// substitution through GMP's big-integer multiply for long inputs.
std::vector<mpz_class> multiply_integer(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                        std::size_t precision);
std::vector<mpz_class> multiply_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                           std::size_t precision);
std::vector<mpz_class> multiply_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                          std::size_t precision);
}  // namespace detail

/// Power series in q truncated at q^precision: coefficients a(0..N-1).
template <class Coeff>
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::size_t precision) : coeffs_(precision) {
    if (precision == 0) throw std::invalid_argument("PowerSeries: precision must be positive");
  }
  explicit PowerSeries(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("PowerSeries: precision must be positive");
  }

  static PowerSeries one(std::size_t precision) {
    PowerSeries s(precision);
    s.coeffs_[0] = 1;
    return s;
  }

  std::size_t precision() const { return coeffs_.size(); }
  const Coeff& operator[](std::size_t n) const { return coeffs_.at(n); }
  Coeff& operator[](std::size_t n) { return coeffs_.at(n); }
  const std::vector<Coeff>& coefficients() const { return coeffs_; }

  PowerSeries truncated(std::size_t precision) const {
    if (precision == 0 || precision > coeffs_.size())
      throw std::invalid_argument("PowerSeries::truncated: invalid precision");
    return PowerSeries(std::vector<Coeff>(coeffs_.begin(), coeffs_.begin() + precision));
  }

  PowerSeries& operator+=(const PowerSeries& o) {
    shrink_to(o.precision());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  PowerSeries& operator-=(const PowerSeries& o) {
    shrink_to(o.precision());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  PowerSeries& operator*=(const Coeff& c) {
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, const Coeff& c) { return a *= c; }

  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    const std::size_t n = std::min(a.precision(), b.precision());
    if constexpr (std::is_same_v<Coeff, mpz_class>) {
      return PowerSeries(detail::multiply_integer(a.coeffs_, b.coeffs_, n));
    } else {
      std::vector<Coeff> out(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
      return PowerSeries(std::move(out));
    }
  }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void shrink_to(std::size_t n) {
    if (n < coeffs_.size()) coeffs_.resize(n);
  }

  std::vector<Coeff> coeffs_;
};

template <class Coeff>
PowerSeries<Coeff> power(const PowerSeries<Coeff>& base, unsigned exponent) {
  PowerSeries<Coeff> result = PowerSeries<Coeff>::one(base.precision());
  PowerSeries<Coeff> sq = base;
  while (exponent > 0) {
    if (exponent & 1U) result = result * sq;
    exponent >>= 1U;
    if (exponent > 0) sq = sq * sq;
  }
  return result;
}

using ZSeries = PowerSeries<mpz_class>;
using QSeries = PowerSeries<mpq_class>;

inline QSeries to_rational(const ZSeries& s) {
  std::vector<mpq_class> c(s.precision());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = s[i];
  return QSeries(std::move(c));
}

}  // namespace heckelab

#include "heckelab/modular.hpp"

#include <stdexcept>
#include <string>

#include "heckelab/arith.hpp"
#include "heckelab/errors.hpp"

namespace heckelab {
namespace {

// sigma_s(n) for 1 <= n < N via multiplicativity over a smallest-prime-factor sieve.
std::vector<mpz_class> divisor_power_sums(unsigned s, std::size_t precision) {
  std::vector<mpz_class> sigma(precision);
  if (precision <= 1) return sigma;
  const auto limit = static_cast<std::int64_t>(precision - 1);
  if (limit < 2) {
    sigma[1] = 1;
    return sigma;
  }
  const FactorSieve sieve(limit);
  sigma[1] = 1;
  mpz_class pp;
  for (std::int64_t n = 2; n <= limit; ++n) {
    const std::int64_t p = sieve.smallest_prime_factor(n);
    std::int64_t m = n;
    int a = 0;
    while (m % p == 0) {
      m /= p;
      ++a;
    }
    if (m == 1) {
      // sigma_s(p^a) = sigma_s(p^{a-1}) + p^{as}
      mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a) * s);
      sigma[n] = sigma[n / p] + pp;
    } else {
      sigma[n] = sigma[n / m] * sigma[m];
    }
  }
  return sigma;
}

}  // namespace

mpq_class bernoulli(unsigned n) {
  // Akiyama-Tanigawa gives B_1 = +1/2; flip it to the usual convention.
  std::vector<mpq_class> a(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (unsigned j = m; j >= 1; --j) {
      a[j - 1] = static_cast<unsigned long>(j) * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
  }
  return n == 1 ? mpq_class(-1, 2) : a[0];
}

ZSeries eisenstein(int weight, std::size_t precision) {
  if (weight != 4 && weight != 6)
    throw std::invalid_argument("eisenstein: weight must be 4 or 6, got " + std::to_string(weight));
  if (precision < 1) throw std::invalid_argument("eisenstein: precision must be positive");
  const long factor = weight == 4 ? 240 : -504;
  auto sigma = divisor_power_sums(static_cast<unsigned>(weight - 1), precision);
  ZSeries e(precision);
  e[0] = 1;
  for (std::size_t n = 1; n < precision; ++n) e[n] = factor * sigma[n];
  return e;
}

ScaledEisenstein scaled_eisenstein(int weight, std::size_t precision) {
  if (weight < 4 || weight % 2 != 0)
    throw std::invalid_argument("scaled_eisenstein: weight must be even and >= 4");
  const mpq_class factor = mpq_class(-2 * weight) / bernoulli(static_cast<unsigned>(weight));
  auto sigma = divisor_power_sums(static_cast<unsigned>(weight - 1), precision);
  ScaledEisenstein out{ZSeries(precision), factor.get_den()};
  out.series[0] = out.scale;
  const mpz_class num = factor.get_num();
  for (std::size_t n = 1; n < precision; ++n) out.series[n] = num * sigma[n];
  return out;
}

ZSeries delta_expansion(std::size_t precision) {
  if (precision < 2) throw PrecisionError("delta_expansion: precision must be at least 2");
  const ZSeries e4 = eisenstein(4, precision);
  const ZSeries e6 = eisenstein(6, precision);
  ZSeries d = e4 * e4 * e4 - e6 * e6;
  for (std::size_t n = 0; n < precision; ++n) mpz_divexact_ui(d[n].get_mpz_t(), d[n].get_mpz_t(), 1728);
  return d;
}

ZSeries delta_eta_product(std::size_t precision) {
  if (precision < 2) throw PrecisionError("delta_eta_product: precision must be at least 2");
  // prod (1 - q^n) = sum_m (-1)^m q^{m(3m-1)/2}, m over all integers
  const std::size_t len = precision - 1;
  ZSeries euler(len);
  euler[0] = 1;
  for (long m = 1;; ++m) {
    const auto e1 = static_cast<std::size_t>(m * (3 * m - 1) / 2);
    const auto e2 = static_cast<std::size_t>(m * (3 * m + 1) / 2);
    if (e1 >= len) break;
    const int sign = m % 2 == 0 ? 1 : -1;
    euler[e1] += sign;
    if (e2 < len) euler[e2] += sign;
  }
  const ZSeries e24 = power(euler, 24);
  ZSeries d(precision);
  for (std::size_t n = 1; n < precision; ++n) d[n] = e24[n - 1];
  return d;
}

int cusp_form_dimension(int k) {
  if (k < 12 || k % 2 != 0) return 0;
  return k % 12 == 2 ? k / 12 - 1 : k / 12;
}

namespace {

// k = 12 D + 4a + 6b with a in {0,1,2}, b in {0,1}
void weight_split(int k, int& a, int& b, int& dim) {
  switch (k % 12) {
    case 0: a = 0; b = 0; break;
    case 2: a = 2; b = 1; break;
    case 4: a = 1; b = 0; break;
    case 6: a = 0; b = 1; break;
    case 8: a = 2; b = 0; break;
    default: a = 1; b = 1; break;
  }
  dim = (k - 4 * a - 6 * b) / 12;
}

}  // namespace

ModularBasis miller_basis(int k, std::size_t precision) {
  if (k < 12 || k % 2 != 0) throw std::invalid_argument("miller_basis: weight must be even and >= 12");
  int a = 0, b = 0, dim = 0;
  weight_split(k, a, b, dim);
  if (precision <= static_cast<std::size_t>(dim) + 1)
    throw PrecisionError("miller_basis: precision must exceed dim + 1");

  const ZSeries e4 = eisenstein(4, precision);
  const ZSeries e6 = eisenstein(6, precision);
  const ZSeries delta = delta_expansion(precision);
  const ZSeries e6sq = e6 * e6;
  const ZSeries tail = power(e4, static_cast<unsigned>(a)) * power(e6, static_cast<unsigned>(b));

  ModularBasis basis;
  basis.weight = k;
  basis.forms.reserve(dim);
  ZSeries delta_pow = ZSeries::one(precision);
  for (int j = 1; j <= dim; ++j) {
    delta_pow = delta_pow * delta;
    basis.forms.push_back(delta_pow * power(e6sq, static_cast<unsigned>(dim - j)) * tail);
  }
  // forms[i] = q^{i+1} + ...; clear coefficients above the diagonal
  for (int i = dim - 1; i >= 0; --i) {
    for (int j = i + 1; j < dim; ++j) {
      const mpz_class c = basis.forms[i][j + 1];
      if (c == 0) continue;
      for (std::size_t n = 0; n < precision; ++n) basis.forms[i][n] -= c * basis.forms[j][n];
    }
  }
  return basis;
}

ZSeries apply_hecke(const ZSeries& f, int k, std::int64_t p) {
  const std::size_t n_out = (f.precision() - 1) / static_cast<std::size_t>(p) + 1;
  ZSeries out(n_out);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
  for (std::size_t n = 0; n < n_out; ++n) {
    out[n] = f[n * static_cast<std::size_t>(p)];
    if (n % static_cast<std::size_t>(p) == 0) out[n] += pk * f[n / static_cast<std::size_t>(p)];
  }
  return out;
}

RationalMatrix hecke_matrix(const ModularBasis& basis, std::int64_t p) {
  const std::size_t d = basis.dimension();
  if (p < 2 || !FactoredInt(p).is_squarefree() || FactoredInt(p).omega() != 1)
    throw std::invalid_argument("hecke_matrix: p must be prime");
  if (basis.precision() < static_cast<std::size_t>(p) * (d + 1) + 1)
    throw PrecisionError("hecke_matrix: basis precision must be at least p(d+1)+1");
  RationalMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const ZSeries t = apply_hecke(basis.forms[i], basis.weight, p);
    for (std::size_t j = 0; j < d; ++j) m(i, j) = t[j + 1];
  }
  return m;
}

}  // namespace heckelab

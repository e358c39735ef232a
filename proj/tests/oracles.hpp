#pragma once

// Independent reference computations used by the tests. Nothing here calls into heckelab.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

inline std::vector<mpz_class> naive_multiply(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                             std::size_t n) {
  std::vector<mpz_class> c(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline std::int64_t sigma(std::int64_t n, int k) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) {
      std::int64_t t = 1;
      for (int i = 0; i < k; ++i) t *= d;
      s += t;
    }
  return s;
}

inline std::vector<mpz_class> eisenstein(int k, std::size_t n) {
  std::vector<mpz_class> e(n, 0);
  e[0] = 1;
  const long c = k == 4 ? 240 : -504;
  for (std::size_t i = 1; i < n; ++i) e[i] = mpz_class(c) * mpz_class(std::to_string(sigma(static_cast<std::int64_t>(i), k - 1)));
  return e;
}

// q prod (1 - q^n)^24, by repeated multiplication with each factor (1 - q^n)
inline std::vector<mpz_class> tau_eta(std::size_t n) {
  std::vector<mpz_class> p(n, 0);
  p[0] = 1;
  for (std::size_t m = 1; m < n; ++m)
    for (int r = 0; r < 24; ++r)
      for (std::size_t i = n - 1; i >= m; --i) p[i] -= p[i - m];
  std::vector<mpz_class> t(n, 0);
  for (std::size_t i = 1; i < n; ++i) t[i] = p[i - 1];
  return t;
}

// dim S_k as (number of (a, b) >= 0 with 4a + 6b = k) - 1
inline int cusp_dimension(int k) {
  int count = 0;
  for (int a = 0; 4 * a <= k; ++a)
    if ((k - 4 * a) % 6 == 0) ++count;
  return count - 1;
}

inline double chebyshev_u(double theta, int a) { return std::sin((a + 1) * theta) / std::sin(theta); }

// Gauss rule for the Sato-Tate measure: exact on U-polynomials of degree <= 2m - 1.
struct SatoTateRule {
  std::vector<double> nodes, weights;
  explicit SatoTateRule(int m) {
    for (int j = 1; j <= m; ++j) {
      const double t = j * std::numbers::pi / (m + 1);
      nodes.push_back(t);
      weights.push_back(2.0 / (m + 1) * std::sin(t) * std::sin(t));
    }
  }
};

// E[f(theta_1, ..., theta_r)] over independent Sato-Tate angles by a tensor Gauss rule
inline double sato_tate_expectation(int r, int m, const std::function<double(const std::vector<double>&)>& f) {
  const SatoTateRule rule(m);
  std::vector<int> idx(static_cast<std::size_t>(r), 0);
  std::vector<double> th(static_cast<std::size_t>(r));
  double total = 0;
  while (true) {
    double w = 1;
    for (int i = 0; i < r; ++i) {
      th[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    total += w * f(th);
    int i = 0;
    while (i < r && ++idx[i] == m) idx[i++] = 0;
    if (i == r) break;
  }
  return total;
}

// Dickman rho on a grid of step 1/n over [0, umax] from u rho(u) = int_{u-1}^u rho (trapezoid)
inline std::vector<double> dickman(double umax, int n) {
  const double h = 1.0 / n;
  const auto total = static_cast<std::size_t>(std::llround(umax * n));
  std::vector<double> r(total + 1, 1.0);
  double window = 0;  // sum r[i-n+1 .. i-1]
  for (std::size_t i = 1; i < static_cast<std::size_t>(n) && i <= total; ++i) window += r[i];
  for (std::size_t i = static_cast<std::size_t>(n) + 1; i <= total; ++i) {
    window += r[i - 1] - r[i - n];
    const double u = static_cast<double>(i) * h;
    r[i] = h * (r[i - n] / 2 + window) / (u - h / 2);
  }
  return r;
}

// rho_2(u) = int_0^u rho(t) rho(u - t) dt
inline double rho2_convolution(const std::vector<double>& rho, int n, double u) {
  const auto m = static_cast<std::size_t>(std::llround(u * n));
  double s = 0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    s += w * rho[i] * rho[m - i];
  }
  return s / n;
}

inline std::int64_t modinv(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
  while (a1) {
    const std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_tuple(a1, g - q * a1);
    std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
  }
  return ((x % m) + m) % m;
}

inline double kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
  double s = 0;
  for (std::int64_t x = 1; x <= c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    const std::int64_t xi = modinv(x, c);
    s += std::cos(2 * std::numbers::pi * static_cast<double>((m * x + n * xi) % c) / static_cast<double>(c));
  }
  return s;
}

// sum_f omega_f lambda_f(m) lambda_f(n) from the Kloosterman-Bessel side of the trace formula
inline double petersson_kloosterman(int k, std::int64_t m, std::int64_t n, std::int64_t c_max = 400) {
  double s = 0;
  for (std::int64_t c = 1; c <= c_max; ++c) {
    const double arg = 4 * std::numbers::pi * std::sqrt(static_cast<double>(m * n)) / static_cast<double>(c);
    s += kloosterman(m, n, c) / static_cast<double>(c) * std::cyl_bessel_j(static_cast<double>(k - 1), arg);
  }
  const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  return (m == n ? 1.0 : 0.0) + 2 * std::numbers::pi * sign * s;
}

}  // namespace oracle

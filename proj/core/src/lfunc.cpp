#include "heckelab/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "heckelab/arith.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/hecke_algebra.hpp"

namespace heckelab {

namespace {

Complex power_minus(double n, Complex s) { return std::exp(-s * std::log(n)); }

}  // namespace

double divisor_tail_bound(double sigma, std::int64_t n) {
  if (!(sigma > 1)) throw std::invalid_argument("divisor_tail_bound: sigma must exceed 1");
  // partial summation with sum_{m <= t} tau(m) <= t (log t + 1)
  const double N = static_cast<double>(std::max<std::int64_t>(n, 1));
  const double d = sigma - 1;
  return sigma * std::pow(N, -d) * ((std::log(N) + 1) / d + 1 / (d * d));
}

TruncatedL truncated_L(const EigenForm& form, Complex s, std::int64_t terms) {
  if (terms < 2) throw std::invalid_argument("truncated_L: need at least two terms");
  if (s.real() < 1 + 1 / std::log(static_cast<double>(terms)))
    throw std::invalid_argument("truncated_L: Re s must be at least 1 + 1/log N for the tail bound");
  const auto lam = lambda_table(form, terms);
  TruncatedL out;
  out.terms = terms;
  Complex acc = 0;
  for (std::int64_t n = 1; n <= terms; ++n) {
    if (lam[n] == 0.0) continue;
    acc += lam[n] * power_minus(static_cast<double>(n), s);
  }
  out.value = s.imag() == 0.0 ? Complex(acc.real(), 0.0) : acc;
  out.tail_bound = divisor_tail_bound(s.real(), terms);
  return out;
}

Complex log_euler_Ly(const EigenForm& form, Complex s, double y) {
  if (s.real() < 1) throw std::invalid_argument("euler_Ly: Re s must be at least 1");
  Complex acc = 0;
  if (y < 2) return acc;
  for (auto p : primes_up_to(static_cast<std::int64_t>(std::floor(y)))) {
    const Complex ps = power_minus(static_cast<double>(p), s);
    acc -= std::log(1.0 - form.lambda_p(p) * ps + ps * ps);
  }
  return acc;
}

Complex euler_Ly(const EigenForm& form, Complex s, double y) {
  const Complex v = std::exp(log_euler_Ly(form, s, y));
  return s.imag() == 0.0 ? Complex(v.real(), 0.0) : v;
}

namespace {

struct DirichletEnumerator {
  std::int64_t limit;
  Complex s;
  std::vector<std::int64_t> primes;
  std::vector<std::vector<double>> powers;
  Complex total = 0;

  void run(std::size_t start, std::int64_t n, double v) {
    total += v * power_minus(static_cast<double>(n), s);
    for (std::size_t i = start; i < primes.size(); ++i) {
      const std::int64_t p = primes[i];
      if (n > limit / p) break;
      std::int64_t m = n * p;
      for (int a = 1;; ++a) {
        run(i + 1, m, v * powers[i][a]);
        if (m > limit / p) break;
        m *= p;
      }
    }
  }
};

}  // namespace

Complex friable_dirichlet_sum(const EigenForm& form, Complex s, double y, std::int64_t terms) {
  DirichletEnumerator e;
  e.limit = terms;
  e.s = s;
  if (terms < 1) return 0;
  if (y >= 2) e.primes = primes_up_to(static_cast<std::int64_t>(std::floor(y)));
  for (auto p : e.primes) {
    const double lp = form.lambda_p(p);
    std::vector<double> vals{1.0};
    for (std::int64_t pk = p; pk <= terms; pk *= p) {
      vals.push_back(hecke_prime_power(lp, static_cast<int>(vals.size())));
      if (pk > terms / p) break;
    }
    e.powers.push_back(std::move(vals));
  }
  e.run(0, 1, 1.0);
  return e.total;
}

double friable_tail_bound(double sigma, double y, std::int64_t terms) {
  if (!(sigma > 0)) throw std::invalid_argument("friable_tail_bound: sigma must be positive");
  if (y < 2) return 0;
  const auto primes = primes_up_to(static_cast<std::int64_t>(std::floor(y)));
  const double logn = std::log(static_cast<double>(terms));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 400; ++i) {
    const double delta = sigma * i / 400.0;
    double log_bound = -delta * logn;
    for (auto p : primes) log_bound -= 2 * std::log1p(-std::pow(static_cast<double>(p), delta - sigma));
    best = std::min(best, std::exp(log_bound));
  }
  return best;
}

FriableApproxReport friable_approx_check(const EigenForm& form, double x, std::span<const double> ys,
                                         double constant) {
  if (x < 2) throw std::invalid_argument("friable_approx_check: x must be at least 2");
  const auto limit = static_cast<std::int64_t>(std::floor(x));
  const auto lam = lambda_table(form, limit);
  std::vector<std::int64_t> largest(static_cast<std::size_t>(limit) + 1, 1);
  {
    const FactorSieve sieve(limit);
    for (std::int64_t n = 2; n <= limit; ++n) {
      const std::int64_t p = sieve.smallest_prime_factor(n);
      largest[n] = std::max(p, largest[n / p]);
    }
  }
  FriableApproxReport rep;
  rep.constant = constant;
  const double logk = std::log(static_cast<double>(form.weight()));
  for (double y : ys) {
    if (y < 2) throw std::invalid_argument("friable_approx_check: y must be at least 2");
    FriableApproxRow row;
    row.x = x;
    row.y = y;
    for (std::int64_t n = 1; n <= limit; ++n) {
      row.sum += lam[n];
      if (static_cast<double>(largest[n]) <= y) row.psi_lambda += lam[n];
    }
    row.difference = row.sum - row.psi_lambda;
    const double ly = std::log(y);
    row.normalized = std::abs(row.difference) * std::sqrt(y) / (logk * std::pow(ly, 4) * x * std::log(x));
    rep.max_normalized = std::max(rep.max_normalized, row.normalized);
    rep.rows.push_back(row);
  }
  rep.bounded = rep.max_normalized <= constant;
  return rep;
}

LogRatioReport log_ratio_diagnostic(const EigenForm& form, Complex s, double y, std::int64_t terms) {
  LogRatioReport r;
  const auto t = truncated_L(form, s, terms);
  r.log_euler = log_euler_Ly(form, s, y);
  if (std::abs(t.value) == 0.0) {
    r.valid = false;
    return r;
  }
  r.log_truncated = std::log(t.value);
  Complex d = r.log_truncated - r.log_euler;
  const double two_pi = 2 * std::numbers::pi;
  d.imag(d.imag() - two_pi * std::round(d.imag() / two_pi));
  r.difference = std::abs(d);
  r.tail_bound = t.tail_bound / std::abs(t.value);
  return r;
}

}  // namespace heckelab

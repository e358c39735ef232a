#include "heckelab/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heckelab/hecke_algebra.hpp"

namespace heckelab {

SumReport make_sum_report(double x, double value, std::int64_t term_count) {
  SumReport r;
  r.x = x;
  r.value = value;
  r.term_count = term_count;
  r.normalized = x > 1 ? value / (x * std::log(x)) : 0.0;
  return r;
}

namespace {

std::int64_t floor_x(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("sums: x must be finite");
  return x < 1 ? 0 : static_cast<std::int64_t>(std::floor(x));
}

}  // namespace

SumReport partial_sum(const EigenForm& form, double x) {
  const std::int64_t n = floor_x(x);
  const auto lam = lambda_table(form, n);
  double s = 0;
  for (std::int64_t i = 1; i <= n; ++i) s += lam[i];
  return make_sum_report(x, s, n);
}

std::vector<SumReport> sum_profile(const EigenForm& form, std::span<const double> xs) {
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("sum_profile: grid must be increasing");
  std::vector<SumReport> out;
  if (xs.empty()) return out;
  const auto lam = lambda_table(form, floor_x(xs.back()));
  double s = 0;
  std::int64_t n = 0;
  for (double x : xs) {
    const std::int64_t upto = floor_x(x);
    for (; n < upto; ++n) s += lam[n + 1];
    out.push_back(make_sum_report(x, s, upto));
  }
  return out;
}

namespace {

// sign of a_f(p^e) from the exact recurrence a(p^{e+1}) = a(p) a(p^e) - p^{k-1} a(p^{e-1})
int exact_prime_power_sign(const EigenForm& form, std::int64_t p, int e) {
  if (e == 0) return 1;
  const mpz_class ap = form.exact_coefficient(p);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(form.weight() - 1));
  mpz_class prev = 1, cur = ap;
  for (int i = 1; i < e; ++i) {
    mpz_class next = ap * cur - pk * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return sgn(cur);
}

}  // namespace

std::optional<std::int64_t> first_sign_change(const EigenForm& form, std::int64_t limit) {
  if (limit < 1) return std::nullopt;
  if (form.has_exact_coefficients()) {
    const FactorSieve sieve(std::max<std::int64_t>(limit, 2));
    for (std::int64_t n = 2; n <= limit; ++n) {
      int s = 1;
      const auto f = sieve.factor(n);
      for (const auto& pp : f.factors()) s *= exact_prime_power_sign(form, pp.prime, pp.exponent);
      if (s < 0) return n;
    }
    return std::nullopt;
  }
  const auto lam = lambda_table(form, limit);
  for (std::int64_t n = 1; n <= limit; ++n)
    if (lam[n] < -kSignTolerance) return n;
  return std::nullopt;
}

double hx_prime_value(double x, std::int64_t p) {
  if (x < 2) throw std::invalid_argument("hx: x must be at least 2");
  if (p < 2) throw std::invalid_argument("hx: argument must be prime");
  if (static_cast<double>(p) > x) return 0.0;
  int m = 0;
  for (double pm = static_cast<double>(p); pm <= x; pm *= static_cast<double>(p)) ++m;
  if (m == 1) return 0.0;
  return 2.0 * std::cos(std::numbers::pi / (m + 1));
}

double hx_value(double x, const FactoredInt& n) {
  if (x < 2) throw std::invalid_argument("hx: x must be at least 2");
  if (!n.is_squarefree()) return 0.0;
  double v = 1;
  for (const auto& pp : n.factors()) v *= hx_prime_value(x, pp.prime);
  return v;
}

namespace {

struct HxEnumerator {
  std::int64_t limit;
  std::vector<std::int64_t> primes;
  std::vector<double> values;
  double total = 0;
  std::int64_t count = 0;

  void run(std::size_t start, std::int64_t n, double v) {
    total += v;
    ++count;
    for (std::size_t i = start; i < primes.size() && n * primes[i] <= limit; ++i)
      run(i + 1, n * primes[i], v * values[i]);
  }
};

}  // namespace

SumReport hx_sum(double x) {
  if (x < 2) throw std::invalid_argument("hx_sum: x must be at least 2");
  HxEnumerator e;
  e.limit = floor_x(x);
  // h_x(p) = 0 for p > sqrt(x), so only smaller primes generate nonzero terms
  for (auto p : primes_up_to(static_cast<std::int64_t>(std::sqrt(x)) + 1)) {
    const double v = hx_prime_value(x, p);
    if (v != 0.0) {
      e.primes.push_back(p);
      e.values.push_back(v);
    }
  }
  e.run(0, 1, 1.0);
  return make_sum_report(x, e.total, e.count);
}

PositivityWitness positivity_witness_check(const EigenForm& form, double x) {
  PositivityWitness w;
  w.x = x;
  const std::int64_t n = floor_x(x);
  const auto lam = lambda_table(form, n);
  for (std::int64_t i = 1; i <= n; ++i) {
    w.sum_lambda += lam[i];
    if (lam[i] < -kSignTolerance) w.applicable = false;
  }
  if (n < 1) return w;
  w.sum_h = x >= 2 ? hx_sum(x).value : 1.0;
  if (w.applicable) w.holds = w.sum_lambda >= w.sum_h - 1e-9 * std::max(1.0, w.sum_h);
  return w;
}

HxPrimeReport hx_prime_sum(double x) {
  if (x < 10) throw std::invalid_argument("hx_prime_sum: x must be at least 10");
  HxPrimeReport r;
  r.x = x;
  for (auto p : primes_up_to(static_cast<std::int64_t>(std::sqrt(x)) + 1))
    r.value += hx_prime_value(x, p) / static_cast<double>(p);
  r.difference = r.value - 2.0 * std::log(std::log(x));
  return r;
}

namespace {

struct FriableEnumerator {
  std::int64_t limit;
  std::vector<std::int64_t> primes;
  std::vector<std::vector<double>> powers;  // powers[i][a] = g(p_i^a)
  double total = 0;
  std::int64_t count = 0;

  void run(std::size_t start, std::int64_t n, double v) {
    total += v;
    ++count;
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

SumReport friable_sum(double x, double y, const FriableWeight& g) {
  if (!(y >= 2 && y <= x)) throw std::invalid_argument("friable_sum: need 2 <= y <= x");
  FriableEnumerator e;
  e.limit = floor_x(x);
  e.primes = primes_up_to(static_cast<std::int64_t>(std::floor(y)));
  for (auto p : e.primes) {
    int amax = 0;
    for (std::int64_t pk = 1; pk <= e.limit / p; pk *= p) ++amax;
    std::vector<double> vals(static_cast<std::size_t>(amax) + 1, 1.0);
    const double lp = g.kind() == FriableWeight::Kind::lambda ? g.form()->lambda_p(p) : 0.0;
    for (int a = 1; a <= amax; ++a) {
      switch (g.kind()) {
        case FriableWeight::Kind::unit: vals[a] = 1.0; break;
        case FriableWeight::Kind::tau: vals[a] = a + 1.0; break;
        case FriableWeight::Kind::lambda: vals[a] = hecke_prime_power(lp, a); break;
      }
    }
    e.powers.push_back(std::move(vals));
  }
  e.run(0, 1, 1.0);
  return make_sum_report(x, e.total, e.count);
}

DecayScan friable_decay_scan(std::span<const std::pair<double, double>> grid, double envelope) {
  DecayScan scan;
  scan.envelope = envelope;
  for (const auto& [x, y] : grid) {
    if (!(y >= 10 && y <= x)) throw std::invalid_argument("friable_decay_scan: need 10 <= y <= x");
    DecayRow row;
    row.x = x;
    row.y = y;
    row.u = std::log(x) / std::log(y);
    row.psi = friable_sum(x, y, FriableWeight::tau()).value;
    row.normalized = row.psi / (x * std::log(x));
    row.bound_ratio = row.normalized * std::exp(row.u / 2);
    scan.max_ratio = std::max(scan.max_ratio, row.bound_ratio);
    scan.rows.push_back(row);
  }
  scan.bounded = scan.max_ratio <= envelope;
  return scan;
}

}  // namespace heckelab

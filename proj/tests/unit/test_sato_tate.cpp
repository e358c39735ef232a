#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "heckelab/arith.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/sato_tate.hpp"
#include "heckelab/sums.hpp"
#include "../oracles.hpp"

using namespace heckelab;

namespace {

// E |sum_{n <= x} X(n)|^{2 ell} by Gauss quadrature over the primes up to x
double quadrature_moment(std::int64_t x, int ell) {
  const auto primes = primes_up_to(x);
  const int r = static_cast<int>(primes.size());
  return oracle::sato_tate_expectation(r, 8, [&](const std::vector<double>& th) {
    double s = 0;
    for (std::int64_t n = 1; n <= x; ++n) {
      std::int64_t m = n;
      double v = 1;
      for (int i = 0; i < r; ++i) {
        int a = 0;
        while (m % primes[i] == 0) m /= primes[i], ++a;
        v *= oracle::chebyshev_u(th[i], a);
      }
      s += v;
    }
    return std::pow(s, 2 * ell);
  });
}

}  // namespace

TEST_CASE("distribution function and quantile") {
  CHECK(sato_tate_cdf(0) == 0);
  CHECK(sato_tate_cdf(std::numbers::pi) == doctest::Approx(1));
  CHECK(sato_tate_cdf(std::numbers::pi / 2) == doctest::Approx(0.5));
  for (double t : {1e-5, 5e-4, 2e-3}) {
    const double direct = (t - std::sin(t) * std::cos(t)) / std::numbers::pi;
    CHECK(sato_tate_cdf(t) == doctest::Approx(direct).epsilon(1e-6));
  }
  for (double u = 0; u <= 1; u += 1.0 / 64) CHECK(std::abs(sato_tate_cdf(sato_tate_quantile(u)) - u) < 1e-12);
  CHECK_THROWS_AS(sato_tate_quantile(1.5), std::invalid_argument);
}

TEST_CASE("sampled angles pass a Kolmogorov-Smirnov test") {
  const std::int64_t n = 1'000'000;
  std::vector<double> th;
  for (std::int64_t i = 0; i < n; ++i) th.push_back(sample_angle(2024, static_cast<std::uint64_t>(i), 7));
  std::sort(th.begin(), th.end());
  double d = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double f = sato_tate_cdf(th[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  CHECK(d <= 1.949 / std::sqrt(static_cast<double>(n)));
  // different primes give different streams
  CHECK(sample_angle(2024, 0, 7) != sample_angle(2024, 0, 11));
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) > 0);
  CHECK(counter_uniform(1, 2, 3) < 1);
}

TEST_CASE("trace moments are Catalan numbers") {
  MonteCarloOptions o;
  o.samples = 400'000;
  o.seed = 99;
  const std::int64_t catalan[] = {1, 1, 2, 5, 14, 42};
  for (int j = 0; j <= 5; ++j) {
    const auto m = mc_expectation(2, o, [j](std::span<const double> t) { return std::pow(t[0], 2 * j); });
    CHECK(std::abs(m.mean - static_cast<double>(catalan[j])) <= 4 * m.std_error + 1e-12);
    const auto odd = mc_expectation(3, o, [j](std::span<const double> t) { return std::pow(t[1], 2 * j + 1); });
    CHECK(std::abs(odd.mean) <= 4 * odd.std_error);
  }
}

TEST_CASE("samples satisfy the Hecke relations") {
  const SatoTateSample s(5, 17, 100);
  CHECK(s.primes().size() == 25);
  CHECK(s.trace(97) == doctest::Approx(2 * std::cos(s.angle(97))));
  for (std::int64_t m = 1; m <= 60; ++m)
    for (std::int64_t n = 1; n <= 60; ++n) {
      double rhs = 0;
      for (std::int64_t d = 1; d <= std::min(m, n); ++d)
        if (m % d == 0 && n % d == 0) rhs += x_value(FactoredInt(m * n / (d * d)), s);
      CHECK(x_value(FactoredInt(m), s) * x_value(FactoredInt(n), s) == doctest::Approx(rhs).epsilon(1e-9));
    }
  CHECK_THROWS_AS(s.angle(101), CoverageError);
  CHECK_THROWS_AS(s.angle(91), std::invalid_argument);
  const SatoTateSample again(5, 17, 100);
  CHECK(std::equal(s.angles().begin(), s.angles().end(), again.angles().begin()));
}

TEST_CASE("exact moments against quadrature") {
  CHECK(exact_moment(5, 0) == 1);
  CHECK(exact_moment(0, 1) == 0);
  for (std::int64_t x = 1; x <= 12; ++x) {
    CHECK(exact_moment(x, 1) == x);
    CHECK(exact_moment(x, 1).get_d() == doctest::Approx(quadrature_moment(x, 1)).epsilon(1e-9));
    CHECK(exact_moment(x, 2).get_d() == doctest::Approx(quadrature_moment(x, 2)).epsilon(1e-9));
  }
  CHECK(exact_moment(4, 2) == 66);
  CHECK(exact_moment(12, 2) == 1383);
  CHECK(exact_moment(6, 3).get_d() == doctest::Approx(quadrature_moment(6, 3)).epsilon(1e-9));
  CHECK_THROWS_AS(exact_moment(100, 4), BudgetExceeded);
}

TEST_CASE("Monte Carlo moments match exact moments") {
  MonteCarloOptions o;
  o.samples = 200'000;
  o.seed = 3;
  for (std::int64_t x : {1, 2, 5, 8}) {
    for (int ell : {1, 2}) {
      const auto m = mc_moment(static_cast<double>(x), ell, o);
      CHECK(std::abs(m.mean - exact_moment(x, ell).get_d()) <= 4 * m.std_error + 1e-12);
      CHECK(m.samples == o.samples);
    }
  }
  const auto means = mc_mean_values(20, o);
  REQUIRE(means.size() == 20);
  CHECK(means[0].mean == 1);
  for (std::size_t i = 1; i < means.size(); ++i) CHECK(std::abs(means[i].mean) <= 4 * means[i].std_error);
}

TEST_CASE("Monte Carlo is independent of the worker count") {
  MonteCarloOptions a;
  a.samples = 50'000;
  a.seed = 11;
  auto b = a;
  b.workers = 3;
  const auto ma = mc_moment(10, 2, a);
  const auto mb = mc_moment(10, 2, b);
  CHECK(ma.mean == mb.mean);
  CHECK(ma.std_error == mb.std_error);
  auto c = a;
  c.seed = 12;
  CHECK(mc_moment(10, 2, c).mean != ma.mean);
  a.samples = 0;
  CHECK_THROWS_AS(mc_moment(10, 1, a), std::invalid_argument);
}

TEST_CASE("restricted moments") {
  MonteCarloOptions o;
  o.samples = 100'000;
  o.seed = 8;
  const auto r = restricted_vs_full_moment(12, 3, 1, o);
  CHECK(r.ordered);
  CHECK(r.full.mean == doctest::Approx(mc_moment(12, 1, o).mean));
  // ell = 1: E|sum over friable n|^2 is the friable count
  CHECK(std::abs(r.restricted.mean - friable_sum(12, 3, FriableWeight::unit()).value) <= 4 * r.restricted.std_error);
  CHECK_THROWS_AS(restricted_vs_full_moment(12, 13, 1, o), std::invalid_argument);
}

TEST_CASE("conditioning") {
  const double e = 0.1;
  CHECK(conditioning_probability(e) == doctest::Approx((2 / std::numbers::pi) * (e / 2 - std::sin(2 * e) / 4)));
  CHECK(conditioning_probability(0.1) == doctest::Approx(2.1178e-4).epsilon(1e-4));
  const double lo = conditioning_probability(0.0099999), hi = conditioning_probability(0.0100001);
  CHECK(lo < hi);
  CHECK(hi - lo < 1e-9);
  // P(theta <= eps) ~ (2/(3 pi)) eps^3
  CHECK(conditioning_probability(1e-4) == doctest::Approx(2 / (3 * std::numbers::pi) * 1e-12).epsilon(1e-6));

  const auto r = conditioning_bound(20, 5, 1);
  CHECK(r.prime_count == 3);
  CHECK(r.moment_exact);
  CHECK(r.moment == 20);
  CHECK(r.holds);
  CHECK(r.bound <= r.moment);
  CHECK(r.moment >= r.psi_tau * r.psi_tau * r.probability * 0.5);
  CHECK(r.correction <= 1);
  CHECK(r.correction > 0.9);
  CHECK(r.psi_tau == friable_sum(20, 5, FriableWeight::tau()).value);
  CHECK(r.probability == doctest::Approx(std::pow(r.per_prime_probability, 3)));
  CHECK_THROWS_AS(conditioning_bound(1e4, 30, 3), BudgetExceeded);
  MonteCarloOptions o;
  o.samples = 20'000;
  o.seed = 1;
  const auto mc = conditioning_bound(1e4, 30, 3, o);
  CHECK_FALSE(mc.moment_exact);
  CHECK(mc.holds);
}

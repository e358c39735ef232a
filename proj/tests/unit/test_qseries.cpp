#include <cmath>
#include <random>

#include "doctest.h"
#include "heckelab/arith.hpp"
#include "heckelab/eigenforms.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/modular.hpp"
#include "heckelab/polynomial.hpp"
#include "heckelab/power_series.hpp"
#include "../oracles.hpp"

using namespace heckelab;

TEST_CASE("eisenstein series small cases") {
  const auto e4 = eisenstein(4, 3);
  CHECK(e4.coefficients() == std::vector<mpz_class>{1, 240, 2160});
  const auto e6 = eisenstein(6, 2);
  CHECK(e6.coefficients() == std::vector<mpz_class>{1, -504});
  CHECK(eisenstein(4, 1).coefficients() == std::vector<mpz_class>{1});
  CHECK_THROWS_AS(eisenstein(8, 10), std::invalid_argument);
  CHECK_THROWS_AS(eisenstein(4, 0), std::invalid_argument);

  const auto e4_ref = oracle::eisenstein(4, 200);
  const auto e6_ref = oracle::eisenstein(6, 200);
  CHECK(eisenstein(4, 200).coefficients() == e4_ref);
  CHECK(eisenstein(6, 200).coefficients() == e6_ref);
}

TEST_CASE("scaled eisenstein matches E4 and E6 up to scale") {
  for (int w : {4, 6}) {
    const auto s = scaled_eisenstein(w, 100);
    const auto e = eisenstein(w, 100);
    for (std::size_t n = 0; n < 100; ++n) CHECK(s.series[n] == s.scale * e[n]);
  }
  // E_8 = E_4^2, E_10 = E_4 E_6
  const auto e8 = scaled_eisenstein(8, 150);
  const auto e4 = eisenstein(4, 150);
  const auto e6 = eisenstein(6, 150);
  CHECK((e4 * e4) * e8.scale == e8.series);
  const auto e10 = scaled_eisenstein(10, 150);
  CHECK((e4 * e6) * e10.scale == e10.series);
}

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == mpq_class(-1, 2));
  CHECK(bernoulli(2) == mpq_class(1, 6));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(12) == mpq_class(-691, 2730));
}

TEST_CASE("delta from Eisenstein and eta routes agree with an independent product") {
  const auto d = delta_expansion(2001);
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  CHECK(d[2] == -24);
  CHECK(d[3] == 252);
  CHECK(d == delta_eta_product(2001));
  const auto ref = oracle::tau_eta(400);
  for (std::size_t n = 0; n < 400; ++n) CHECK(d[n] == ref[n]);
  CHECK_THROWS_AS(delta_expansion(1), PrecisionError);
}

TEST_CASE("dimension formula against counting monomials") {
  for (int k = 12; k <= 100; k += 2) {
    CHECK(cusp_form_dimension(k) == oracle::cusp_dimension(k));
    const int d = cusp_form_dimension(k);
    if (d == 0) continue;
    const auto b = miller_basis(k, static_cast<std::size_t>(d) + 3);
    CHECK(static_cast<int>(b.dimension()) == d);
    for (int i = 0; i < d; ++i)
      for (int j = 1; j <= d; ++j) CHECK(b.forms[i][j] == (i + 1 == j ? 1 : 0));
  }
  CHECK(cusp_form_dimension(12) == 1);
  CHECK(cusp_form_dimension(24) == 2);
  CHECK(cusp_form_dimension(26) == 1);
  CHECK(cusp_form_dimension(14) == 0);
  CHECK_THROWS_AS(miller_basis(24, 3), PrecisionError);
  CHECK_THROWS_AS(miller_basis(13, 10), std::invalid_argument);
}

TEST_CASE("hecke matrices") {
  const auto m12 = hecke_matrix(miller_basis(12, 10), 2);
  CHECK(m12.rows() == 1);
  CHECK(m12(0, 0) == -24);
  const auto m16 = hecke_matrix(miller_basis(16, 10), 2);
  // weight 16 eigenform is E_4 Delta
  const auto ref = oracle::naive_multiply(oracle::eisenstein(4, 10), oracle::tau_eta(10), 10);
  CHECK(m16(0, 0) == ref[2]);
  CHECK(m16(0, 0) == 216);
  CHECK_THROWS_AS(hecke_matrix(miller_basis(24, 5), 2), PrecisionError);

  const auto sys = EigenSystem::compute(24, {50, 0});
  const auto m24 = hecke_matrix(miller_basis(24, 20), 2);
  mpf_class sum(0, 256);
  for (std::size_t f = 0; f < 2; ++f) sum += sys.coefficient(f, 2);
  CHECK(std::abs(mpf_class(sum - mpf_class(m24.trace(), 256)).get_d()) < 1e-30);
  // T_2 and T_3 commute
  const auto basis = miller_basis(36, 40);
  const auto t2 = hecke_matrix(basis, 2);
  const auto t3 = hecke_matrix(basis, 3);
  CHECK(t2 * t3 == t3 * t2);
}

TEST_CASE("characteristic polynomial and certified roots") {
  RationalMatrix a(3, 3);
  a(0, 0) = 2; a(0, 1) = 1; a(1, 1) = 3; a(2, 2) = -5; a(1, 0) = 0;
  const auto p = characteristic_polynomial(a);
  // (x - 2)(x - 3)(x + 5) = x^3 - 19x + 30
  CHECK(p == RationalPolynomial({30, -19, 0, 1}));
  CHECK(is_squarefree(p));
  CHECK_FALSE(is_squarefree(RationalPolynomial({1, -2, 1})));
  const auto roots = real_roots(p.primitive_integer(), 8, 200);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == -5);
  CHECK(roots[1] == 2);
  CHECK(roots[2] == 3);
  // x^2 - 2
  const auto r2 = real_roots({-2, 0, 1}, 2, 300);
  REQUIRE(r2.size() == 2);
  mpf_class s(2, 300);
  mpf_sqrt(s.get_mpf_t(), s.get_mpf_t());
  CHECK(std::abs(mpf_class(r2[1] - s).get_d()) < 1e-80);
}

TEST_CASE("normalized eigenvalue examples") {
  const auto f12 = eigenforms(12, 100);
  REQUIRE(f12.size() == 1);
  CHECK(f12[0].lambda_p(2) == doctest::Approx(-24 / std::pow(2.0, 5.5)).epsilon(1e-15));
  CHECK(f12[0].lambda_p(2) == doctest::Approx(-0.530330).epsilon(1e-6));
  CHECK(f12[0].exact_coefficient(97) == oracle::tau_eta(98)[97]);
  const auto f16 = eigenforms(16, 100);
  CHECK(f16[0].lambda_p(2) == doctest::Approx(216 / std::pow(2.0, 7.5)).epsilon(1e-15));
  CHECK(f16[0].lambda_p(2) == doctest::Approx(1.193242).epsilon(1e-6));
  CHECK(f16[0].angle_p(2) == doctest::Approx(std::acos(f16[0].lambda_p(2) / 2)));
  CHECK_THROWS_AS(f12[0].lambda_p(101), CoverageError);
  CHECK_THROWS_AS(f12[0].lambda_p(4), std::invalid_argument);
  CHECK_THROWS_AS(eigenforms(14, 100), std::invalid_argument);
}

TEST_CASE("a_f(1) = 1 and the T_2 eigenvalues are the a_f(2)") {
  for (int k : {24, 36, 48}) {
    const auto sys = EigenSystem::compute(k, {100, 0});
    const auto roots = real_roots(sys.t2_charpoly().primitive_integer(), mpz_class(1) << (k / 2 + 1), 256);
    for (std::size_t f = 0; f < sys.dimension(); ++f) {
      CHECK(std::abs(mpf_class(sys.coefficient(f, 1) - 1).get_d()) < 1e-40);
      CHECK(std::abs(mpf_class(sys.coefficient(f, 2) - roots[f]).get_d()) < 1e-30);
    }
  }
}

TEST_CASE("Hecke relations on the eigenvector coefficients") {
  const auto primes = primes_up_to(100);
  SUBCASE("exact for weight 12") {
    const auto sys = EigenSystem::compute(12, {100, 10'000});
    mpz_class p11 = 0;
    for (auto p : primes) {
      mpz_ui_pow_ui(p11.get_mpz_t(), static_cast<unsigned long>(p), 11);
      CHECK(*sys.exact_coefficient(0, p) * *sys.exact_coefficient(0, p) ==
            *sys.exact_coefficient(0, p * p) + p11);
      for (auto q : primes)
        if (q != p && p * q <= 10'000)
          CHECK(*sys.exact_coefficient(0, p) * *sys.exact_coefficient(0, q) == *sys.exact_coefficient(0, p * q));
    }
  }
  SUBCASE("high precision for dimension > 1") {
    for (int k : {24, 36, 60}) {
      const auto sys = EigenSystem::compute(k, {100, 10'000});
      for (std::size_t f = 0; f < sys.dimension(); ++f) {
        for (auto p : primes) {
          const auto& ap = sys.coefficient(f, p);
          mpz_class pk;
          mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
          mpf_class lhs = ap * ap;
          mpf_class rhs = sys.coefficient(f, p * p) + mpf_class(pk, lhs.get_prec());
          // compare relative to p^{k-1}
          mpf_class rel = (lhs - rhs) / mpf_class(pk, lhs.get_prec());
          CHECK(std::abs(rel.get_d()) < 1e-25);
          for (auto q : primes) {
            if (q == p || p * q > 10'000) continue;
            mpf_class prod = ap * sys.coefficient(f, q);
            mpf_class d = prod - sys.coefficient(f, p * q);
            const double scale = std::pow(static_cast<double>(p * q), (k - 1) / 2.0);
            CHECK(std::abs(d.get_d()) / scale < 1e-25);
          }
        }
      }
    }
  }
}

TEST_CASE("eigenvalue extraction is reproducible") {
  const auto a = eigenforms(36, 2000);
  const auto b = eigenforms(36, 2000);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("Kronecker multiplication matches schoolbook") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t la = 1 + rng() % 200, lb = 1 + rng() % 200;
    const int bits = static_cast<int>(rng() % 300);
    auto random_vec = [&](std::size_t len) {
      std::vector<mpz_class> v(len);
      for (auto& x : v) {
        mpz_class r = 0;
        for (int i = 0; i < bits / 60 + 1; ++i) r = (r << 60) + mpz_class(static_cast<unsigned long>(rng() >> 4));
        if (rng() % 5 == 0) r = 0;
        x = (rng() & 1) ? r : -r;
      }
      return v;
    };
    const auto a = random_vec(la), b = random_vec(lb);
    const std::size_t n = 1 + rng() % (la + lb);
    CHECK(detail::multiply_kronecker(a, b, n) == detail::multiply_schoolbook(a, b, n));
  }
  // carries across slots with extreme values
  std::vector<mpz_class> a(64, -1), b(64, 1);
  a[0] = mpz_class(1) << 200;
  b[5] = -(mpz_class(1) << 190);
  CHECK(detail::multiply_kronecker(a, b, 128) == detail::multiply_schoolbook(a, b, 128));
}

TEST_CASE("EigenForm validation") {
  auto primes = std::make_shared<const std::vector<std::int64_t>>(primes_up_to(10));
  CHECK_THROWS_AS(EigenForm(12, 0, 10, primes, {0.1, 2.5, 0.0, 0.0}, {}, false), NumericalError);
  CHECK_NOTHROW(EigenForm(12, 0, 10, primes, {0.1, 2.0, 0.0, -2.0}, {}, false));
  const auto syn = EigenForm::synthetic(12, 50, [](std::int64_t) { return 0.0; });
  CHECK(syn.angle_p(47) == doctest::Approx(std::acos(0.0)));
}

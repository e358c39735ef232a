#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "heckelab/arith.hpp"

namespace heckelab {

/// F(theta) = (theta - sin theta cos theta) / pi, the Sato-Tate distribution function on [0, pi].
double sato_tate_cdf(double theta);
/// F^{-1}(u) by safeguarded Newton (bisection fallback) to residual <= 1e-12.
double sato_tate_quantile(double u);

/// Uniform in (0, 1), a pure function of (seed, sample, prime).
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::int64_t prime);
double sample_angle(std::uint64_t seed, std::uint64_t sample, std::int64_t prime);

/// Independent Sato-Tate angles theta_p for every prime p <= prime_bound; sample number
/// `index` of the stream identified by `seed`.
class SatoTateSample {
 public:
  SatoTateSample(std::uint64_t seed, std::uint64_t index, std::int64_t prime_bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }
  std::int64_t prime_bound() const { return prime_bound_; }
  std::span<const std::int64_t> primes() const { return *primes_; }
  std::span<const double> angles() const { return angles_; }

  /// Throws CoverageError beyond the prime bound.
  double angle(std::int64_t p) const;
  double trace(std::int64_t p) const { return 2.0 * std::cos(angle(p)); }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::int64_t prime_bound_;
  std::shared_ptr<const std::vector<std::int64_t>> primes_;
  std::vector<double> angles_;
};

/// X(n) = prod_p U_{a_p}(cos theta_p), by the same recurrence as lambda_at.
double x_value(const FactoredInt& n, const SatoTateSample& sample);

struct MomentEstimate {
  double mean = 0;
  double std_error = 0;  // sample standard deviation / sqrt(N)
  std::int64_t samples = 0;
  int ell = 0;
  double x = 0;
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Mean and standard error of statistic(traces) where traces[i] = 2 cos theta_{p_i} for the
/// primes p_i <= prime_bound. Samples are processed in fixed chunks reduced in order, so the
/// result does not depend on the worker count.
MomentEstimate mc_expectation(std::int64_t prime_bound, const MonteCarloOptions& options,
                              const std::function<double(std::span<const double>)>& statistic);

/// E |sum_{n <= x} X(n)|^{2 ell}.
MomentEstimate mc_moment(double x, int ell, const MonteCarloOptions& options);
/// E X(n) for n = 1..n_max from shared samples.
std::vector<MomentEstimate> mc_mean_values(std::int64_t n_max, const MonteCarloOptions& options);

inline constexpr std::int64_t kExactMomentBudget = 10'000'000;

/// sum over (n_1..n_{2 ell}) in [1, x]^{2 ell} of b_1(n_1, ..., n_{2 ell}).
/// Throws BudgetExceeded when x^{2 ell} > kExactMomentBudget.
mpz_class exact_moment(std::int64_t x, int ell);

struct RestrictedComparison {
  MomentEstimate full;
  MomentEstimate restricted;  // sum over y-friable n <= x only
  bool ordered = true;        // full >= restricted - 4 * combined stderr
};

RestrictedComparison restricted_vs_full_moment(double x, double y, int ell, const MonteCarloOptions& options);

struct ConditioningReport {
  double x = 0;
  double y = 0;
  int ell = 0;
  double epsilon = 0;                // (log x)^{-2}
  double per_prime_probability = 0;  // P(theta_p <= epsilon)
  std::int64_t prime_count = 0;      // pi(y)
  double probability = 0;            // P(A)
  double correction = 0;             // worst prod_p X(p^a)/tau(p^a) over friable n under A
  double psi_tau = 0;
  double bound = 0;                  // P(A) (correction * psi_tau)^{2 ell}
  double moment = 0;
  bool moment_exact = true;
  double moment_stderr = 0;
  bool holds = true;
};

/// per-prime probability (2/pi)(eps/2 - sin(2 eps)/4)
double conditioning_probability(double epsilon);

/// Exact moment when within budget, otherwise Monte Carlo (options required).
ConditioningReport conditioning_bound(double x, double y, int ell,
                                      const std::optional<MonteCarloOptions>& mc = std::nullopt);

}  // namespace heckelab

#include "heckelab/sato_tate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "heckelab/errors.hpp"
#include "heckelab/hecke_algebra.hpp"
#include "heckelab/sums.hpp"

namespace heckelab {

using std::numbers::pi;

double sato_tate_cdf(double theta) {
  if (theta <= 0) return 0;
  if (theta >= pi) return 1;
  if (theta < 1e-3) {
    // (2 theta - sin 2 theta) / (2 pi) cancels badly near 0
    const double t2 = theta * theta;
    return (2.0 / (3.0 * pi)) * theta * t2 * (1 - t2 / 5 + 2 * t2 * t2 / 105);
  }
  return (2 * theta - std::sin(2 * theta)) / (2 * pi);
}

double sato_tate_quantile(double u) {
  if (!(u >= 0 && u <= 1)) throw std::invalid_argument("sato_tate_quantile: u must lie in [0, 1]");
  if (u == 0) return 0;
  if (u == 1) return pi;
  // near the ends F behaves like (2/(3 pi)) t^3
  double lo = 0, hi = pi;
  double t = u < 0.5 ? std::cbrt(1.5 * pi * u) : pi - std::cbrt(1.5 * pi * (1 - u));
  t = std::clamp(t, 0.0, pi);
  for (int it = 0; it < 200; ++it) {
    const double f = sato_tate_cdf(t) - u;
    if (std::abs(f) <= 1e-12 * std::max(1e-3, std::min(u, 1 - u)) || hi - lo < 1e-15) break;
    if (f > 0) hi = t;
    else lo = t;
    const double dens = (2 / pi) * std::sin(t) * std::sin(t);
    double next = dens > 0 ? t - f / dens : lo - 1;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::int64_t prime) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ sample);
  h = splitmix64(h ^ static_cast<std::uint64_t>(prime));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double sample_angle(std::uint64_t seed, std::uint64_t sample, std::int64_t prime) {
  return sato_tate_quantile(counter_uniform(seed, sample, prime));
}

SatoTateSample::SatoTateSample(std::uint64_t seed, std::uint64_t index, std::int64_t prime_bound)
    : seed_(seed),
      index_(index),
      prime_bound_(prime_bound),
      primes_(std::make_shared<const std::vector<std::int64_t>>(primes_up_to(prime_bound))) {
  angles_.reserve(primes_->size());
  for (auto p : *primes_) angles_.push_back(sample_angle(seed, index, p));
}

double SatoTateSample::angle(std::int64_t p) const {
  if (p > prime_bound_)
    throw CoverageError("SatoTateSample: prime " + std::to_string(p) + " beyond bound " + std::to_string(prime_bound_));
  const auto it = std::lower_bound(primes_->begin(), primes_->end(), p);
  if (it == primes_->end() || *it != p) throw std::invalid_argument("SatoTateSample: not a prime");
  return angles_[static_cast<std::size_t>(it - primes_->begin())];
}

double x_value(const FactoredInt& n, const SatoTateSample& sample) {
  double v = 1;
  for (const auto& pp : n.factors()) v *= hecke_prime_power(sample.trace(pp.prime), pp.exponent);
  return v;
}

namespace {

constexpr std::int64_t kChunk = 4096;

// multiplicative X(n) for n <= limit from the traces of primes <= limit, via a fixed recipe
struct MultiplicativeEvaluator {
  std::vector<std::int64_t> primes;
  std::vector<int> prime_slot;             // n -> index into primes when n is prime, else -1
  std::vector<std::int64_t> ppow;          // full power of the smallest prime dividing n
  std::vector<std::int64_t> spf;

  explicit MultiplicativeEvaluator(std::int64_t limit) {
    const auto size = static_cast<std::size_t>(std::max<std::int64_t>(limit, 1) + 1);
    primes = primes_up_to(limit);
    prime_slot.assign(size, -1);
    for (std::size_t i = 0; i < primes.size(); ++i) prime_slot[primes[i]] = static_cast<int>(i);
    ppow.assign(size, 1);
    spf.assign(size, 0);
    if (limit >= 2) {
      const FactorSieve sieve(limit);
      for (std::int64_t n = 2; n <= limit; ++n) {
        const std::int64_t p = sieve.smallest_prime_factor(n);
        spf[n] = p;
        ppow[n] = (n / p) % p == 0 ? ppow[n / p] * p : p;
      }
    }
  }

  void fill(std::span<const double> traces, std::vector<double>& out) const {
    const std::size_t size = ppow.size();
    out.assign(size, 0.0);
    out[1] = 1;
    for (std::size_t n = 2; n < size; ++n) {
      const std::int64_t q = ppow[n];
      if (q == static_cast<std::int64_t>(n)) {
        const std::int64_t p = spf[n];
        const double t = traces[prime_slot[p]];
        out[n] = q == p ? t : t * out[n / p] - (n / p / p >= 1 ? out[n / p / p] : 0.0);
      } else {
        out[n] = out[q] * out[n / q];
      }
    }
  }
};

}  // namespace

MomentEstimate mc_expectation(std::int64_t prime_bound, const MonteCarloOptions& options,
                              const std::function<double(std::span<const double>)>& statistic) {
  if (options.samples < 1) throw std::invalid_argument("monte carlo: need at least one sample");
  const auto primes = primes_up_to(prime_bound);
  const std::int64_t n = options.samples;
  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<long double> sums(static_cast<std::size_t>(chunks)), squares(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(std::max(1u, options.workers));
  auto work = [&](unsigned w) {
    try {
      std::vector<double> traces(primes.size());
      for (std::int64_t c = next++; c < chunks; c = next++) {
        long double s = 0, s2 = 0;
        const std::int64_t end = std::min(n, (c + 1) * kChunk);
        for (std::int64_t i = c * kChunk; i < end; ++i) {
          for (std::size_t j = 0; j < primes.size(); ++j)
            traces[j] = 2.0 * std::cos(sample_angle(options.seed, static_cast<std::uint64_t>(i), primes[j]));
          const double v = statistic(traces);
          s += v;
          s2 += static_cast<long double>(v) * v;
        }
        sums[c] = s;
        squares[c] = s2;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  long double s = 0, s2 = 0;
  for (std::int64_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += squares[c];
  }
  MomentEstimate m;
  m.samples = n;
  m.seed = options.seed;
  const long double mean = s / n;
  m.mean = static_cast<double>(mean);
  if (n > 1) {
    const long double var = std::max<long double>(0, (s2 - s * mean) / (n - 1));
    m.std_error = static_cast<double>(std::sqrt(var / n));
  }
  return m;
}

MomentEstimate mc_moment(double x, int ell, const MonteCarloOptions& options) {
  if (ell < 0) throw std::invalid_argument("mc_moment: negative order");
  const std::int64_t limit = x < 1 ? 0 : static_cast<std::int64_t>(std::floor(x));
  const MultiplicativeEvaluator eval(limit);
  MomentEstimate m;
  if (limit <= 1) {
    // S = 1 (or 0) deterministically
    m.mean = limit == 1 || ell == 0 ? 1.0 : 0.0;
    m.samples = options.samples;
    m.seed = options.seed;
  } else {
    thread_local std::vector<double> values;
    m = mc_expectation(limit, options, [&](std::span<const double> traces) {
      eval.fill(traces, values);
      double s = 0;
      for (std::int64_t i = 1; i <= limit; ++i) s += values[i];
      return std::pow(s, 2 * ell);
    });
  }
  m.ell = ell;
  m.x = x;
  return m;
}

std::vector<MomentEstimate> mc_mean_values(std::int64_t n_max, const MonteCarloOptions& options) {
  std::vector<MomentEstimate> out;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const FactoredInt f(n);
    const std::int64_t bound = std::max<std::int64_t>(f.largest_prime(), 2);
    const auto primes = primes_up_to(bound);
    std::vector<std::pair<std::size_t, int>> slots;
    for (const auto& pp : f.factors())
      slots.emplace_back(std::lower_bound(primes.begin(), primes.end(), pp.prime) - primes.begin(), pp.exponent);
    MomentEstimate m = mc_expectation(bound, options, [&](std::span<const double> traces) {
      double v = 1;
      for (const auto& [idx, e] : slots) v *= hecke_prime_power(traces[idx], e);
      return v;
    });
    m.x = static_cast<double>(n);
    m.ell = 0;
    out.push_back(m);
  }
  return out;
}

namespace {

struct TupleEnumerator {
  std::int64_t x;
  int length;
  std::vector<FactoredInt> factored;
  std::vector<mpz_class> factorial;
  std::vector<int> tuple;
  mpz_class total = 0;

  void run(int pos, std::int64_t start) {
    if (pos == length) {
      std::vector<FactoredInt> args;
      args.reserve(tuple.size());
      for (int n : tuple) args.push_back(factored[n]);
      const auto b = branching_coeff(args, FactoredInt(1));
      if (b == 0) return;
      // number of orderings of this multiset
      mpz_class count = factorial[length];
      for (std::size_t i = 0; i < tuple.size();) {
        std::size_t j = i;
        while (j < tuple.size() && tuple[j] == tuple[i]) ++j;
        count /= factorial[j - i];
        i = j;
      }
      total += count * b;
      return;
    }
    for (std::int64_t n = start; n <= x; ++n) {
      tuple[pos] = static_cast<int>(n);
      run(pos + 1, n);
    }
  }
};

}  // namespace

mpz_class exact_moment(std::int64_t x, int ell) {
  if (ell < 0) throw std::invalid_argument("exact_moment: negative order");
  if (x < 1) return ell == 0 ? 1 : 0;
  if (ell == 0) return 1;
  double tuples = std::pow(static_cast<double>(x), 2 * ell);
  if (tuples > static_cast<double>(kExactMomentBudget))
    throw BudgetExceeded("exact_moment: x^{2l} = " + std::to_string(tuples) + " exceeds the tuple budget");
  TupleEnumerator e;
  e.x = x;
  e.length = 2 * ell;
  e.factored.emplace_back();
  for (std::int64_t n = 1; n <= x; ++n) e.factored.emplace_back(n);
  e.factorial.resize(static_cast<std::size_t>(e.length) + 1);
  e.factorial[0] = 1;
  for (int i = 1; i <= e.length; ++i) e.factorial[i] = e.factorial[i - 1] * i;
  e.tuple.assign(static_cast<std::size_t>(e.length), 1);
  e.run(0, 1);
  return e.total;
}

RestrictedComparison restricted_vs_full_moment(double x, double y, int ell, const MonteCarloOptions& options) {
  if (!(y >= 2 && y <= x)) throw std::invalid_argument("restricted_vs_full_moment: need 2 <= y <= x");
  const auto limit = static_cast<std::int64_t>(std::floor(x));
  const MultiplicativeEvaluator eval(limit);
  std::vector<char> friable(static_cast<std::size_t>(limit) + 1, 1);
  {
    const FactorSieve sieve(std::max<std::int64_t>(limit, 2));
    for (std::int64_t n = 2; n <= limit; ++n) friable[n] = sieve.factor(n).largest_prime() <= y;
  }
  auto moment = [&](bool restrict) {
    thread_local std::vector<double> values;
    MomentEstimate m = mc_expectation(limit, options, [&](std::span<const double> traces) {
      eval.fill(traces, values);
      double s = 0;
      for (std::int64_t i = 1; i <= limit; ++i)
        if (!restrict || friable[i]) s += values[i];
      return std::pow(s, 2 * ell);
    });
    m.ell = ell;
    m.x = x;
    return m;
  };
  RestrictedComparison r;
  r.full = moment(false);
  r.restricted = moment(true);
  const double combined = std::hypot(r.full.std_error, r.restricted.std_error);
  r.ordered = r.full.mean >= r.restricted.mean - 4 * combined;
  return r;
}

double conditioning_probability(double epsilon) {
  if (epsilon < 1e-2) {
    // eps/2 - sin(2 eps)/4 = eps^3/3 - eps^5/15 + 2 eps^7/315 - ...
    const double e2 = epsilon * epsilon;
    return (2 / pi) * epsilon * e2 * (1.0 / 3 - e2 / 15 + 2 * e2 * e2 / 315);
  }
  return (2 / pi) * (epsilon / 2 - std::sin(2 * epsilon) / 4);
}

ConditioningReport conditioning_bound(double x, double y, int ell, const std::optional<MonteCarloOptions>& mc) {
  if (!(y >= 2 && y <= x)) throw std::invalid_argument("conditioning_bound: need 2 <= y <= x");
  ConditioningReport r;
  r.x = x;
  r.y = y;
  r.ell = ell;
  const auto primes = primes_up_to(static_cast<std::int64_t>(std::floor(y)));
  if (primes.size() > 10'000) throw std::invalid_argument("conditioning_bound: pi(y) must be at most 1e4");
  r.prime_count = static_cast<std::int64_t>(primes.size());
  r.epsilon = 1.0 / (std::log(x) * std::log(x));
  r.per_prime_probability = conditioning_probability(r.epsilon);
  r.probability = std::pow(r.per_prime_probability, static_cast<double>(r.prime_count));

  // U_a(cos t)/(a+1) = sin((a+1)t)/((a+1) sin t) decreases on [0, eps] for small eps
  auto ratio = [&](int a) { return std::sin((a + 1) * r.epsilon) / ((a + 1) * std::sin(r.epsilon)); };
  const auto limit = static_cast<std::int64_t>(std::floor(x));
  r.correction = 1;
  if (limit >= 2) {
    const FactorSieve sieve(limit);
    for (std::int64_t n = 2; n <= limit; ++n) {
      const auto f = sieve.factor(n);
      if (f.largest_prime() > y) continue;
      double c = 1;
      for (const auto& pp : f.factors()) c *= ratio(pp.exponent);
      r.correction = std::min(r.correction, c);
    }
  }
  r.psi_tau = friable_sum(x, y, FriableWeight::tau()).value;
  r.bound = r.probability * std::pow(r.correction * r.psi_tau, 2 * ell);

  const double tuples = std::pow(std::floor(x), 2 * ell);
  if (tuples <= static_cast<double>(kExactMomentBudget)) {
    r.moment = exact_moment(limit, ell).get_d();
    r.moment_exact = true;
    r.holds = r.moment >= r.bound;
  } else {
    if (!mc) throw BudgetExceeded("conditioning_bound: exact moment out of budget and no Monte Carlo options");
    const auto est = mc_moment(x, ell, *mc);
    r.moment = est.mean;
    r.moment_stderr = est.std_error;
    r.moment_exact = false;
    r.holds = r.moment + 4 * r.moment_stderr >= r.bound;
  }
  return r;
}

}  // namespace heckelab

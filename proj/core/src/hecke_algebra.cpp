#include "heckelab/hecke_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "heckelab/errors.hpp"

namespace heckelab {

std::int64_t divisor_tau(const FactoredInt& n) {
  std::int64_t t = 1;
  for (const auto& pp : n.factors()) t *= pp.exponent + 1;
  return t;
}

std::vector<std::int64_t> divisor_tau_table(std::int64_t limit) {
  std::vector<std::int64_t> t(static_cast<std::size_t>(std::max<std::int64_t>(limit, 0) + 1), 0);
  for (std::int64_t d = 1; d <= limit; ++d)
    for (std::int64_t m = d; m <= limit; m += d) ++t[m];
  return t;
}

double hecke_prime_power(double lambda_p, int b) {
  if (b < 0) throw std::invalid_argument("hecke_prime_power: negative exponent");
  double prev = 1, cur = lambda_p;
  if (b == 0) return 1;
  for (int i = 1; i < b; ++i) {
    const double next = lambda_p * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double lambda_at(const EigenForm& form, const FactoredInt& n) {
  double v = 1;
  for (const auto& pp : n.factors()) v *= hecke_prime_power(form.lambda_p(pp.prime), pp.exponent);
  return v;
}

std::vector<double> lambda_table(const EigenForm& form, std::int64_t limit) {
  if (limit < 0) throw std::invalid_argument("lambda_table: negative limit");
  std::vector<double> lam(static_cast<std::size_t>(limit + 1), 0.0);
  if (limit >= 1) lam[1] = 1;
  if (limit < 2) return lam;
  const FactorSieve sieve(limit);
  // ppow[n] = full power of the smallest prime of n dividing n
  std::vector<std::int64_t> ppow(static_cast<std::size_t>(limit + 1), 1);
  for (std::int64_t n = 2; n <= limit; ++n) {
    const std::int64_t p = sieve.smallest_prime_factor(n);
    const std::int64_t m = n / p;
    ppow[n] = (m % p == 0) ? ppow[m] * p : p;
    if (ppow[n] == n) {
      if (m == 1) lam[n] = form.lambda_p(p);
      else lam[n] = lam[p] * lam[m] - (m / p >= 1 ? lam[m / p] : 0.0);
    } else {
      lam[n] = lam[ppow[n]] * lam[n / ppow[n]];
    }
  }
  return lam;
}

DeligneReport deligne_report(const EigenForm& form, std::int64_t bound, double tolerance) {
  const auto lam = lambda_table(form, bound);
  const auto tau = divisor_tau_table(bound);
  DeligneReport r;
  r.bound = bound;
  r.tolerance = tolerance;
  for (std::int64_t n = 1; n <= bound; ++n) {
    const double ratio = std::abs(lam[n]) / static_cast<double>(tau[n]);
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax = n;
    }
  }
  r.ok = r.max_ratio <= 1.0 + tolerance;
  return r;
}

double hecke_relation_defect(std::span<const double> table, std::int64_t limit) {
  if (static_cast<std::int64_t>(table.size()) <= limit * limit)
    throw std::invalid_argument("hecke_relation_defect: table does not reach limit^2");
  double worst = 0;
  for (std::int64_t m = 1; m <= limit; ++m)
    for (std::int64_t n = m; n <= limit; ++n) {
      const std::int64_t g = std::gcd(m, n);
      double rhs = 0;
      for (std::int64_t d = 1; d <= g; ++d)
        if (g % d == 0) rhs += table[m * n / (d * d)];
      worst = std::max(worst, std::abs(table[m] * table[n] - rhs));
    }
  return worst;
}

std::vector<int> clebsch_gordan(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("clebsch_gordan: negative degree");
  std::vector<int> out;
  for (int j = 0; j <= std::min(a, b); ++j) out.push_back(a + b - 2 * j);
  return out;
}

BranchingTable& BranchingTable::shared() {
  static BranchingTable table;
  return table;
}

const BranchingTable::Multiplicities& BranchingTable::decompose(std::span<const int> exponents) {
  std::vector<int> key;
  for (int a : exponents) {
    if (a < 0) throw std::invalid_argument("BranchingTable: negative exponent");
    if (a > 0) key.push_back(a);
  }
  std::sort(key.begin(), key.end());
  return decompose_sorted(key);
}

const BranchingTable::Multiplicities& BranchingTable::decompose_sorted(const std::vector<int>& key) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  Multiplicities result;
  if (key.empty()) {
    result = {1};
  } else {
    const std::vector<int> rest(key.begin(), key.end() - 1);
    const int a = key.back();
    const Multiplicities base = decompose_sorted(rest);
    result.assign(base.size() + static_cast<std::size_t>(a), 0);
    for (std::size_t d = 0; d < base.size(); ++d) {
      if (base[d] == 0) continue;
      for (int deg : clebsch_gordan(static_cast<int>(d), a)) result[deg] += base[d];
    }
  }
  std::unique_lock lock(mutex_);
  // a concurrent writer may have inserted the same value first
  return memo_.try_emplace(key, std::move(result)).first->second;
}

std::int64_t BranchingTable::multiplicity(std::span<const int> exponents, int degree) {
  if (degree < 0) return 0;
  const auto& m = decompose(exponents);
  return static_cast<std::size_t>(degree) < m.size() ? m[degree] : 0;
}

std::size_t BranchingTable::size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

std::string BranchingTable::export_text() const {
  std::shared_lock lock(mutex_);
  std::ostringstream os;
  for (const auto& [key, mult] : memo_) {
    for (std::size_t i = 0; i < key.size(); ++i) os << (i ? "," : "") << key[i];
    os << " :";
    for (std::size_t d = 0; d < mult.size(); ++d)
      if (mult[d]) os << ' ' << d << '=' << mult[d];
    os << '\n';
  }
  return os.str();
}

std::int64_t branching_coeff(std::span<const FactoredInt> tuple, const FactoredInt& m) {
  if (tuple.empty()) throw std::invalid_argument("branching_coeff: empty tuple");
  std::vector<std::int64_t> primes;
  for (const auto& n : tuple)
    for (const auto& pp : n.factors()) primes.push_back(pp.prime);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const auto& pp : m.factors())
    if (!std::binary_search(primes.begin(), primes.end(), pp.prime)) return 0;
  auto& table = BranchingTable::shared();
  std::int64_t b = 1;
  std::vector<int> exps;
  for (auto p : primes) {
    exps.clear();
    for (const auto& n : tuple) exps.push_back(n.exponent_of(p));
    b *= table.multiplicity(exps, m.exponent_of(p));
    if (b == 0) return 0;
  }
  return b;
}

std::int64_t branching_coeff(std::span<const std::int64_t> tuple, std::int64_t m) {
  std::vector<FactoredInt> f;
  f.reserve(tuple.size());
  for (auto n : tuple) f.emplace_back(n);
  return branching_coeff(f, FactoredInt(m));
}

std::vector<std::int64_t> divisors(const FactoredInt& n) {
  std::vector<std::int64_t> out{1};
  for (const auto& pp : n.factors()) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BranchingBoundReport branching_bound_check(std::span<const std::int64_t> tuple) {
  if (tuple.empty() || tuple.size() > 6) throw std::invalid_argument("branching_bound_check: need 1 <= r <= 6");
  std::vector<FactoredInt> f;
  std::int64_t prod = 1;
  BranchingBoundReport r;
  for (auto n : tuple) {
    if (n < 1 || n > 30) throw std::invalid_argument("branching_bound_check: entries must lie in [1, 30]");
    f.emplace_back(n);
    prod *= n;
    r.bound *= divisor_tau(f.back());
  }
  for (auto m : divisors(FactoredInt(prod))) {
    const auto b = branching_coeff(f, FactoredInt(m));
    if (b > r.max_coeff) {
      r.max_coeff = b;
      r.argmax = m;
    }
  }
  r.ok = r.max_coeff <= r.bound;
  return r;
}

}  // namespace heckelab

#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "heckelab/arith.hpp"
#include "heckelab/eigenforms.hpp"

namespace heckelab {

std::int64_t divisor_tau(const FactoredInt& n);
/// tau(n) for n = 0..limit (tau(0) = 0).
std::vector<std::int64_t> divisor_tau_table(std::int64_t limit);

/// lambda(p^b) from lambda(p) by lambda(p^{b+1}) = lambda(p) lambda(p^b) - lambda(p^{b-1}).
double hecke_prime_power(double lambda_p, int b);

/// Multiplicative extension; throws CoverageError when a prime of n is beyond the table.
double lambda_at(const EigenForm& form, const FactoredInt& n);
/// lambda_f(n) for n = 0..limit (entry 0 is 0), built with a smallest-prime-factor sieve.
std::vector<double> lambda_table(const EigenForm& form, std::int64_t limit);

struct DeligneReport {
  std::int64_t bound = 0;
  double max_ratio = 0;  // max |lambda(n)| / tau(n)
  std::int64_t argmax = 1;
  double tolerance = 0;
  bool ok = true;
};

DeligneReport deligne_report(const EigenForm& form, std::int64_t bound, double tolerance = 1e-9);

/// max over m, n <= limit of |lambda(m)lambda(n) - sum_{d | (m,n)} lambda(mn/d^2)|.
/// `table` must cover limit^2.
double hecke_relation_defect(std::span<const double> table, std::int64_t limit);

/// Degrees in Sym^a (x) Sym^b, descending.
std::vector<int> clebsch_gordan(int a, int b);

/// Memoized multiplicities of Sym^m in Sym^{a_1} (x) ... (x) Sym^{a_r}.
/// Safe for concurrent use; entries are never removed, so returned references stay valid.
class BranchingTable {
 public:
  using Multiplicities = std::vector<std::int64_t>;  // indexed by degree m

  static BranchingTable& shared();

  /// Order of `exponents` is irrelevant; zero exponents are ignored.
  const Multiplicities& decompose(std::span<const int> exponents);
  std::int64_t multiplicity(std::span<const int> exponents, int degree);

  std::size_t size() const;
  /// One line per memoized tuple: `a1,a2,... : m=mult ...`.
  std::string export_text() const;

 private:
  const Multiplicities& decompose_sorted(const std::vector<int>& key);

  mutable std::shared_mutex mutex_;
  std::map<std::vector<int>, Multiplicities> memo_;
};

/// b_m(n_1, ..., n_r): product over primes of the per-prime multiplicity.
std::int64_t branching_coeff(std::span<const FactoredInt> tuple, const FactoredInt& m);
std::int64_t branching_coeff(std::span<const std::int64_t> tuple, std::int64_t m);

struct BranchingBoundReport {
  std::int64_t max_coeff = 0;
  std::int64_t bound = 1;  // prod tau(n_j)
  std::int64_t argmax = 1;
  bool ok = true;
};

/// Checks b_m <= prod tau(n_j) for every divisor m of prod n_j. Requires r <= 6 and n_j <= 30.
BranchingBoundReport branching_bound_check(std::span<const std::int64_t> tuple);

std::vector<std::int64_t> divisors(const FactoredInt& n);

}  // namespace heckelab

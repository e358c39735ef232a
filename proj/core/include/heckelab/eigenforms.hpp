#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heckelab/polynomial.hpp"

namespace heckelab {

/// Tolerance on |lambda_f(p)| <= 2 when tables are built or loaded.
inline constexpr double kDeligneTolerance = 1e-9;

/// Normalized Hecke eigenvalues lambda_f(p) = a_f(p) / p^{(k-1)/2} of one eigenform,
/// tabulated at every prime p <= prime_bound. Immutable after construction.
class EigenForm {
 public:
  /// `lambdas` and `coefficient_text` are aligned with `primes` (all primes <= prime_bound).
  /// `coefficient_text` holds a_f(p) in decimal: an exact integer when `exact`, otherwise
  /// a rounded scientific value. Throws NumericalError if some |lambda| > 2 + tolerance.
  EigenForm(int weight, int index, std::int64_t prime_bound, std::shared_ptr<const std::vector<std::int64_t>> primes,
            std::vector<double> lambdas, std::vector<std::string> coefficient_text, bool exact);

  /// Hypothetical form with lambda(p) = generator(p); used for model comparisons and tests.
  static EigenForm synthetic(int weight, std::int64_t prime_bound, const std::function<double(std::int64_t)>& generator);

  int weight() const { return weight_; }
  int index() const { return index_; }
  std::int64_t prime_bound() const { return prime_bound_; }
  bool covers(std::int64_t p) const { return p <= prime_bound_; }

  /// Throws CoverageError for p > prime_bound, std::invalid_argument when p is not prime.
  double lambda_p(std::int64_t p) const;
  /// theta_f(p) in [0, pi] with lambda_f(p) = 2 cos theta_f(p).
  double angle_p(std::int64_t p) const;

  std::span<const std::int64_t> primes() const { return *primes_; }
  std::span<const double> lambdas() const { return lambdas_; }

  bool has_exact_coefficients() const { return exact_; }
  /// Exact a_f(p); throws std::logic_error unless has_exact_coefficients().
  mpz_class exact_coefficient(std::int64_t p) const;
  const std::string& coefficient_text(std::int64_t p) const;

  friend bool operator==(const EigenForm& a, const EigenForm& b);

 private:
  std::size_t position(std::int64_t p) const;

  int weight_;
  int index_;
  std::int64_t prime_bound_;
  std::shared_ptr<const std::vector<std::int64_t>> primes_;
  std::vector<double> lambdas_;
  std::vector<std::string> text_;
  bool exact_;
};

struct ExpansionOptions {
  std::int64_t prime_bound = 100;
  // every n <= dense_bound is also kept (for composite-coefficient checks)
  std::int64_t dense_bound = 0;
};

/// All Hecke eigenforms of level one and weight k, as high-precision q-expansions
/// at a chosen index set. Forms are ordered by increasing T_2 eigenvalue.
class EigenSystem {
 public:
  static EigenSystem compute(int k, const ExpansionOptions& options);

  int weight() const { return weight_; }
  std::size_t dimension() const { return dimension_; }
  std::int64_t prime_bound() const { return prime_bound_; }
  const RationalMatrix& t2_matrix() const { return t2_; }
  const RationalPolynomial& t2_charpoly() const { return charpoly_; }
  mp_bitcnt_t precision_bits() const { return bits_; }
  // max |lambda| difference at sampled indices between two working precisions
  double self_check_error() const { return self_check_; }

  bool has_index(std::int64_t n) const;
  const std::vector<std::int64_t>& indices() const { return indices_; }
  /// a_f(n) (with a_f(1) = 1) for n in the stored index set.
  const mpf_class& coefficient(std::size_t form, std::int64_t n) const;
  /// Exact a_f(n), available only when dim S_k = 1.
  std::optional<mpz_class> exact_coefficient(std::size_t form, std::int64_t n) const;
  double lambda(std::size_t form, std::int64_t n) const;

  std::vector<EigenForm> forms() const;

 private:
  std::size_t slot(std::int64_t n) const;

  int weight_ = 0;
  std::size_t dimension_ = 0;
  std::int64_t prime_bound_ = 0;
  RationalMatrix t2_;
  RationalPolynomial charpoly_;
  mp_bitcnt_t bits_ = 0;
  double self_check_ = 0;
  std::vector<std::int64_t> indices_;
  std::vector<std::vector<mpf_class>> coeffs_;  // [form][slot]
  std::vector<mpz_class> exact_;                // [slot], dimension one only
};

/// Eigenforms of weight k with prime tables up to P.
std::vector<EigenForm> eigenforms(int k, std::int64_t prime_bound);

/// a / n^{(k-1)/2} computed at the precision of `a`.
double normalize_coefficient(const mpf_class& a, std::int64_t n, int k);

std::string to_scientific(const mpf_class& x, int digits);

}  // namespace heckelab

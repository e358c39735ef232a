#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heckelab/arith.hpp"
#include "heckelab/eigenforms.hpp"

namespace heckelab {

inline constexpr double kSignTolerance = 1e-12;

struct SumReport {
  double x = 0;
  double value = 0;
  double normalized = 0;  // value / (x log x); 0 when x <= 1
  std::int64_t term_count = 0;
};

SumReport make_sum_report(double x, double value, std::int64_t term_count);

/// S_f(x) = sum_{n <= x} lambda_f(n).
SumReport partial_sum(const EigenForm& form, double x);
/// S_f at each x of an increasing grid, in one pass.
std::vector<SumReport> sum_profile(const EigenForm& form, std::span<const double> xs);

/// Smallest n <= limit with lambda_f(n) < 0. Signs come from exact a_f(n) when the form carries
/// exact coefficients, otherwise lambda < -kSignTolerance decides.
std::optional<std::int64_t> first_sign_change(const EigenForm& form, std::int64_t limit);

/// alpha(log p / log x) = 2 cos(pi / (m+1)) with m = max{m : p^m <= x}; 0 for p > x.
double hx_prime_value(double x, std::int64_t p);
double hx_value(double x, const FactoredInt& n);
/// sum_{n <= x} h_x(n), enumerating squarefree n built from primes <= sqrt(x).
SumReport hx_sum(double x);

struct PositivityWitness {
  double x = 0;
  bool applicable = true;  // lambda_f(n) >= 0 for all n <= x
  double sum_lambda = 0;
  double sum_h = 0;
  bool holds = true;       // vacuously true when not applicable
};

PositivityWitness positivity_witness_check(const EigenForm& form, double x);

struct HxPrimeReport {
  double x = 0;
  double value = 0;       // sum_{p <= x} h_x(p) / p
  double difference = 0;  // value - 2 log log x
};

HxPrimeReport hx_prime_sum(double x);

class FriableWeight {
 public:
  enum class Kind { unit, tau, lambda };

  static FriableWeight unit() { return FriableWeight(Kind::unit, nullptr); }
  static FriableWeight tau() { return FriableWeight(Kind::tau, nullptr); }
  static FriableWeight lambda(const EigenForm& form) { return FriableWeight(Kind::lambda, &form); }

  Kind kind() const { return kind_; }
  const EigenForm* form() const { return form_; }

 private:
  FriableWeight(Kind k, const EigenForm* f) : kind_(k), form_(f) {}
  Kind kind_;
  const EigenForm* form_;
};

/// Psi(x, y; g) by depth-first enumeration over prime powers p^a with p <= y.
/// term_count is the number of y-friable n <= x (n = 1 included).
SumReport friable_sum(double x, double y, const FriableWeight& g);

struct DecayRow {
  double x = 0;
  double y = 0;
  double u = 0;
  double psi = 0;
  double normalized = 0;   // psi / (x log x)
  double bound_ratio = 0;  // psi e^{u/2} / (x log x)
};

struct DecayScan {
  std::vector<DecayRow> rows;
  double envelope = 0;  // constant every bound_ratio is compared against
  double max_ratio = 0;
  bool bounded = true;
};

/// Psi(x, y; tau) e^{u/2} / (x log x) over (x, y) pairs, each with 10 <= y <= x.
DecayScan friable_decay_scan(std::span<const std::pair<double, double>> grid, double envelope);

}  // namespace heckelab

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heckelab/eigenforms.hpp"

namespace heckelab {

struct Sym2Value {
  double value = 0;           // truncated Euler product of L(1, Sym^2 f)
  double error_estimate = 0;  // |L(P) - L(P/2)|
  std::int64_t truncation = 0;
};

/// prod_{p <= P} [(1 - (lambda(p)^2 - 2)/p + 1/p^2)(1 - 1/p)]^{-1}.
Sym2Value sym2_L1(const EigenForm& form, std::int64_t truncation);

struct HarmonicWeight {
  double omega = 0;  // 2 pi^2 / ((k - 1) L(1, Sym^2 f))
  Sym2Value l_value;
  double k_omega = 0;
};

struct HarmonicWeights {
  int weight = 0;
  std::int64_t truncation = 0;
  std::vector<HarmonicWeight> forms;
  double total = 0;  // sum of omega_f

  std::vector<double> omegas() const;
};

HarmonicWeights harmonic_weights(std::span<const EigenForm> forms, std::int64_t truncation);

struct PeterssonReport {
  std::int64_t n = 0;
  double average = 0;  // sum omega lambda(n) / sum omega
  double delta = 0;
  double deviation = 0;
};

PeterssonReport petersson_check(std::span<const EigenForm> forms, const HarmonicWeights& weights, std::int64_t n);

struct HarmonicMomentReport {
  int weight = 0;
  double x = 0;
  int ell = 0;
  double moment = 0;                  // normalized harmonic average of S_f(x)^{2 ell}
  std::optional<double> random_model;  // exact_moment(x, ell) when within budget
  double difference = 0;              // |moment - random_model|
  bool in_proven_range = false;       // x^{6 ell} <= k
};

HarmonicMomentReport harmonic_moment(std::span<const EigenForm> forms, const HarmonicWeights& weights, double x,
                                     int ell);

struct LargeSumReport {
  int weight = 0;
  double x = 0;
  double y = 0;  // log k / log log k
  std::vector<double> sums;  // S_f(x) per form
  double psi_tau_y = 0;      // Psi(x, y; tau)
  double divisor_sum = 0;    // sum_{n <= x} tau(n)
  double max_over_xlogx = 0;
  double max_over_psi = 0;
  double max_over_divisor_sum = 0;
  std::vector<std::pair<double, std::int64_t>> exceed_counts;  // threshold -> #forms with |S|/Psi above it
};

LargeSumReport large_sum_search(std::span<const EigenForm> forms, double x,
                                std::span<const double> thresholds = {});

}  // namespace heckelab

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "heckelab/eigenforms.hpp"

namespace heckelab {

using Complex = std::complex<double>;

struct TruncatedL {
  Complex value;
  std::int64_t terms = 0;
  double tail_bound = 0;  // bound on sum_{n > N} tau(n) / n^sigma
};

/// sum_{n <= N} tau(n) n^{-sigma} tail bound, valid for sigma > 1.
double divisor_tail_bound(double sigma, std::int64_t n);

/// sum_{n <= N} lambda_f(n) n^{-s}. Requires Re s >= 1 + 1/log N.
TruncatedL truncated_L(const EigenForm& form, Complex s, std::int64_t terms);

/// prod_{p <= y} (1 - lambda_f(p) p^{-s} + p^{-2s})^{-1}, as exp of the summed local logs.
Complex euler_Ly(const EigenForm& form, Complex s, double y);
/// sum of local log factors for p <= y (the log of euler_Ly without branch ambiguity).
Complex log_euler_Ly(const EigenForm& form, Complex s, double y);

/// sum over y-friable n <= N of lambda_f(n) n^{-s}.
Complex friable_dirichlet_sum(const EigenForm& form, Complex s, double y, std::int64_t terms);
/// Rankin bound on sum over y-friable n > N of tau(n) n^{-sigma}.
double friable_tail_bound(double sigma, double y, std::int64_t terms);

struct FriableApproxRow {
  double x = 0;
  double y = 0;
  double sum = 0;         // S_f(x)
  double psi_lambda = 0;  // Psi(x, y; lambda_f)
  double difference = 0;  // S - Psi
  double normalized = 0;  // |D| sqrt(y) / ((log k)(log y)^4 x log x)
};

struct FriableApproxReport {
  std::vector<FriableApproxRow> rows;
  double max_normalized = 0;
  double constant = 1;  // asserted bound on every normalized residual
  bool bounded = true;
};

/// Rows for each y of the grid (2 <= y). Both sums run over the same ordered terms, so D = 0 at y >= x.
FriableApproxReport friable_approx_check(const EigenForm& form, double x, std::span<const double> ys,
                                         double constant = 1.0);

struct LogRatioReport {
  Complex log_truncated;
  Complex log_euler;
  double difference = 0;  // |log L_N - log L_y|, imaginary part reduced mod 2 pi
  double tail_bound = 0;  // truncation tail of L_N, relative to |L_N|
  bool valid = true;      // false when L_N vanishes
};

LogRatioReport log_ratio_diagnostic(const EigenForm& form, Complex s, double y, std::int64_t terms);

}  // namespace heckelab

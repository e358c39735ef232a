#include "heckelab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heckelab/errors.hpp"
#include "heckelab/hecke_algebra.hpp"
#include "heckelab/sato_tate.hpp"
#include "heckelab/sums.hpp"

namespace heckelab {

namespace {

// sum over p <= limit of log of the inverse local factor, in ascending p
long double sym2_log_inverse(const EigenForm& form, std::int64_t limit) {
  long double acc = 0;
  const auto primes = form.primes();
  const auto lambdas = form.lambdas();
  for (std::size_t i = 0; i < primes.size() && primes[i] <= limit; ++i) {
    const long double p = static_cast<long double>(primes[i]);
    const long double l = lambdas[i];
    acc += std::log1p(-(l * l - 2) / p + 1 / (p * p)) + std::log1p(-1 / p);
  }
  return acc;
}

}  // namespace

Sym2Value sym2_L1(const EigenForm& form, std::int64_t truncation) {
  if (truncation < 2) throw std::invalid_argument("sym2_L1: truncation must be at least 2");
  if (!form.covers(truncation))
    throw CoverageError("sym2_L1: form covers primes up to " + std::to_string(form.prime_bound()) +
                        ", truncation " + std::to_string(truncation));
  Sym2Value v;
  v.truncation = truncation;
  v.value = static_cast<double>(std::exp(-sym2_log_inverse(form, truncation)));
  const double half = static_cast<double>(std::exp(-sym2_log_inverse(form, truncation / 2)));
  v.error_estimate = std::abs(v.value - half);
  return v;
}

std::vector<double> HarmonicWeights::omegas() const {
  std::vector<double> out;
  for (const auto& f : forms) out.push_back(f.omega);
  return out;
}

HarmonicWeights harmonic_weights(std::span<const EigenForm> forms, std::int64_t truncation) {
  if (forms.empty()) throw std::invalid_argument("harmonic_weights: no forms");
  HarmonicWeights w;
  w.weight = forms.front().weight();
  w.truncation = truncation;
  const double k = w.weight;
  for (const auto& f : forms) {
    HarmonicWeight h;
    h.l_value = sym2_L1(f, truncation);
    h.omega = 2 * std::numbers::pi * std::numbers::pi / ((k - 1) * h.l_value.value);
    h.k_omega = k * h.omega;
    w.total += h.omega;
    w.forms.push_back(h);
  }
  return w;
}

PeterssonReport petersson_check(std::span<const EigenForm> forms, const HarmonicWeights& weights, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("petersson_check: n must be positive");
  if (forms.size() != weights.forms.size()) throw std::invalid_argument("petersson_check: weights do not match forms");
  const FactoredInt f(n);
  double num = 0;
  for (std::size_t i = 0; i < forms.size(); ++i) num += weights.forms[i].omega * lambda_at(forms[i], f);
  PeterssonReport r;
  r.n = n;
  r.average = num / weights.total;
  r.delta = n == 1 ? 1.0 : 0.0;
  r.deviation = r.average - r.delta;
  return r;
}

HarmonicMomentReport harmonic_moment(std::span<const EigenForm> forms, const HarmonicWeights& weights, double x,
                                     int ell) {
  if (forms.size() != weights.forms.size()) throw std::invalid_argument("harmonic_moment: weights do not match forms");
  if (ell < 0) throw std::invalid_argument("harmonic_moment: negative order");
  HarmonicMomentReport r;
  r.weight = weights.weight;
  r.x = x;
  r.ell = ell;
  double num = 0;
  for (std::size_t i = 0; i < forms.size(); ++i)
    num += weights.forms[i].omega * std::pow(partial_sum(forms[i], x).value, 2 * ell);
  r.moment = num / weights.total;
  const auto limit = x < 1 ? std::int64_t{0} : static_cast<std::int64_t>(std::floor(x));
  r.in_proven_range = std::pow(static_cast<double>(limit), 6 * ell) <= r.weight;
  try {
    r.random_model = exact_moment(limit, ell).get_d();
    r.difference = std::abs(r.moment - *r.random_model);
  } catch (const BudgetExceeded&) {
  }
  return r;
}

LargeSumReport large_sum_search(std::span<const EigenForm> forms, double x, std::span<const double> thresholds) {
  if (forms.empty()) throw std::invalid_argument("large_sum_search: no forms");
  LargeSumReport r;
  r.weight = forms.front().weight();
  r.x = x;
  const double lk = std::log(static_cast<double>(r.weight));
  r.y = lk / std::log(lk);
  const auto limit = x < 1 ? std::int64_t{0} : static_cast<std::int64_t>(std::floor(x));
  const auto tau = divisor_tau_table(limit);
  for (std::int64_t n = 1; n <= limit; ++n) r.divisor_sum += static_cast<double>(tau[n]);
  r.psi_tau_y = (x >= 2 && r.y >= 2) ? friable_sum(x, std::min(r.y, x), FriableWeight::tau()).value : (limit >= 1 ? 1.0 : 0.0);
  for (const auto& f : forms) {
    const double s = partial_sum(f, x).value;
    r.sums.push_back(s);
    if (x > 1) r.max_over_xlogx = std::max(r.max_over_xlogx, std::abs(s) / (x * std::log(x)));
    if (r.psi_tau_y > 0) r.max_over_psi = std::max(r.max_over_psi, std::abs(s) / r.psi_tau_y);
    if (r.divisor_sum > 0) r.max_over_divisor_sum = std::max(r.max_over_divisor_sum, std::abs(s) / r.divisor_sum);
  }
  for (double t : thresholds) {
    std::int64_t c = 0;
    for (double s : r.sums)
      if (r.psi_tau_y > 0 && std::abs(s) / r.psi_tau_y > t) ++c;
    r.exceed_counts.emplace_back(t, c);
  }
  return r;
}

}  // namespace heckelab

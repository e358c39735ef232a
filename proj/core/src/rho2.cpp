#include "heckelab/rho2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heckelab/sums.hpp"

namespace heckelab {

namespace {

// Lagrange cubic through nodes s..s+3 evaluated at fractional offset t from node s.
double cubic(const std::vector<double>& v, std::size_t s, double t) {
  const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6;
  const double l1 = t * (t - 2) * (t - 3) / 2;
  const double l2 = -t * (t - 1) * (t - 3) / 2;
  const double l3 = t * (t - 1) * (t - 2) / 6;
  return l0 * v[s] + l1 * v[s + 1] + l2 * v[s + 2] + l3 * v[s + 3];
}

// value at node position `pos` (fractional index) whose unit interval starts at node `base`
double interpolate(const std::vector<double>& v, std::size_t base, std::size_t per_unit, double pos) {
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = base + per_unit - 3;
  const std::size_t s = std::clamp(i == 0 ? 0 : i - 1, base, hi);
  return cubic(v, s, pos - static_cast<double>(s));
}

}  // namespace

Rho2Table Rho2Table::build(double u_max, double step) {
  if (!(u_max >= 1)) throw std::invalid_argument("rho2: u_max must be at least 1");
  if (!(step > 0 && step <= 1e-3)) throw std::invalid_argument("rho2: step must lie in (0, 1e-3]");
  const double n_real = 1.0 / step;
  const auto n = static_cast<std::size_t>(std::llround(n_real));
  if (std::abs(n_real - static_cast<double>(n)) > 1e-9 * n_real)
    throw std::invalid_argument("rho2: 1/step must be an integer");

  Rho2Table t;
  t.per_unit_ = n;
  t.h_ = 1.0 / static_cast<double>(n);
  const auto total = static_cast<std::size_t>(std::ceil(u_max * static_cast<double>(n) - 1e-9));
  t.u_max_ = static_cast<double>(total) * t.h_;
  auto& v = t.values_;
  v.assign(total + 1, 0.0);
  for (std::size_t i = 0; i <= std::min(n, total); ++i) v[i] = static_cast<double>(i) * t.h_;

  const double h = t.h_;
  auto f = [](double u, double rho, double delayed) { return (rho - 2 * delayed) / u; };
  for (std::size_t i = n; i < total; ++i) {
    // step from node i to i+1 inside the unit interval [j, j+1]; delay reads [j-1, j]
    const std::size_t j = i / n;
    const std::size_t base = (j - 1) * n;
    const double u = static_cast<double>(i) * h;
    const double d0 = v[i - n];
    const double dm = interpolate(v, base, n, static_cast<double>(i - n) + 0.5);
    const double d1 = v[i + 1 - n];
    const double k1 = f(u, v[i], d0);
    const double k2 = f(u + h / 2, v[i] + h / 2 * k1, dm);
    const double k3 = f(u + h / 2, v[i] + h / 2 * k2, dm);
    const double k4 = f(u + h, v[i] + h * k3, d1);
    v[i + 1] = v[i] + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return t;
}

double Rho2Table::value(double u) const {
  if (!(u >= 0 && u <= u_max_ + 1e-12)) throw std::out_of_range("rho2: u outside the table");
  const double pos = std::min(u / h_, static_cast<double>(values_.size() - 1));
  const double r = std::round(pos);
  if (std::abs(pos - r) < 1e-9) return values_[static_cast<std::size_t>(r)];
  const auto unit = static_cast<std::size_t>(std::floor(u));
  std::size_t base = unit * per_unit_;
  if (base + per_unit_ >= values_.size()) base = values_.size() - 1 - per_unit_;
  return interpolate(values_, base, per_unit_, pos);
}

double Rho2Table::derivative_at(std::size_t i) const {
  const auto& v = values_;
  const std::size_t offset = i % per_unit_;
  const bool forward = offset + 4 <= per_unit_ && i + 4 < v.size();
  if (forward && (offset < 2 || i < 2)) {
    return (-25 * v[i] + 48 * v[i + 1] - 36 * v[i + 2] + 16 * v[i + 3] - 3 * v[i + 4]) / (12 * h_);
  }
  if (offset >= 2 && offset + 2 <= per_unit_ && i + 2 < v.size()) {
    return (v[i - 2] - 8 * v[i - 1] + 8 * v[i + 1] - v[i + 2]) / (12 * h_);
  }
  // backward, staying left of the next integer (or the table end)
  return (25 * v[i] - 48 * v[i - 1] + 36 * v[i - 2] - 16 * v[i - 3] + 3 * v[i - 4]) / (12 * h_);
}

double Rho2Table::max_residual(double u_lo, double u_hi) const {
  if (u_lo < 1) throw std::invalid_argument("rho2: residual is defined for u >= 1");
  const auto lo = static_cast<std::size_t>(std::ceil(u_lo / h_ - 1e-9));
  const auto hi = std::min(static_cast<std::size_t>(std::floor(u_hi / h_ + 1e-9)), values_.size() - 1);
  double worst = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double u = node(i);
    const double r = u * derivative_at(i) - values_[i] + 2 * values_[i - per_unit_];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::vector<DecayProfileRow> decay_profile(const Rho2Table& table, double u_lo, double u_hi, double du) {
  if (!(u_lo > 1) || !(du > 0)) throw std::invalid_argument("decay_profile: need u_lo > 1 and du > 0");
  std::vector<DecayProfileRow> rows;
  for (int i = 0;; ++i) {
    const double u = u_lo + i * du;
    if (u > u_hi + 1e-9) break;
    DecayProfileRow r;
    r.u = u;
    r.rho = table.value(u);
    r.profile = -std::log(r.rho) / (u * std::log(u));
    rows.push_back(r);
  }
  return rows;
}

double bruijn_ratio(const Rho2Table& table, double x, double y) {
  if (!(y >= 2 && y <= x)) throw std::invalid_argument("bruijn_ratio: need 2 <= y <= x");
  const double u = std::log(x) / std::log(y);
  const double psi = friable_sum(x, y, FriableWeight::tau()).value;
  return psi / (table.value(u) * x * std::log(y));
}

double decay_envelope_constant(const Rho2Table& table, double u_lo, double u_hi, double margin) {
  double best = 0;
  for (double u = u_lo; u <= u_hi + 1e-12; u += 0.01) best = std::max(best, table.value(u) * std::exp(u / 2) / u);
  return margin * best;
}

}  // namespace heckelab

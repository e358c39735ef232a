#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace heckelab {

/// rho_2 on a uniform grid of [0, u_max]: rho_2(u) = u on [0, 1] and
/// u rho_2'(u) = rho_2(u) - 2 rho_2(u - 1) beyond. Immutable once built.
class Rho2Table {
 public:
  /// RK4, restarted at each integer. Requires u_max >= 1, step <= 1e-3 and 1/step integral.
  static Rho2Table build(double u_max, double step);

  double step() const { return h_; }
  double u_max() const { return u_max_; }
  std::size_t steps_per_unit() const { return per_unit_; }
  std::span<const double> values() const { return values_; }
  double node(std::size_t i) const { return static_cast<double>(i) * h_; }

  /// Cubic interpolation with the stencil kept inside the unit interval containing u.
  /// Throws std::out_of_range outside [0, u_max].
  double value(double u) const;

  /// max |u rho' - rho + 2 rho(u-1)| over nodes in [u_lo, u_hi] (u_lo >= 1), with rho' from
  /// fifth-order one-sided differences that never straddle an integer.
  double max_residual(double u_lo, double u_hi) const;

 private:
  double derivative_at(std::size_t i) const;

  double h_ = 0;
  double u_max_ = 0;
  std::size_t per_unit_ = 0;
  std::vector<double> values_;
};

struct DecayProfileRow {
  double u = 0;
  double rho = 0;
  double profile = 0;  // -log rho / (u log u)
};

/// Rows at u = u_lo, u_lo + du, ..., u_hi (u_lo > 1).
std::vector<DecayProfileRow> decay_profile(const Rho2Table& table, double u_lo, double u_hi, double du);

/// Psi(x, y; tau) / (rho_2(u) x log y), u = log x / log y.
double bruijn_ratio(const Rho2Table& table, double x, double y);

/// margin * max_{u in [u_lo, u_hi]} rho_2(u) e^{u/2} / u: the envelope expected for
/// Psi(x, y; tau) e^{u/2} / (x log x).
double decay_envelope_constant(const Rho2Table& table, double u_lo, double u_hi, double margin);

}  // namespace heckelab

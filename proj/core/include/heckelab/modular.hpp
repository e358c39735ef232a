#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heckelab/polynomial.hpp"
#include "heckelab/power_series.hpp"

namespace heckelab {

/// E_4 = 1 + 240 sum sigma_3(n) q^n or E_6 = 1 - 504 sum sigma_5(n) q^n to precision N.
/// Throws std::invalid_argument for any other weight.
ZSeries eisenstein(int weight, std::size_t precision);

/// Bernoulli number B_n (B_1 = -1/2 convention).
mpq_class bernoulli(unsigned n);

/// scale * E_w as an integer series, for any even w >= 4; E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n.
struct ScaledEisenstein {
  ZSeries series;
  mpz_class scale;  // positive; series[0] == scale
};
ScaledEisenstein scaled_eisenstein(int weight, std::size_t precision);

/// Ramanujan Delta = (E_4^3 - E_6^2) / 1728, coefficients tau(n). Requires N >= 2.
ZSeries delta_expansion(std::size_t precision);

/// q prod (1 - q^n)^24 via the pentagonal number theorem; independent route to Delta.
ZSeries delta_eta_product(std::size_t precision);

/// Classical dimension of the space of level-one cusp forms of weight k (0 for odd or small k).
int cusp_form_dimension(int k);

/// Echelonized integral basis of S_k: form i (0-based) is q^{i+1} + O(q^{d+1}).
struct ModularBasis {
  int weight = 0;
  std::vector<ZSeries> forms;

  std::size_t dimension() const { return forms.size(); }
  std::size_t precision() const { return forms.empty() ? 0 : forms.front().precision(); }
};

/// Victor Miller basis from the products Delta^j E_6^{2(D-j)} E_4^a E_6^b by exact row reduction.
/// Throws PrecisionError if N <= dim + 1, std::invalid_argument for odd or too small k.
ModularBasis miller_basis(int k, std::size_t precision);

/// Matrix of T_p in the Miller basis: row i holds the coordinates of T_p f_i.
/// Requires precision >= p (d + 1) + 1.
RationalMatrix hecke_matrix(const ModularBasis& basis, std::int64_t p);

/// Coefficients of T_p applied to a q-series of weight k, valid for n < floor((N-1)/p) + 1.
ZSeries apply_hecke(const ZSeries& f, int k, std::int64_t p);

}  // namespace heckelab

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace heckelab {

/// Dense exact-rational matrix.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpq_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  mpq_class trace() const;
  RationalMatrix transposed() const;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

  static RationalMatrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpq_class> data_;
};

/// Univariate polynomial with rational coefficients, c[i] multiplies x^i.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<mpq_class> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coefficients() const { return c_; }
  const mpq_class& leading() const { return c_.back(); }

  RationalPolynomial derivative() const;
  RationalPolynomial monic() const;
  mpq_class operator()(const mpq_class& x) const;

  /// Quotient and remainder; throws std::domain_error on division by zero.
  static std::pair<RationalPolynomial, RationalPolynomial> divmod(const RationalPolynomial& a,
                                                                  const RationalPolynomial& b);
  static RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

  /// Primitive integer polynomial with the same roots and positive leading coefficient.
  std::vector<mpz_class> primitive_integer() const;

  std::string to_string() const;

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void normalize();
  std::vector<mpq_class> c_;
};

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion (exact).
RationalPolynomial characteristic_polynomial(const RationalMatrix& a);

/// True iff gcd(p, p') is constant.
bool is_squarefree(const RationalPolynomial& p);

/// Exact sign of an integer polynomial at an integer point.
int sign_at(const std::vector<mpz_class>& poly, const mpz_class& x);

/// Real roots of a squarefree integer polynomial with all roots real and inside
/// [-bound, bound], each refined to `bits` bits of precision. Roots ascending.
/// Isolation is certified by exact sign changes on an integer grid.
std::vector<mpf_class> real_roots(const std::vector<mpz_class>& poly, const mpz_class& bound, mp_bitcnt_t bits);

}  // namespace heckelab

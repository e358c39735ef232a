#include "heckelab/eigenforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "heckelab/arith.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/modular.hpp"
#include "heckelab/power_series.hpp"

namespace heckelab {

// ---------------------------------------------------------------------------
// EigenForm

EigenForm::EigenForm(int weight, int index, std::int64_t prime_bound,
                     std::shared_ptr<const std::vector<std::int64_t>> primes, std::vector<double> lambdas,
                     std::vector<std::string> coefficient_text, bool exact)
    : weight_(weight),
      index_(index),
      prime_bound_(prime_bound),
      primes_(std::move(primes)),
      lambdas_(std::move(lambdas)),
      text_(std::move(coefficient_text)),
      exact_(exact) {
  if (!primes_ || primes_->size() != lambdas_.size())
    throw std::invalid_argument("EigenForm: prime list and lambda table must align");
  if (!text_.empty() && text_.size() != lambdas_.size())
    throw std::invalid_argument("EigenForm: coefficient text must align with primes");
  if (!primes_->empty() && primes_->back() > prime_bound_)
    throw std::invalid_argument("EigenForm: prime exceeds the declared bound");
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    if (!(std::abs(lambdas_[i]) <= 2.0 + kDeligneTolerance)) {
      std::ostringstream os;
      os << "EigenForm: weight " << weight << " form " << index << " violates |lambda(p)| <= 2 at p = "
         << (*primes_)[i] << " (lambda = " << lambdas_[i] << ")";
      throw NumericalError(os.str());
    }
  }
}

EigenForm EigenForm::synthetic(int weight, std::int64_t prime_bound,
                               const std::function<double(std::int64_t)>& generator) {
  auto primes = std::make_shared<const std::vector<std::int64_t>>(primes_up_to(prime_bound));
  std::vector<double> lambdas;
  lambdas.reserve(primes->size());
  for (auto p : *primes) lambdas.push_back(generator(p));
  return EigenForm(weight, 0, prime_bound, std::move(primes), std::move(lambdas), {}, false);
}

std::size_t EigenForm::position(std::int64_t p) const {
  if (p > prime_bound_)
    throw CoverageError("EigenForm: prime " + std::to_string(p) + " exceeds table bound " +
                        std::to_string(prime_bound_));
  const auto it = std::lower_bound(primes_->begin(), primes_->end(), p);
  if (it == primes_->end() || *it != p) throw std::invalid_argument("EigenForm: " + std::to_string(p) + " is not prime");
  return static_cast<std::size_t>(it - primes_->begin());
}

double EigenForm::lambda_p(std::int64_t p) const { return lambdas_[position(p)]; }

double EigenForm::angle_p(std::int64_t p) const {
  return std::acos(std::clamp(lambda_p(p) / 2.0, -1.0, 1.0));
}

mpz_class EigenForm::exact_coefficient(std::int64_t p) const {
  if (!exact_) throw std::logic_error("EigenForm: exact coefficients are not available for this form");
  return mpz_class(text_[position(p)]);
}

const std::string& EigenForm::coefficient_text(std::int64_t p) const {
  if (text_.empty()) throw std::logic_error("EigenForm: no coefficient text recorded");
  return text_[position(p)];
}

bool operator==(const EigenForm& a, const EigenForm& b) {
  return a.weight_ == b.weight_ && a.index_ == b.index_ && a.prime_bound_ == b.prime_bound_ &&
         *a.primes_ == *b.primes_ && a.lambdas_ == b.lambdas_ && a.text_ == b.text_ && a.exact_ == b.exact_;
}

// ---------------------------------------------------------------------------
// helpers

double normalize_coefficient(const mpf_class& a, std::int64_t n, int k) {
  const mp_bitcnt_t prec = std::max<mp_bitcnt_t>(a.get_prec(), 128);
  // n^{(k-1)/2} = n^{(k-2)/2} sqrt(n); k is even
  mpz_class np;
  mpz_ui_pow_ui(np.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>((k - 2) / 2));
  mpf_class denom(np, prec);
  mpf_class root(static_cast<double>(n), prec);
  mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
  denom *= root;
  mpf_class q(0, prec);
  q = a / denom;
  return q.get_d();
}

std::string to_scientific(const mpf_class& x, int digits) {
  if (sgn(x) == 0) return "0";
  mp_exp_t exp = 0;
  std::string s = x.get_str(exp, 10, static_cast<std::size_t>(digits));
  std::string sign;
  if (!s.empty() && s[0] == '-') {
    sign = "-";
    s.erase(0, 1);
  }
  std::ostringstream os;
  os << sign << s[0];
  if (s.size() > 1) os << '.' << s.substr(1);
  os << 'e' << (exp - 1);
  return os.str();
}

namespace {

double log2_abs(const mpf_class& x) {
  if (sgn(x) == 0) return -1e300;
  long e = 0;
  const double m = mpf_get_d_2exp(&e, x.get_mpf_t());
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

double log2_abs(const mpz_class& x) {
  if (sgn(x) == 0) return -1e300;
  long e = 0;
  const double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

// Left eigenvector c of the integer matrix M for eigenvalue r, normalized c[0] = 1:
// c^T M = r c^T, so c holds a_f(1..d) of the eigenform.
std::vector<mpf_class> eigenvector(const RationalMatrix& m, const mpf_class& r, mp_bitcnt_t bits) {
  const std::size_t d = m.rows();
  std::vector<mpf_class> c(d, mpf_class(0, bits));
  c[0] = 1;
  if (d == 1) return c;
  // rows: equations i (0..d-1); columns: unknowns c_1..c_{d-1}, last column = rhs
  const std::size_t cols = d;
  std::vector<std::vector<mpf_class>> a(d, std::vector<mpf_class>(cols, mpf_class(0, bits)));
  for (std::size_t i = 0; i < d; ++i) {
    // (M^T - r I)_{ij} = M_{ji} - r delta_ij
    for (std::size_t j = 1; j < d; ++j) {
      a[i][j - 1] = mpf_class(m(j, i), bits);
      if (i == j) a[i][j - 1] -= r;
    }
    mpf_class a0(m(0, i), bits);
    if (i == 0) a0 -= r;
    a[i][cols - 1] = -a0;
  }
  const std::size_t unknowns = d - 1;
  mpf_class factor(0, bits), best(0, bits), cur(0, bits);
  for (std::size_t col = 0; col < unknowns; ++col) {
    std::size_t piv = col;
    best = abs(a[col][col]);
    for (std::size_t row = col + 1; row < d; ++row) {
      cur = abs(a[row][col]);
      if (cur > best) {
        best = cur;
        piv = row;
      }
    }
    if (sgn(best) == 0) throw NumericalError("eigenvector: singular elimination (eigenspace not one-dimensional)");
    std::swap(a[col], a[piv]);
    for (std::size_t row = col + 1; row < d; ++row) {
      if (sgn(a[row][col]) == 0) continue;
      factor = a[row][col] / a[col][col];
      for (std::size_t j = col; j < cols; ++j) a[row][j] -= factor * a[col][j];
    }
  }
  for (std::size_t col = unknowns; col-- > 0;) {
    mpf_class acc(a[col][cols - 1], bits);
    for (std::size_t j = col + 1; j < unknowns; ++j) acc -= a[col][j] * c[j + 1];
    c[col + 1] = acc / a[col][col];
  }
  return c;
}

struct Generators {
  std::vector<std::vector<mpz_class>> values;  // [j][slot] for the stored index set
  std::vector<std::vector<mpz_class>> head;    // [j][n] for n = 0..d
};

// g_j = Delta^j * (scale * E_{k-12j}), j = 1..d: unit-triangular up to scale, span S_k.
Generators build_generators(int k, std::size_t d, const std::vector<std::int64_t>& indices, std::size_t precision) {
  Generators g;
  g.values.resize(d);
  g.head.resize(d);
  const ZSeries delta = delta_expansion(precision);
  ZSeries delta_pow = ZSeries::one(precision);
  for (std::size_t j = 1; j <= d; ++j) {
    delta_pow = delta_pow * delta;
    const int w = k - 12 * static_cast<int>(j);
    ZSeries prod = delta_pow;
    if (w >= 4) prod = delta_pow * scaled_eisenstein(w, precision).series;
    else if (w != 0) throw std::logic_error("build_generators: unexpected residual weight");
    auto& vals = g.values[j - 1];
    vals.reserve(indices.size());
    for (auto n : indices) vals.push_back(prod[static_cast<std::size_t>(n)]);
    for (std::size_t n = 0; n <= d; ++n) g.head[j - 1].push_back(prod[n]);
  }
  return g;
}

struct Solution {
  std::vector<std::vector<mpf_class>> e;  // [form][j]
};

Solution solve_forms(const RationalMatrix& t2, const std::vector<mpz_class>& charpoly_int, int k,
                     const Generators& gen, mp_bitcnt_t bits) {
  const std::size_t d = t2.rows();
  mpz_class bound = 1;
  bound <<= static_cast<unsigned>((k + 2) / 2);  // >= 2 * 2^{(k-1)/2}
  const auto roots = real_roots(charpoly_int, bound, bits);
  if (roots.size() != d) throw NumericalError("eigenforms: wrong number of T_2 eigenvalues");
  Solution sol;
  for (const auto& r : roots) {
    const auto c = eigenvector(t2, r, bits);
    std::vector<mpf_class> e(d, mpf_class(0, bits));
    for (std::size_t n = 1; n <= d; ++n) {
      mpf_class acc(c[n - 1], bits);
      for (std::size_t j = 1; j < n; ++j) acc -= e[j - 1] * mpf_class(gen.head[j - 1][n], bits);
      e[n - 1] = acc / mpf_class(gen.head[n - 1][n], bits);
    }
    sol.e.push_back(std::move(e));
  }
  return sol;
}

mpf_class combine(const std::vector<mpf_class>& e, const Generators& gen, std::size_t slot, mp_bitcnt_t bits) {
  mpf_class acc(0, bits), term(0, bits);
  for (std::size_t j = 0; j < e.size(); ++j) {
    term = gen.values[j][slot];
    acc += e[j] * term;
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// EigenSystem

EigenSystem EigenSystem::compute(int k, const ExpansionOptions& options) {
  const int dim = cusp_form_dimension(k);
  if (dim < 1) throw std::invalid_argument("eigenforms: S_k is zero for k = " + std::to_string(k));
  if (options.prime_bound < 2) throw std::invalid_argument("eigenforms: prime bound must be at least 2");
  const auto d = static_cast<std::size_t>(dim);

  EigenSystem sys;
  sys.weight_ = k;
  sys.dimension_ = d;
  sys.prime_bound_ = options.prime_bound;

  const ModularBasis basis = miller_basis(k, 2 * (d + 1) + 2);
  sys.t2_ = hecke_matrix(basis, 2);
  sys.charpoly_ = characteristic_polynomial(sys.t2_);
  if (!is_squarefree(sys.charpoly_))
    throw RepeatedEigenvalueError("eigenforms: T_2 has a repeated eigenvalue in weight " + std::to_string(k));
  const auto charpoly_int = sys.charpoly_.primitive_integer();

  // index set: 1..max(d, dense_bound) and all primes up to the bound
  std::vector<std::int64_t> idx;
  const std::int64_t dense = std::max<std::int64_t>(options.dense_bound, static_cast<std::int64_t>(d));
  for (std::int64_t n = 1; n <= dense; ++n) idx.push_back(n);
  for (auto p : primes_up_to(options.prime_bound))
    if (p > dense) idx.push_back(p);
  sys.indices_ = idx;
  const std::size_t precision = static_cast<std::size_t>(std::max(dense, options.prime_bound)) + 1;

  const Generators gen = build_generators(k, d, idx, precision);

  if (d == 1) {
    // the single generator is the eigenform up to its scale
    const mpz_class& scale = gen.head[0][1];
    sys.exact_.resize(idx.size());
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (!mpz_divisible_p(gen.values[0][s].get_mpz_t(), scale.get_mpz_t()))
        throw NumericalError("eigenforms: one-dimensional generator not divisible by its scale");
      mpz_divexact(sys.exact_[s].get_mpz_t(), gen.values[0][s].get_mpz_t(), scale.get_mpz_t());
    }
  }

  // Working precision must absorb cancellation in sum_j e_j g_j(n) relative to n^{(k-1)/2}.
  const Solution probe = solve_forms(sys.t2_, charpoly_int, k, gen, 256 + 64 * static_cast<mp_bitcnt_t>(d));
  double cancel = 0;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    const double scale = 0.5 * (k - 1) * std::log2(static_cast<double>(idx[s]));
    for (const auto& e : probe.e)
      for (std::size_t j = 0; j < d; ++j)
        cancel = std::max(cancel, log2_abs(e[j]) + log2_abs(gen.values[j][s]) - scale);
  }

  std::vector<std::size_t> sample;
  for (std::size_t s = 0; s < idx.size(); ++s)
    if (idx[s] <= 1000 || s % 61 == 0 || s + 1 == idx.size()) sample.push_back(s);

  auto bits = static_cast<mp_bitcnt_t>(std::ceil(cancel)) + 192;
  for (int attempt = 0;; ++attempt) {
    const mp_bitcnt_t root_bits = bits + 64 * d + 128;
    const Solution sol = solve_forms(sys.t2_, charpoly_int, k, gen, root_bits);
    const Solution check = solve_forms(sys.t2_, charpoly_int, k, gen, root_bits + 192);
    double err = 0;
    for (std::size_t f = 0; f < d; ++f)
      for (auto s : sample) {
        const double a = normalize_coefficient(combine(sol.e[f], gen, s, bits), idx[s], k);
        const double b = normalize_coefficient(combine(check.e[f], gen, s, bits + 192), idx[s], k);
        err = std::max(err, std::abs(a - b));
      }
    if (err <= 1e-25 || attempt >= 4) {
      if (err > 1e-25)
        throw NumericalError("eigenforms: precision self-check failed in weight " + std::to_string(k));
      sys.bits_ = bits;
      sys.self_check_ = err;
      sys.coeffs_.assign(d, {});
      for (std::size_t f = 0; f < d; ++f) {
        sys.coeffs_[f].reserve(idx.size());
        for (std::size_t s = 0; s < idx.size(); ++s) sys.coeffs_[f].push_back(combine(sol.e[f], gen, s, bits));
      }
      break;
    }
    bits = bits * 3 / 2;
  }
  return sys;
}

bool EigenSystem::has_index(std::int64_t n) const {
  return std::binary_search(indices_.begin(), indices_.end(), n);
}

std::size_t EigenSystem::slot(std::int64_t n) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), n);
  if (it == indices_.end() || *it != n)
    throw CoverageError("EigenSystem: coefficient index " + std::to_string(n) + " was not expanded");
  return static_cast<std::size_t>(it - indices_.begin());
}

const mpf_class& EigenSystem::coefficient(std::size_t form, std::int64_t n) const {
  return coeffs_.at(form)[slot(n)];
}

std::optional<mpz_class> EigenSystem::exact_coefficient(std::size_t form, std::int64_t n) const {
  if (exact_.empty() || form != 0) return std::nullopt;
  return exact_[slot(n)];
}

double EigenSystem::lambda(std::size_t form, std::int64_t n) const {
  if (!exact_.empty()) return normalize_coefficient(mpf_class(exact_[slot(n)], bits_), n, weight_);
  return normalize_coefficient(coefficient(form, n), n, weight_);
}

std::vector<EigenForm> EigenSystem::forms() const {
  auto primes = std::make_shared<const std::vector<std::int64_t>>(primes_up_to(prime_bound_));
  std::vector<EigenForm> out;
  const bool exact = !exact_.empty();
  for (std::size_t f = 0; f < dimension_; ++f) {
    std::vector<double> lambdas;
    std::vector<std::string> text;
    lambdas.reserve(primes->size());
    text.reserve(primes->size());
    for (auto p : *primes) {
      lambdas.push_back(lambda(f, p));
      text.push_back(exact ? exact_[slot(p)].get_str() : to_scientific(coefficient(f, p), 40));
    }
    out.emplace_back(weight_, static_cast<int>(f), prime_bound_, primes, std::move(lambdas), std::move(text), exact);
  }
  return out;
}

std::vector<EigenForm> eigenforms(int k, std::int64_t prime_bound) {
  return EigenSystem::compute(k, {prime_bound, 0}).forms();
}

}  // namespace heckelab

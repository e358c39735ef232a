#include "heckelab/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace heckelab {

mpq_class RationalMatrix::trace() const {
  mpq_class t = 0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

RationalMatrix RationalMatrix::transposed() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("RationalMatrix: dimension mismatch");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RationalMatrix: dimension mismatch");
  RationalMatrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
  return out;
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalPolynomial::RationalPolynomial(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { normalize(); }

void RationalPolynomial::normalize() {
  for (auto& x : c_) x.canonicalize();
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<mpq_class> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::monic() const {
  if (c_.empty()) return {};
  std::vector<mpq_class> m(c_);
  const mpq_class lc = c_.back();
  for (auto& x : m) x /= lc;
  return RationalPolynomial(std::move(m));
}

mpq_class RationalPolynomial::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

std::pair<RationalPolynomial, RationalPolynomial> RationalPolynomial::divmod(const RationalPolynomial& a,
                                                                             const RationalPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("RationalPolynomial::divmod: division by zero polynomial");
  if (a.degree() < b.degree()) return {RationalPolynomial{}, a};
  std::vector<mpq_class> r = a.c_;
  std::vector<mpq_class> q(a.c_.size() - b.c_.size() + 1);
  const int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    const mpq_class f = r[i] / b.c_.back();
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c_[j];
  }
  r.resize(db);
  return {RationalPolynomial(std::move(q)), RationalPolynomial(std::move(r))};
}

RationalPolynomial RationalPolynomial::gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<mpz_class> RationalPolynomial::primitive_integer() const {
  std::vector<mpz_class> out(c_.size());
  if (c_.empty()) return out;
  mpz_class l = 1;
  for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    out[i] = c_[i].get_num() * (l / c_[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (sgn(out.back()) < 0) g = -g;
  for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return out;
}

std::string RationalPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << (sgn(c_[i]) < 0 ? " - " : " + ");
    else if (sgn(c_[i]) < 0) os << "-";
    first = false;
    os << abs(c_[i]);
    if (i >= 1) os << "*x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

RationalPolynomial characteristic_polynomial(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("characteristic_polynomial: matrix must be square");
  const std::size_t n = a.rows();
  // c[n] = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
  std::vector<mpq_class> c(n + 1);
  c[n] = 1;
  RationalMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    c[n - k] = -(a * m).trace() / static_cast<unsigned long>(k);
  }
  return RationalPolynomial(std::move(c));
}

bool is_squarefree(const RationalPolynomial& p) {
  if (p.degree() <= 0) return true;
  return RationalPolynomial::gcd(p, p.derivative()).degree() == 0;
}

int sign_at(const std::vector<mpz_class>& poly, const mpz_class& x) {
  mpz_class acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) {
    acc *= x;
    acc += poly[i];
  }
  return sgn(acc);
}

namespace {

struct Bracket {
  mpz_class lo, hi;  // scaled integer endpoints
  bool exact = false;
};

// p(y / 2^s) * 2^{s deg}: roots scaled by 2^s, coefficients stay integral.
std::vector<mpz_class> scale_roots(const std::vector<mpz_class>& p, unsigned s) {
  std::vector<mpz_class> out(p);
  const std::size_t d = p.size() - 1;
  for (std::size_t i = 0; i <= d; ++i) mpz_mul_2exp(out[i].get_mpz_t(), p[i].get_mpz_t(), s * (d - i));
  return out;
}

mpf_class refine(const std::vector<mpf_class>& c, mpf_class lo, mpf_class hi, int sign_lo, mp_bitcnt_t bits) {
  mpf_class x(0, bits), px(0, bits), dpx(0, bits), step(0, bits), cand(0, bits), tol(0, bits), width(0, bits);
  x = (lo + hi) / 2;
  for (int iter = 0; iter < 100000; ++iter) {
    px = 0;
    dpx = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      dpx = dpx * x + px;
      px = px * x + c[i];
    }
    if (sgn(px) == 0) return x;
    if (sgn(px) == sign_lo) lo = x;
    else hi = x;
    width = hi - lo;
    tol = abs(x) + 1;
    mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), bits - 8);
    if (width <= tol) return x;
    bool use_newton = sgn(dpx) != 0;
    if (use_newton) {
      step = px / dpx;
      cand = x - step;
      use_newton = cand > lo && cand < hi;
    }
    if (use_newton) {
      if (abs(step) <= tol) return cand;
      x = cand;
    } else {
      x = (lo + hi) / 2;
    }
  }
  throw std::runtime_error("real_roots: refinement did not converge");
}

}  // namespace

std::vector<mpf_class> real_roots(const std::vector<mpz_class>& poly, const mpz_class& bound, mp_bitcnt_t bits) {
  if (poly.size() < 2) return {};
  const std::size_t d = poly.size() - 1;

  std::vector<Bracket> found;
  unsigned scale_bits = 0;
  std::vector<mpz_class> p = poly;
  mpz_class b = bound;
  std::size_t grid = 64 * d;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 200) throw std::runtime_error("real_roots: failed to isolate roots");
    // integer grid step; rescale the roots when the grid gets too fine
    mpz_class step = 2 * b / static_cast<unsigned long>(grid);
    while (step < 1) {
      p = scale_roots(p, 8);
      scale_bits += 8;
      b <<= 8;
      step = 2 * b / static_cast<unsigned long>(grid);
    }
    found.clear();
    mpz_class prev_x = -b;
    int prev_sign = sign_at(p, prev_x);
    if (prev_sign == 0) found.push_back({prev_x, prev_x, true});
    for (std::size_t i = 1; i <= grid; ++i) {
      mpz_class x = -b + step * static_cast<unsigned long>(i);
      const int s = sign_at(p, x);
      if (s == 0) found.push_back({x, x, true});
      else if (prev_sign != 0 && s != prev_sign) found.push_back({prev_x, x, false});
      prev_x = x;
      prev_sign = s;
    }
    if (found.size() == d) break;
    if (found.size() > d) throw std::logic_error("real_roots: more sign changes than the degree");
    grid *= 4;
  }

  const mp_bitcnt_t work = bits + 64;
  std::size_t coeff_bits = 0;
  for (const auto& x : p) coeff_bits = std::max(coeff_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  const mp_bitcnt_t cprec = std::max<mp_bitcnt_t>(work, coeff_bits + 64);
  std::vector<mpf_class> c;
  c.reserve(p.size());
  for (const auto& x : p) c.emplace_back(x, cprec);

  std::vector<mpf_class> roots;
  for (const auto& br : found) {
    mpf_class r(0, work);
    if (br.exact) {
      r = br.lo;
    } else {
      const int s_lo = sign_at(p, br.lo);
      r = refine(c, mpf_class(br.lo, cprec), mpf_class(br.hi, cprec), s_lo, work);
    }
    mpf_div_2exp(r.get_mpf_t(), r.get_mpf_t(), scale_bits);
    roots.emplace_back(r, bits);
  }
  return roots;
}

}  // namespace heckelab

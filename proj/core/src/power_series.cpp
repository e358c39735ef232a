#include "heckelab/power_series.hpp"

#include <cstring>

namespace heckelab::detail {
namespace {

constexpr std::size_t kKroneckerMinLength = 48;

std::size_t max_bits(const std::vector<mpz_class>& a, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(a[i]) != 0) best = std::max(best, mpz_sizeinbase(a[i].get_mpz_t(), 2));
  return best;
}

std::size_t effective_length(const std::vector<mpz_class>& a, std::size_t n) {
  std::size_t len = std::min(a.size(), n);
  while (len > 0 && sgn(a[len - 1]) == 0) --len;
  return len;
}

// Packs |a_i| for coefficients of the requested sign into slots of `slot` limbs.
mpz_class pack(const std::vector<mpz_class>& a, std::size_t len, std::size_t slot, int sign) {
  mpz_class z;
  if (len == 0) return z;
  const std::size_t total = len * slot;
  mp_limb_t* out = mpz_limbs_write(z.get_mpz_t(), static_cast<mp_size_t>(total));
  std::memset(out, 0, total * sizeof(mp_limb_t));
  for (std::size_t i = 0; i < len; ++i) {
    if (sgn(a[i]) != sign) continue;
    const std::size_t sz = mpz_size(a[i].get_mpz_t());
    std::memcpy(out + i * slot, mpz_limbs_read(a[i].get_mpz_t()), sz * sizeof(mp_limb_t));
  }
  mpz_limbs_finish(z.get_mpz_t(), static_cast<mp_size_t>(total));
  return z;
}

mpz_class pack_signed(const std::vector<mpz_class>& a, std::size_t len, std::size_t slot) {
  return pack(a, len, slot, 1) - pack(a, len, slot, -1);
}

void set_from_limbs(mpz_class& dst, const mp_limb_t* limbs, std::size_t n, bool negative) {
  if (n == 0) {
    dst = 0;
    return;
  }
  mp_limb_t* w = mpz_limbs_write(dst.get_mpz_t(), static_cast<mp_size_t>(n));
  std::memcpy(w, limbs, n * sizeof(mp_limb_t));
  mpz_limbs_finish(dst.get_mpz_t(), negative ? -static_cast<mp_size_t>(n) : static_cast<mp_size_t>(n));
}

}  // namespace

std::vector<mpz_class> multiply_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                           std::size_t precision) {
  std::vector<mpz_class> out(precision);
  const std::size_t la = std::min(a.size(), precision);
  const std::size_t lb = std::min(b.size(), precision);
  for (std::size_t i = 0; i < la; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < lb && i + j < precision; ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

std::vector<mpz_class> multiply_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                          std::size_t precision) {
  std::vector<mpz_class> out(precision);
  const std::size_t la = effective_length(a, precision);
  const std::size_t lb = effective_length(b, precision);
  if (la == 0 || lb == 0) return out;

  // |c_n| <= min(la, lb) * max|a| * max|b|; one extra bit for the sign.
  std::size_t bound_bits = max_bits(a, la) + max_bits(b, lb) + 2;
  for (std::size_t m = std::min(la, lb); m > 0; m >>= 1U) ++bound_bits;
  const std::size_t slot = (bound_bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;

  const mpz_class x = pack_signed(a, la, slot);
  const mpz_class y = pack_signed(b, lb, slot);
  mpz_class z = x * y;
  const bool z_negative = sgn(z) < 0;
  if (z_negative) z = -z;

  const mp_limb_t* limbs = mpz_limbs_read(z.get_mpz_t());
  const std::size_t zsize = mpz_size(z.get_mpz_t());
  std::vector<mp_limb_t> buf(slot);
  mp_limb_t carry = 0;
  const std::size_t count = std::min(precision, la + lb - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t begin = i * slot;
    for (std::size_t t = 0; t < slot; ++t) buf[t] = begin + t < zsize ? limbs[begin + t] : 0;
    if (carry != 0) carry = mpn_add_1(buf.data(), buf.data(), static_cast<mp_size_t>(slot), carry);
    if (carry != 0) {
      // slot wrapped from all ones to zero; digit is zero and the carry moves on
      continue;
    }
    const bool top = (buf[slot - 1] >> (GMP_NUMB_BITS - 1)) != 0;
    if (top) {
      mpn_neg(buf.data(), buf.data(), static_cast<mp_size_t>(slot));
      carry = 1;
    }
    std::size_t n = slot;
    while (n > 0 && buf[n - 1] == 0) --n;
    const bool negative = top != z_negative;
    set_from_limbs(out[i], buf.data(), n, negative);
  }
  return out;
}

std::vector<mpz_class> multiply_integer(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                        std::size_t precision) {
  if (std::min(a.size(), b.size()) < kKroneckerMinLength) return multiply_schoolbook(a, b, precision);
  return multiply_kronecker(a, b, precision);
}

}  // namespace heckelab::detail

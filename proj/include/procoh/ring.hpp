#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

namespace procoh {

struct ring_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Coefficient ring: W = Z/ell^power with canonical representatives in
 * [0, ell^power), or the exact rationals. Moduli are capped below 2^31 so
 * that products of canonical representatives never overflow int64. */
struct RingSpec {
  enum class Kind { modular, rational };
  Kind kind = Kind::rational;
  int64_t ell = 0;
  int power = 0;
  int64_t modulus = 0;

  static RingSpec modular(int64_t ell, int power);
  static RingSpec rationals() { return RingSpec{}; }

  bool is_modular() const { return kind == Kind::modular; }
  bool operator==(const RingSpec& o) const {
    return kind == o.kind && modulus == o.modulus;
  }
  std::string str() const;
};

bool is_prime(int64_t p);

// canonical representative in [0, m)
inline int64_t mod_reduce(int64_t x, int64_t m) {
  int64_t r = x % m;
  return r < 0 ? r + m : r;
}
inline int64_t mod_add(int64_t a, int64_t b, int64_t m) { return (a + b) % m; }
inline int64_t mod_sub(int64_t a, int64_t b, int64_t m) {
  int64_t r = a - b;
  return r < 0 ? r + m : r;
}
inline int64_t mod_mul(int64_t a, int64_t b, int64_t m) { return (a * b) % m; }
inline int64_t mod_neg(int64_t a, int64_t m) { return a == 0 ? 0 : m - a; }

// ell-adic valuation of a residue; returns `power` for the zero class
int ell_val(int64_t x, int64_t ell, int power);
// x = unit * ell^val; returns the unit part of a nonzero residue
int64_t unit_part(int64_t x, int64_t ell);
// inverse of a unit mod m (extended Euclid)
int64_t mod_inv(int64_t u, int64_t m);
int64_t mod_pow(int64_t base, int64_t e, int64_t m);

mpz_class ipow(int64_t base, int e);

/* Generalized binomial coefficient binom(x, k) for integer x (negative
 * allowed) and k >= 0; exact over Z. */
mpz_class binom_z(int64_t x, int64_t k);
// binom reduced into Z/m; memoized, the polynomial engines hit this hard
int64_t binom_mod(int64_t x, int64_t k, int64_t m);
mpq_class binom_q(const mpq_class& x, int64_t k);

inline int64_t to_mod(const mpz_class& z, int64_t m) {
  mpz_class r = z % m;
  if (r < 0) r += m;
  return r.get_si();
}
// rational -> Z/m; throws if the denominator is not invertible mod m
int64_t rat_to_mod(const mpq_class& q, int64_t m);

}  // namespace procoh

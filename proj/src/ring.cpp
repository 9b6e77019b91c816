#include "procoh/ring.hpp"

#include <map>

namespace procoh {

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

RingSpec RingSpec::modular(int64_t ell, int power) {
  if (!is_prime(ell)) throw ring_error("RingSpec: ell must be prime, got " + std::to_string(ell));
  if (power < 1) throw ring_error("RingSpec: power must be >= 1");
  mpz_class m = ipow(ell, power);
  if (m >= mpz_class(1) << 31) throw ring_error("RingSpec: modulus ell^power exceeds 2^31");
  RingSpec r;
  r.kind = Kind::modular;
  r.ell = ell;
  r.power = power;
  r.modulus = m.get_si();
  return r;
}

std::string RingSpec::str() const {
  if (!is_modular()) return "Q";
  return "Z/" + std::to_string(ell) + "^" + std::to_string(power);
}

int ell_val(int64_t x, int64_t ell, int power) {
  if (x == 0) return power;
  int v = 0;
  while (x % ell == 0) {
    x /= ell;
    ++v;
  }
  return v;
}

int64_t unit_part(int64_t x, int64_t ell) {
  while (x % ell == 0) x /= ell;
  return x;
}

int64_t mod_inv(int64_t u, int64_t m) {
  int64_t t = 0, newt = 1, r = m, newr = mod_reduce(u, m);
  while (newr != 0) {
    int64_t q = r / newr;
    int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw ring_error("mod_inv: not a unit");
  return mod_reduce(t, m);
}

int64_t mod_pow(int64_t base, int64_t e, int64_t m) {
  base = mod_reduce(base, m);
  int64_t acc = 1 % m;
  while (e > 0) {
    if (e & 1) acc = mod_mul(acc, base, m);
    base = mod_mul(base, base, m);
    e >>= 1;
  }
  return acc;
}

mpz_class ipow(int64_t base, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

mpz_class binom_z(int64_t x, int64_t k) {
  if (k < 0) return 0;
  if (x >= 0 && x < k) return 0;
  // binom(-x, k) = (-1)^k binom(x+k-1, k)
  if (x < 0) {
    mpz_class b = binom_z(-x + k - 1, k);
    return (k % 2 == 0) ? b : mpz_class(-b);
  }
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(k));
  return r;
}

int64_t binom_mod(int64_t x, int64_t k, int64_t m) {
  struct Key {
    int64_t x, k, m;
    bool operator<(const Key& o) const {
      if (x != o.x) return x < o.x;
      if (k != o.k) return k < o.k;
      return m < o.m;
    }
  };
  static thread_local std::map<Key, int64_t> cache;
  Key key{x, k, m};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int64_t v = to_mod(binom_z(x, k), m);
  cache.emplace(key, v);
  return v;
}

mpq_class binom_q(const mpq_class& x, int64_t k) {
  if (k < 0) return 0;
  mpq_class num = 1;
  for (int64_t t = 0; t < k; ++t) num *= (x - t);
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
  mpq_class r = num / mpq_class(fact);
  r.canonicalize();
  return r;
}

int64_t rat_to_mod(const mpq_class& q, int64_t m) {
  mpz_class den = q.get_den();
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), mpz_class(m).get_mpz_t());
  if (g != 1) throw ring_error("rat_to_mod: denominator not invertible mod " + std::to_string(m));
  int64_t d = to_mod(den, m);
  int64_t n = to_mod(q.get_num(), m);
  return mod_mul(n, mod_inv(d, m), m);
}

}  // namespace procoh

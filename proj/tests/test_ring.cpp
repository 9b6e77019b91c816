#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "procoh/ring.hpp"

using namespace procoh;

TEST_CASE("modular ring spec validation") {
  auto r = RingSpec::modular(3, 2);
  CHECK(r.modulus == 9);
  CHECK(r.str() == "Z/3^2");
  CHECK_THROWS_AS(RingSpec::modular(4, 1), ring_error);
  CHECK_THROWS_AS(RingSpec::modular(3, 0), ring_error);
  CHECK_THROWS_AS(RingSpec::modular(2, 40), ring_error);
  CHECK(!RingSpec::rationals().is_modular());
}

TEST_CASE("valuations and units") {
  CHECK(ell_val(0, 3, 2) == 2);
  CHECK(ell_val(6, 3, 2) == 1);
  CHECK(ell_val(4, 3, 2) == 0);
  CHECK(unit_part(6, 3) == 2);
  CHECK(mod_inv(2, 9) == 5);
  CHECK(mod_pow(4, 5, 9) == 7);  // gamma = 1+3 acting five times
}

TEST_CASE("generalized binomial") {
  CHECK(binom_z(4, 2) == 6);
  CHECK(binom_z(5, 0) == 1);
  CHECK(binom_z(2, 5) == 0);
  // binom(-1, k) = (-1)^k
  CHECK(binom_z(-1, 3) == -1);
  CHECK(binom_z(-1, 4) == 1);
  CHECK(binom_z(-3, 2) == 6);
  CHECK(binom_mod(5, 2, 9) == 1);
  CHECK(binom_q(mpq_class(1, 2), 2) == mpq_class(-1, 8));
}

TEST_CASE("binomial sum reproduces gamma powers") {
  // gamma = 4 = 1+3 in Z/9: gamma^x = sum_k binom(x,k) 3^k
  for (int64_t x = -6; x <= 6; ++x) {
    int64_t direct = x >= 0 ? mod_pow(4, x, 9) : mod_pow(mod_inv(4, 9), -x, 9);
    int64_t series = 0;
    for (int64_t k = 0; k <= 2; ++k)
      series = mod_add(series, mod_mul(binom_mod(x, k, 9), mod_pow(3, k, 9), 9), 9);
    CHECK(direct == series);
  }
}

TEST_CASE("rational reduction") {
  CHECK(rat_to_mod(mpq_class(1, 2), 9) == 5);
  CHECK_THROWS_AS(rat_to_mod(mpq_class(1, 3), 9), ring_error);
}

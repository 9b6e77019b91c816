#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "procoh/mahler.hpp"

using namespace procoh;

namespace {

MonoPoly mono1(int nvars, std::vector<std::pair<MultiIndex, mpq_class>> terms) {
  MonoPoly p = MonoPoly::zero(nvars);
  for (auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

}  // namespace

TEST_CASE("staircase enumeration and order") {
  auto S = Staircase::make({2, 1}, 4);
  // indices (i,j) with 2i + j <= 4
  CHECK(S.size() == 9);
  CHECK(S.points.front() == MultiIndex{0, 0});
  for (const auto& I : S.points) CHECK(S.cost(I) <= 4);
  // downward closed
  for (const auto& I : S.points)
    for (size_t v = 0; v < 2; ++v)
      if (I[v] > 0) {
        MultiIndex J = I;
        J[v] -= 1;
        CHECK(S.find(J).has_value());
      }
}

TEST_CASE("eval examples") {
  RatCtx R;
  MPoly<RatCtx> P(1, 1);
  P.coeff[{2}] = {mpq_class(1)};
  CHECK(P.eval(R, {4})[0] == 6);

  MPoly<RatCtx> P2(1, 1);
  P2.coeff[{1}] = {mpq_class(1)};
  P2.coeff[{2}] = {mpq_class(2)};
  CHECK(P2.eval(R, {3})[0] == 9);
  CHECK(P2.eval(R, {0})[0] == 0);  // value at 0 = coefficient at index 0
}

TEST_CASE("interpolation recovers x^2 in binomial basis") {
  RatCtx R;
  auto S = Staircase::make({1}, 2);
  auto P = interpolate_staircase<RatCtx>(R, S, 1, [](const MultiIndex& J, std::vector<mpq_class>& b) {
    b[0] = mpq_class(static_cast<long>(J[0]) * J[0]);
  });
  CHECK(P.coeff.size() == 2);
  CHECK(P.coeff.at({1})[0] == 1);
  CHECK(P.coeff.at({2})[0] == 2);
}

TEST_CASE("interpolation of a constant and of xy") {
  ModCtx R(RingSpec::modular(3, 2));
  auto S = Staircase::make({1}, 3);
  auto C = interpolate_staircase<ModCtx>(R, S, 1,
                                         [](const MultiIndex&, std::vector<int64_t>& b) { b[0] = 5; });
  CHECK(C.coeff.size() == 1);
  CHECK(C.coeff.at({0})[0] == 5);

  auto S2 = Staircase::make({1, 1}, 2);
  auto XY = interpolate_staircase<ModCtx>(R, S2, 1, [](const MultiIndex& J, std::vector<int64_t>& b) {
    b[0] = mod_reduce(static_cast<int64_t>(J[0]) * J[1], 9);
  });
  CHECK(XY.coeff.size() == 1);
  CHECK(XY.coeff.at({1, 1})[0] == 1);
}

TEST_CASE("interpolate is a section of eval on random polynomials") {
  std::mt19937_64 rng(5);
  ModCtx R(RingSpec::modular(3, 2));
  auto S = Staircase::make({2, 1, 1}, 5);
  for (int trial = 0; trial < 10; ++trial) {
    MPoly<ModCtx> P(3, 2);
    for (const auto& I : S.points)
      if (rng() % 3 == 0) P.add_term(R, I, {static_cast<int64_t>(rng() % 9), static_cast<int64_t>(rng() % 9)});
    auto Q = interpolate_staircase<ModCtx>(R, S, 2, [&](const MultiIndex& J, std::vector<int64_t>& b) {
      Point x(J.begin(), J.end());
      auto v = P.eval(R, x);
      b = v;
    });
    CHECK(P == Q);
  }
}

TEST_CASE("weighted degree") {
  RatCtx R;
  MPoly<RatCtx> Z(1, 1);
  CHECK(weighted_degree(R, Z, {2}) == kDegNegInf);

  MPoly<RatCtx> P(1, 1);
  P.coeff[{1}] = {mpq_class(1)};
  CHECK(weighted_degree(R, P, {2}) == 2);

  MPoly<RatCtx> Q(2, 1);
  Q.coeff[{1, 2}] = {mpq_class(1)};
  CHECK(weighted_degree(R, Q, {2, 1}) == 4);

  // filtration level of the value component contributes wA * level
  MPoly<RatCtx> F(1, 2);
  F.coeff[{1}] = {mpq_class(0), mpq_class(1)};
  CHECK(weighted_degree(R, F, {2}, 3, {0, 1}) == 5);
}

TEST_CASE("compose: identity, dilation, degree growth detection") {
  RatCtx R;
  MPoly<RatCtx> P(1, 1);
  P.coeff[{2}] = {mpq_class(1)};  // binom(x,2)

  PolyMap id{mono1(1, {{{1}, 1}})};
  auto S = Staircase::make({1}, 2);
  CHECK(compose_via_grid(R, P, id, S) == P);

  PolyMap twice{mono1(1, {{{1}, 2}})};  // x -> 2x
  auto C = compose_via_grid(R, P, twice, S);
  CHECK(C.coeff.at({2})[0] == 4);
  CHECK(C.coeff.at({1})[0] == 1);

  MPoly<RatCtx> L(1, 1);
  L.coeff[{1}] = {mpq_class(1)};
  PolyMap lam{mono1(1, {{{1}, mpq_class(7)}})};
  auto CL = compose_via_grid(R, L, lam, S);
  CHECK(CL.coeff.size() == 1);
  CHECK(CL.coeff.at({1})[0] == 7);

  PolyMap sq{mono1(1, {{{2}, 1}})};  // x -> x^2 has degree 4, bound 2 must be rejected
  CHECK_THROWS_AS(compose_via_grid(R, P, sq, S), degree_bound_exceeded);
}

TEST_CASE("non-integral substitution detected") {
  PolyMap half{mono1(1, {{{1}, mpq_class(1, 2)}})};
  CHECK_THROWS_AS(eval_poly_map_int(half, {3}), non_integral_value);
  CHECK(eval_poly_map_int(half, {4})[0] == 2);
}

TEST_CASE("rational evaluation with ell-integrality") {
  ModCtx R(RingSpec::modular(3, 2));
  MPoly<ModCtx> P(1, 1);
  P.coeff[{1}] = {int64_t(1)};
  auto v = P.eval_rational(R, {mpq_class(1, 2)});
  CHECK(v[0] == mpq_class(1, 2));
  CHECK(rat_to_mod(v[0], 9) == 5);
  CHECK_THROWS_AS(rat_to_mod(mpq_class(1, 3), 9), ring_error);
}

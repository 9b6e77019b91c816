#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "procoh/ring.hpp"

namespace procoh {

struct degree_bound_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct non_integral_value : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using MultiIndex = std::vector<int32_t>;
using Point = std::vector<int64_t>;

constexpr int64_t kDegNegInf = std::numeric_limits<int64_t>::min();

/* Scalar contexts: the polynomial and cochain engines are templated on
 * these so the modular path runs on raw int64 residues. */
struct ModCtx {
  using Elt = int64_t;
  int64_t m = 0, ell = 0;
  int power = 0;
  explicit ModCtx(const RingSpec& r) : m(r.modulus), ell(r.ell), power(r.power) {
    if (!r.is_modular()) throw ring_error("ModCtx: modular ring required");
  }
  RingSpec ring() const { return RingSpec::modular(ell, power); }
  Elt zero() const { return 0; }
  Elt one() const { return 1 % m; }
  Elt add(Elt a, Elt b) const { return (a + b) % m; }
  Elt sub(Elt a, Elt b) const { return mod_sub(a, b, m); }
  Elt mul(Elt a, Elt b) const { return (a * b) % m; }
  Elt neg(Elt a) const { return mod_neg(a, m); }
  bool is_zero(Elt a) const { return a == 0; }
  Elt from_int(const mpz_class& z) const { return to_mod(z, m); }
  Elt from_rat(const mpq_class& q) const { return rat_to_mod(q, m); }
  Elt binom(int64_t x, int64_t k) const { return binom_mod(x, k, m); }
  mpq_class to_rat(Elt a) const { return mpq_class(a); }
};

struct RatCtx {
  using Elt = mpq_class;
  RingSpec ring() const { return RingSpec::rationals(); }
  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  Elt add(const Elt& a, const Elt& b) const { return a + b; }
  Elt sub(const Elt& a, const Elt& b) const { return a - b; }
  Elt mul(const Elt& a, const Elt& b) const { return a * b; }
  Elt neg(const Elt& a) const { return -a; }
  bool is_zero(const Elt& a) const { return a == 0; }
  Elt from_int(const mpz_class& z) const { return mpq_class(z); }
  Elt from_rat(const mpq_class& q) const { return q; }
  Elt binom(int64_t x, int64_t k) const { return mpq_class(binom_z(x, k)); }
  mpq_class to_rat(const Elt& a) const { return a; }
};

struct MultiIndexHash {
  size_t operator()(const MultiIndex& v) const {
    size_t h = 1469598103934665603ull;
    for (int32_t x : v) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
    return h;
  }
};

/* Downward-closed set of multi-indices with weighted cost <= budget,
 * enumerated in (cost, lex) order; the canonical basis index set for
 * weighted polynomial spaces. */
struct Staircase {
  std::vector<int64_t> weights;
  int64_t budget = -1;
  std::vector<MultiIndex> points;
  std::unordered_map<MultiIndex, size_t, MultiIndexHash> index;

  static Staircase make(std::vector<int64_t> weights, int64_t budget);
  size_t size() const { return points.size(); }
  int64_t cost(const MultiIndex& I) const;
  const MultiIndex& operator[](size_t i) const { return points[i]; }
  std::optional<size_t> find(const MultiIndex& I) const {
    auto it = index.find(I);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  // indices J = s + e_v just outside the staircase (support-violation probes)
  std::vector<MultiIndex> boundary() const;
};

/* Polynomial function in the binomial (Mahler) basis with vector values:
 * sum over finitely many multi-indices I of prod_s binom(x_s, I_s) * a_I.
 * Coefficient maps are zero-pruned so equality is literal map equality. */
template <class Ctx>
struct MPoly {
  using Elt = typename Ctx::Elt;
  int nvars = 0;
  int dim = 1;
  std::map<MultiIndex, std::vector<Elt>> coeff;

  MPoly() = default;
  MPoly(int nv, int d) : nvars(nv), dim(d) {}

  bool is_zero() const { return coeff.empty(); }
  bool operator==(const MPoly& o) const {
    return nvars == o.nvars && dim == o.dim && coeff == o.coeff;
  }

  void add_term(const Ctx& R, const MultiIndex& I, const std::vector<Elt>& v) {
    auto it = coeff.find(I);
    if (it == coeff.end()) {
      bool nz = false;
      for (const auto& x : v)
        if (!R.is_zero(x)) nz = true;
      if (nz) coeff.emplace(I, v);
      return;
    }
    bool nz = false;
    for (int k = 0; k < dim; ++k) {
      it->second[k] = R.add(it->second[k], v[k]);
      if (!R.is_zero(it->second[k])) nz = true;
    }
    if (!nz) coeff.erase(it);
  }

  std::vector<Elt> eval(const Ctx& R, const Point& x) const {
    std::vector<Elt> out(dim, R.zero());
    for (const auto& [I, v] : coeff) {
      Elt b = R.one();
      bool zero = false;
      for (int s = 0; s < nvars; ++s) {
        if (I[s] == 0) continue;
        Elt f = R.binom(x[s], I[s]);
        if (R.is_zero(f)) {
          zero = true;
          break;
        }
        b = R.mul(b, f);
      }
      if (zero) continue;
      for (int k = 0; k < dim; ++k) out[k] = R.add(out[k], R.mul(b, v[k]));
    }
    return out;
  }

  // evaluation at a rational point; modular targets must be ell-integral
  std::vector<mpq_class> eval_rational(const Ctx& R, const std::vector<mpq_class>& x) const {
    std::vector<mpq_class> out(dim, mpq_class(0));
    for (const auto& [I, v] : coeff) {
      mpq_class b = 1;
      for (int s = 0; s < nvars; ++s)
        if (I[s] != 0) b *= binom_q(x[s], I[s]);
      for (int k = 0; k < dim; ++k) out[k] += b * R.to_rat(v[k]);
    }
    return out;
  }
};

template <class Ctx>
MPoly<Ctx> mp_add(const Ctx& R, const MPoly<Ctx>& a, const MPoly<Ctx>& b) {
  MPoly<Ctx> r = a;
  for (const auto& [I, v] : b.coeff) r.add_term(R, I, v);
  return r;
}

template <class Ctx>
MPoly<Ctx> mp_scale(const Ctx& R, const MPoly<Ctx>& a, const typename Ctx::Elt& c) {
  MPoly<Ctx> r(a.nvars, a.dim);
  if (R.is_zero(c)) return r;
  for (const auto& [I, v] : a.coeff) {
    std::vector<typename Ctx::Elt> w(a.dim);
    for (int k = 0; k < a.dim; ++k) w[k] = R.mul(v[k], c);
    r.add_term(R, I, w);
  }
  return r;
}

/* Weighted degree: max over support of sum_s I_s w_s + wA * fil(level of
 * the value component); kDegNegInf for the zero polynomial. */
template <class Ctx>
int64_t weighted_degree(const Ctx& R, const MPoly<Ctx>& P, const std::vector<int64_t>& weights,
                        int64_t wA = 0, const std::vector<int>& comp_level = {}) {
  int64_t deg = kDegNegInf;
  for (const auto& [I, v] : P.coeff) {
    int64_t base = 0;
    for (int s = 0; s < P.nvars; ++s) base += static_cast<int64_t>(I[s]) * weights[s];
    for (int k = 0; k < P.dim; ++k) {
      if (R.is_zero(v[k])) continue;
      int64_t d = base + (comp_level.empty() ? 0 : wA * comp_level[k]);
      deg = std::max(deg, d);
    }
  }
  return deg;
}

/* Recover Mahler coefficients on a staircase from values at its integer
 * points: a_I = Delta^I F(0), computed by in-place finite differences.
 * Exact; no division occurs. */
template <class Ctx>
MPoly<Ctx> interpolate_staircase(const Ctx& R, const Staircase& S, int dim,
                                 const std::function<void(const MultiIndex&, std::vector<typename Ctx::Elt>&)>& evaluate) {
  using Elt = typename Ctx::Elt;
  const size_t n = S.size();
  const int V = static_cast<int>(S.weights.size());
  std::vector<Elt> F(n * dim, R.zero());
  std::vector<Elt> buf(dim);
  for (size_t p = 0; p < n; ++p) {
    evaluate(S.points[p], buf);
    for (int k = 0; k < dim; ++k) F[p * dim + k] = buf[k];
  }
  // per-variable descending-order lists (point, predecessor)
  for (int v = 0; v < V; ++v) {
    int32_t maxdeg = 0;
    for (const auto& I : S.points) maxdeg = std::max(maxdeg, I[v]);
    if (maxdeg == 0) continue;
    std::vector<std::pair<size_t, size_t>> order;  // sorted descending by I[v]
    for (int32_t t = maxdeg; t >= 1; --t)
      for (size_t p = 0; p < n; ++p)
        if (S.points[p][v] == t) {
          MultiIndex J = S.points[p];
          J[v] -= 1;
          order.emplace_back(p, S.index.at(J));
        }
    for (int32_t t = 1; t <= maxdeg; ++t)
      for (const auto& [p, q] : order) {
        if (S.points[p][v] < t) continue;
        for (int k = 0; k < dim; ++k)
          F[p * dim + k] = R.sub(F[p * dim + k], F[q * dim + k]);
      }
  }
  MPoly<Ctx> P(V, dim);
  for (size_t p = 0; p < n; ++p) {
    std::vector<Elt> v(F.begin() + p * dim, F.begin() + (p + 1) * dim);
    bool nz = false;
    for (const auto& x : v)
      if (!R.is_zero(x)) nz = true;
    if (nz) P.coeff.emplace(S.points[p], std::move(v));
  }
  return P;
}

/* Checks that the interpolant reproduces `evaluate` on the staircase
 * boundary; a mismatch means the true function has support above the
 * declared bound. */
template <class Ctx>
void verify_support_bound(const Ctx& R, const Staircase& S, const MPoly<Ctx>& P,
                          const std::function<void(const MultiIndex&, std::vector<typename Ctx::Elt>&)>& evaluate) {
  std::vector<typename Ctx::Elt> buf(P.dim);
  for (const auto& J : S.boundary()) {
    evaluate(J, buf);
    Point x(J.begin(), J.end());
    auto got = P.eval(R, x);
    for (int k = 0; k < P.dim; ++k)
      if (!R.is_zero(R.sub(got[k], buf[k])))
        throw degree_bound_exceeded("support above declared weighted-degree bound");
  }
}

struct MonoPoly;
using PolyMap = std::vector<MonoPoly>;
Point eval_poly_map_int(const PolyMap& Q, const Point& x);

/* Substitution P(Q(y)) computed by evaluating on the output staircase and
 * interpolating back; Eq-style binomial expansions never appear
 * explicitly. Boundary verification catches support escaping the declared
 * output bound. */
template <class Ctx>
MPoly<Ctx> compose_via_grid(const Ctx& R, const MPoly<Ctx>& P, const PolyMap& Q,
                            const Staircase& out_S, bool verify_bound = true) {
  auto eval = [&](const MultiIndex& J, std::vector<typename Ctx::Elt>& buf) {
    Point y(J.begin(), J.end());
    Point x = eval_poly_map_int(Q, y);
    auto v = P.eval(R, x);
    for (int k = 0; k < P.dim; ++k) buf[k] = v[k];
  };
  MPoly<Ctx> out = interpolate_staircase<Ctx>(R, out_S, P.dim, eval);
  if (verify_bound) verify_support_bound<Ctx>(R, out_S, out, eval);
  return out;
}

/* Polynomial in the monomial basis with rational coefficients; the
 * exchange format for group laws and substitution maps. */
struct MonoPoly {
  int nvars = 0;
  std::map<MultiIndex, mpq_class> coeff;

  static MonoPoly zero(int nvars) { return MonoPoly{nvars, {}}; }
  void add_term(const MultiIndex& e, const mpq_class& c);
  mpq_class eval(const std::vector<mpq_class>& x) const;
  mpq_class eval_int(const Point& x) const;
  int64_t total_degree() const;
  bool is_zero() const { return coeff.empty(); }
  bool operator==(const MonoPoly& o) const { return nvars == o.nvars && coeff == o.coeff; }
};

}  // namespace procoh

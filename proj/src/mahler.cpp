#include "procoh/mahler.hpp"

#include <algorithm>
#include <set>

namespace procoh {

namespace {

void enumerate_rec(const std::vector<int64_t>& w, int64_t budget, size_t v, MultiIndex& cur,
                   std::vector<MultiIndex>& out) {
  if (v == w.size()) {
    out.push_back(cur);
    return;
  }
  for (int64_t k = 0;; ++k) {
    if (k * w[v] > budget) break;
    cur[v] = static_cast<int32_t>(k);
    enumerate_rec(w, budget - k * w[v], v + 1, cur, out);
  }
  cur[v] = 0;
}

}  // namespace

Staircase Staircase::make(std::vector<int64_t> weights, int64_t budget) {
  Staircase S;
  S.weights = std::move(weights);
  S.budget = budget;
  for (int64_t w : S.weights)
    if (w <= 0) throw ring_error("Staircase: weights must be positive");
  if (budget >= 0) {
    MultiIndex cur(S.weights.size(), 0);
    enumerate_rec(S.weights, budget, 0, cur, S.points);
    std::sort(S.points.begin(), S.points.end(), [&](const MultiIndex& a, const MultiIndex& b) {
      int64_t ca = S.cost(a), cb = S.cost(b);
      if (ca != cb) return ca < cb;
      return a < b;
    });
  }
  for (size_t i = 0; i < S.points.size(); ++i) S.index.emplace(S.points[i], i);
  return S;
}

int64_t Staircase::cost(const MultiIndex& I) const {
  int64_t c = 0;
  for (size_t s = 0; s < weights.size(); ++s) c += static_cast<int64_t>(I[s]) * weights[s];
  return c;
}

std::vector<MultiIndex> Staircase::boundary() const {
  std::set<MultiIndex> out;
  for (const auto& I : points)
    for (size_t v = 0; v < weights.size(); ++v) {
      MultiIndex J = I;
      J[v] += 1;
      if (!index.count(J)) out.insert(J);
    }
  if (points.empty() && !weights.empty()) out.insert(MultiIndex(weights.size(), 0));
  return std::vector<MultiIndex>(out.begin(), out.end());
}

void MonoPoly::add_term(const MultiIndex& e, const mpq_class& c) {
  if (c == 0) return;
  auto it = coeff.find(e);
  if (it == coeff.end()) {
    coeff.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) coeff.erase(it);
}

mpq_class MonoPoly::eval(const std::vector<mpq_class>& x) const {
  mpq_class out = 0;
  for (const auto& [e, c] : coeff) {
    mpq_class t = c;
    for (int s = 0; s < nvars; ++s)
      for (int32_t k = 0; k < e[s]; ++k) t *= x[s];
    out += t;
  }
  return out;
}

mpq_class MonoPoly::eval_int(const Point& x) const {
  mpq_class out = 0;
  for (const auto& [e, c] : coeff) {
    mpq_class t = c;
    for (int s = 0; s < nvars; ++s) {
      if (e[s] == 0) continue;
      mpz_class p = 1;
      mpz_class base(static_cast<long>(x[s]));
      for (int32_t k = 0; k < e[s]; ++k) p *= base;
      t *= mpq_class(p);
    }
    out += t;
  }
  return out;
}

int64_t MonoPoly::total_degree() const {
  int64_t d = kDegNegInf;
  for (const auto& [e, c] : coeff) {
    int64_t t = 0;
    for (int32_t k : e) t += k;
    d = std::max(d, t);
  }
  return d;
}

Point eval_poly_map_int(const PolyMap& Q, const Point& x) {
  Point out(Q.size());
  for (size_t i = 0; i < Q.size(); ++i) {
    mpq_class v = Q[i].eval_int(x);
    if (v.get_den() != 1) throw non_integral_value("polynomial map not integral at lattice point");
    mpz_class n = v.get_num();
    if (!n.fits_slong_p()) throw ring_error("poly map value overflow");
    out[i] = n.get_si();
  }
  return out;
}

}  // namespace procoh

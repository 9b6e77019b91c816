#include "procoh/nilgroup.hpp"

#include <algorithm>
#include <sstream>

namespace procoh {

int MalcevGroup::total_rank() const {
  int t = 0;
  for (int r : layer_ranks) t += r;
  return t;
}

int MalcevGroup::slot_layer(int s) const {
  // slots run over layers m, m-1, ..., 0
  int off = 0;
  for (int layer = top_layer(); layer >= 0; --layer) {
    off += layer_ranks[layer];
    if (s < off) return layer;
  }
  throw group_error("slot out of range");
}

std::vector<int64_t> MalcevGroup::slot_weights() const {
  std::vector<int64_t> w(total_rank());
  for (int s = 0; s < total_rank(); ++s) w[s] = slot_weight(s);
  return w;
}

namespace {

std::vector<mpq_class> eval_law_rat(const MalcevGroup& G, const std::vector<mpq_class>& g,
                                    const std::vector<mpq_class>& h) {
  std::vector<mpq_class> xy(g);
  xy.insert(xy.end(), h.begin(), h.end());
  std::vector<mpq_class> out(G.total_rank());
  for (int s = 0; s < G.total_rank(); ++s) out[s] = G.law[s].eval(xy);
  return out;
}

GroupElem to_int_coords(const std::vector<mpq_class>& v, const char* who) {
  GroupElem out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].get_den() != 1) throw group_error(std::string(who) + ": non-integral coordinate");
    if (!v[i].get_num().fits_slong_p()) throw group_error(std::string(who) + ": overflow");
    out[i] = v[i].get_num().get_si();
  }
  return out;
}

std::vector<mpq_class> to_rat_coords(const GroupElem& g) {
  return std::vector<mpq_class>(g.begin(), g.end());
}

}  // namespace

GroupElem multiply(const MalcevGroup& G, const GroupElem& g, const GroupElem& h) {
  if (static_cast<int>(g.size()) != G.total_rank() || static_cast<int>(h.size()) != G.total_rank())
    throw group_error("ArityMismatch: coordinate length");
  return to_int_coords(eval_law_rat(G, to_rat_coords(g), to_rat_coords(h)), "multiply");
}

GroupElem inverse(const MalcevGroup& G, const GroupElem& g) {
  // layer-0 outputs are plain sums; deeper layers acquire corrections from
  // strictly lower layers, so ascending layer-by-layer adjustment solves
  // multiply(g, x) = 1 exactly
  std::vector<mpq_class> x(G.total_rank(), mpq_class(0));
  std::vector<mpq_class> gr = to_rat_coords(g);
  for (int layer = 0; layer <= G.top_layer(); ++layer) {
    auto p = eval_law_rat(G, gr, x);
    for (int s = 0; s < G.total_rank(); ++s)
      if (G.slot_layer(s) == layer) x[s] -= p[s];
  }
  GroupElem xi = to_int_coords(x, "inverse");
  if (multiply(G, g, xi) != G.id()) throw group_error("inverse: law failed to invert");
  return xi;
}

GroupElem conjugate(const MalcevGroup& G, const GroupElem& h, const GroupElem& g) {
  return multiply(G, multiply(G, inverse(G, h), g), h);
}

PolyMap conjugation_polynomials(const MalcevGroup& G, const GroupElem& h) {
  const int n = G.total_rank();
  RatCtx R;
  auto S = Staircase::make(std::vector<int64_t>(n, 1), G.degree_bound);
  auto eval = [&](const MultiIndex& J, std::vector<mpq_class>& buf) {
    GroupElem x(J.begin(), J.end());
    GroupElem c = conjugate(G, h, x);
    for (int s = 0; s < n; ++s) buf[s] = mpq_class(c[s] - x[s]);
  };
  MPoly<RatCtx> P;
  try {
    P = interpolate_staircase<RatCtx>(R, S, n, eval);
    verify_support_bound<RatCtx>(R, S, P, eval);
  } catch (const degree_bound_exceeded&) {
    throw group_error("DegreeBoundViolated: conjugation polynomial exceeds degree bound d=" +
                      std::to_string(G.degree_bound));
  }
  PolyMap out;
  for (int s = 0; s < n; ++s) out.push_back(mahler_to_monomial(P, s));
  return out;
}

MonoPoly mahler_to_monomial(const MPoly<RatCtx>& P, int component) {
  // binom(x,k) expanded via x(x-1)...(x-k+1)/k!, cached per k
  static thread_local std::vector<std::vector<mpq_class>> cache{{mpq_class(1)}};
  auto binom_coeffs = [&](int k) -> const std::vector<mpq_class>& {
    while (static_cast<int>(cache.size()) <= k) {
      int t = static_cast<int>(cache.size()) - 1;
      const auto& prev = cache.back();
      std::vector<mpq_class> next(prev.size() + 1, mpq_class(0));
      for (size_t j = 0; j < prev.size(); ++j) {
        next[j + 1] += prev[j];
        next[j] -= mpq_class(t) * prev[j];
      }
      for (auto& c : next) c /= (t + 1);
      cache.push_back(std::move(next));
    }
    return cache[k];
  };
  MonoPoly out = MonoPoly::zero(P.nvars);
  for (const auto& [I, v] : P.coeff) {
    if (v[component] == 0) continue;
    std::map<MultiIndex, mpq_class> acc;
    acc[MultiIndex(P.nvars, 0)] = v[component];
    for (int s = 0; s < P.nvars; ++s) {
      if (I[s] == 0) continue;
      const auto& bc = binom_coeffs(I[s]);
      std::map<MultiIndex, mpq_class> next;
      for (const auto& [e, c] : acc)
        for (size_t j = 0; j < bc.size(); ++j) {
          if (bc[j] == 0) continue;
          MultiIndex e2 = e;
          e2[s] += static_cast<int32_t>(j);
          next[e2] += c * bc[j];
        }
      acc = std::move(next);
    }
    for (const auto& [e, c] : acc) out.add_term(e, c);
  }
  return out;
}

ValidationReport validate(const MalcevGroup& G, int64_t ell) {
  ValidationReport rep;
  auto fail = [&](const std::string& s) { rep.violations.push_back(s); };
  const int n = G.total_rank();
  const int m = G.top_layer();
  if (static_cast<int>(G.law.size()) != n) {
    fail("law must have one component per coordinate slot");
    return rep;
  }
  for (int s = 0; s < n; ++s)
    if (G.law[s].nvars != 2 * n) {
      fail("law component in wrong number of variables");
      return rep;
    }

  for (int i = 0; i <= m; ++i)
    if (G.layer_weights[i] <= 0) fail("weights must be positive");
  if (G.weight_A < G.layer_weights[m]) fail("w_A >= w_m violated");
  for (int i = 1; i <= m; ++i)
    if (G.layer_weights[i] < (G.degree_bound + 1) * G.layer_weights[i - 1])
      fail("w_" + std::to_string(i) + " >= (d+1)*w_" + std::to_string(i - 1) + " violated");

  // identity and triangularity, read off the law coefficients directly
  for (int s = 0; s < n; ++s) {
    int layer = G.slot_layer(s);
    for (const auto& [e, c] : G.law[s].coeff) {
      int64_t deg = 0;
      for (int v = 0; v < 2 * n; ++v) deg += e[v];
      if (deg == 0) fail("law has nonzero constant term (identity not at 0)");
      if (deg == 1) {
        int v = 0;
        while (e[v] == 0) ++v;
        int slot = v < n ? v : v - n;
        if (slot != s || c != 1)
          fail("linear part of slot " + std::to_string(s) + " is not x_s + y_s");
      } else {
        for (int v = 0; v < 2 * n; ++v)
          if (e[v] != 0 && G.slot_layer(v < n ? v : v - n) >= layer)
            fail("triangularity: degree-2+ term of a layer-" + std::to_string(layer) +
                 " output involves a layer >= " + std::to_string(layer) + " input");
      }
      if (ell > 1) {
        mpz_class den = c.get_den(), gg;
        mpz_gcd(gg.get_mpz_t(), den.get_mpz_t(), mpz_class(static_cast<long>(ell)).get_mpz_t());
        if (gg != 1) fail("law coefficient not ell-integral");
      }
    }
  }
  if (!rep.ok()) return rep;

  // associativity on a fixed integer grid (sampled when the grid is large)
  {
    std::vector<GroupElem> pts;
    size_t count = 1;
    for (int s = 0; s < n; ++s) count *= 3;
    if (count <= 30) {
      GroupElem w(n, -1);
      while (true) {
        pts.push_back(w);
        int s = 0;
        while (s < n && ++w[s] == 2) w[s++] = -1;
        if (s == n) break;
      }
    } else {
      uint64_t st = 88172645463325252ull;
      auto next = [&]() { st ^= st << 13; st ^= st >> 7; st ^= st << 17; return st; };
      for (int t = 0; t < 20; ++t) {
        GroupElem w(n);
        for (int s = 0; s < n; ++s) w[s] = static_cast<int64_t>(next() % 5) - 2;
        pts.push_back(w);
      }
    }
    bool bad = false;
    for (const auto& a : pts) {
      for (const auto& b : pts) {
        if (bad) break;
        for (const auto& c : pts) {
          if (multiply(G, multiply(G, a, b), c) != multiply(G, a, multiply(G, b, c))) {
            fail("associativity fails on test grid");
            bad = true;
            break;
          }
        }
      }
      if (bad) break;
    }
  }

  // one-parameter subgroups, certified on a grid exceeding the law degree
  {
    int64_t D = 1;
    for (const auto& p : G.law) D = std::max(D, p.total_degree());
    for (int s = 0; s < n && rep.ok(); ++s)
      for (int64_t t = -1; t <= D + 1 && rep.ok(); ++t)
        for (int64_t u = -1; u <= D + 1; ++u)
          if (multiply(G, G.one_param(s, t), G.one_param(s, u)) != G.one_param(s, t + u)) {
            fail("one-parameter property fails at slot " + std::to_string(s));
            break;
          }
  }

  // conjugation polynomials on a small generating grid
  if (rep.ok()) {
    for (int s = 0; s < n && rep.ok(); ++s)
      for (int64_t t : {1, -1, 2}) {
        try {
          conjugation_polynomials(G, G.one_param(s, t));
        } catch (const group_error& e) {
          fail(e.what());
          break;
        }
      }
  }
  return rep;
}

MalcevGroup preset_abelian(int r) {
  if (r < 1) throw group_error("abelian preset: rank >= 1");
  MalcevGroup G;
  G.name = "abelian:" + std::to_string(r);
  G.layer_ranks = {r};
  G.layer_weights = {1};
  G.weight_A = 1;
  G.degree_bound = 1;
  for (int s = 0; s < r; ++s) {
    MonoPoly p = MonoPoly::zero(2 * r);
    MultiIndex e(2 * r, 0);
    e[s] = 1;
    p.add_term(e, 1);
    e[s] = 0;
    e[r + s] = 1;
    p.add_term(e, 1);
    G.law.push_back(p);
  }
  G.integer_law = true;
  return G;
}

MalcevGroup preset_unitriangular(int n) {
  if (n < 2 || n > 5) throw group_error("unitriangular preset: 2 <= n <= 5");
  // coordinates = above-diagonal entries, deepest superdiagonal first;
  // within a layer, entries ordered by row
  struct Ent {
    int i, j;
  };
  std::vector<Ent> slots;
  for (int dist = n - 1; dist >= 1; --dist)
    for (int i = 0; i + dist < n; ++i) slots.push_back({i, i + dist});
  const int total = static_cast<int>(slots.size());
  auto slot_of = [&](int i, int j) {
    for (int s = 0; s < total; ++s)
      if (slots[s].i == i && slots[s].j == j) return s;
    return -1;
  };
  MalcevGroup G;
  G.name = n == 3 ? "heisenberg" : "unitriangular:" + std::to_string(n);
  G.degree_bound = n - 1;
  for (int dist = 1; dist <= n - 1; ++dist) G.layer_ranks.push_back(n - dist);
  for (int i = 0; i <= n - 2; ++i) G.layer_weights.push_back(ipow(n, i).get_si());
  G.weight_A = G.layer_weights.back();
  for (int s = 0; s < total; ++s) {
    auto [i, j] = slots[s];
    MonoPoly p = MonoPoly::zero(2 * total);
    MultiIndex e(2 * total, 0);
    e[s] = 1;
    p.add_term(e, 1);
    e[s] = 0;
    e[total + s] = 1;
    p.add_term(e, 1);
    e[total + s] = 0;
    for (int k = i + 1; k < j; ++k) {
      MultiIndex q(2 * total, 0);
      q[slot_of(i, k)] = 1;
      q[total + slot_of(k, j)] = 1;
      p.add_term(q, 1);
    }
    G.law.push_back(p);
  }
  G.integer_law = true;
  return G;
}

MalcevGroup preset_heisenberg() { return preset_unitriangular(3); }

MalcevGroup parse_group_preset(const std::string& name) {
  auto colon = name.find(':');
  std::string base = name.substr(0, colon);
  int arg = 0;
  if (colon != std::string::npos) arg = std::stoi(name.substr(colon + 1));
  if (base == "abelian") return preset_abelian(arg == 0 ? 1 : arg);
  if (base == "heisenberg") return preset_heisenberg();
  if (base == "unitriangular") return preset_unitriangular(arg == 0 ? 3 : arg);
  throw group_error("unknown group preset: " + name);
}

size_t FiniteQuotient::elem_index(const GroupElem& g) const {
  size_t idx = 0;
  for (int s = group.total_rank() - 1; s >= 0; --s)
    idx = idx * static_cast<size_t>(m) + static_cast<size_t>(mod_reduce(g[s], m));
  return idx;
}

GroupElem FiniteQuotient::elem_at(size_t idx) const {
  GroupElem g(group.total_rank());
  for (int s = 0; s < group.total_rank(); ++s) {
    g[s] = static_cast<int64_t>(idx % static_cast<size_t>(m));
    idx /= static_cast<size_t>(m);
  }
  return g;
}

GroupElem FiniteQuotient::reduce(const GroupElem& g) const {
  GroupElem out(g.size());
  for (size_t s = 0; s < g.size(); ++s) out[s] = mod_reduce(g[s], m);
  return out;
}

GroupElem FiniteQuotient::mul(const GroupElem& a, const GroupElem& b) const {
  const int n = group.total_rank();
  GroupElem out(n);
  for (int s = 0; s < n; ++s) {
    int64_t acc = 0;
    for (const auto& [e, c] : law_mod[s].coeff) {
      int64_t t = c.get_num().get_si() % m;
      for (int v = 0; v < n && t; ++v) {
        for (int32_t k = 0; k < e[v]; ++k) t = (t * a[v]) % m;
        for (int32_t k = 0; k < e[n + v]; ++k) t = (t * b[v]) % m;
      }
      acc = (acc + t) % m;
    }
    out[s] = acc;
  }
  return out;
}

GroupElem FiniteQuotient::inv(const GroupElem& a) const {
  const int n = group.total_rank();
  GroupElem x(n, 0);
  for (int layer = 0; layer <= group.top_layer(); ++layer) {
    GroupElem p = mul(a, x);
    for (int s = 0; s < n; ++s)
      if (group.slot_layer(s) == layer) x[s] = mod_sub(x[s], p[s], m);
  }
  if (mul(a, x) != GroupElem(n, 0)) throw group_error("quotient inverse failed");
  return x;
}

FiniteQuotient congruence_quotient(const MalcevGroup& G, int64_t ell, int level, size_t cap) {
  for (const auto& p : G.law)
    for (const auto& [e, c] : p.coeff)
      if (c.get_den() != 1)
        throw group_error("NonIntegralLaw: finite quotients need integer law coefficients");
  FiniteQuotient Q;
  Q.group = G;
  Q.ell = ell;
  Q.level = level;
  mpz_class mm = ipow(ell, level);
  mpz_class sz = 1;
  for (int s = 0; s < G.total_rank(); ++s) sz *= mm;
  if (sz > mpz_class(static_cast<long>(cap)))
    throw group_error("QuotientTooLarge: order " + sz.get_str() + " exceeds cap " +
                      std::to_string(cap));
  Q.m = mm.get_si();
  Q.size = static_cast<size_t>(sz.get_si());
  Q.law_mod = G.law;
  for (auto& p : Q.law_mod) {
    MonoPoly red = MonoPoly::zero(p.nvars);
    for (const auto& [e, c] : p.coeff) red.add_term(e, mpq_class(to_mod(c.get_num(), Q.m)));
    p = red;
  }
  return Q;
}

}  // namespace procoh

#include "procoh/unipmod.hpp"

namespace procoh {

int FilteredModule::level_of_basis(int b) const {
  for (int j = 0; j < num_levels(); ++j)
    if (b < fil_sizes[j]) return j;
  throw module_error("basis index out of range");
}

std::vector<int> FilteredModule::basis_levels() const {
  std::vector<int> lv(rank);
  for (int b = 0; b < rank; ++b) lv[b] = level_of_basis(b);
  return lv;
}

FilteredModule FilteredModule::trivial(RingSpec ring, int rank, int slots) {
  FilteredModule M;
  M.ring = ring;
  M.rank = rank;
  M.fil_sizes = {rank};
  for (int s = 0; s < slots; ++s) M.gen_action.push_back(identity(ring, rank));
  M.fil_width = 1;
  return M;
}

FilteredModule FilteredModule::cyclic_action(RingSpec ring, const ExactMatrix& rho,
                                             std::vector<int> fil_sizes) {
  FilteredModule M;
  M.ring = ring;
  M.rank = static_cast<int>(rho.rows);
  M.fil_sizes = fil_sizes.empty() ? std::vector<int>{M.rank} : std::move(fil_sizes);
  M.gen_action = {rho};
  M.fil_width = 1;
  return M;
}

FilteredModule FilteredModule::heisenberg_standard(RingSpec ring) {
  // psi(g) acts by the unitriangular matrix itself; slots (z, x, y)
  FilteredModule M;
  M.ring = ring;
  M.rank = 3;
  M.fil_sizes = {1, 2, 3};
  auto E = [&](int i, int j) {
    ExactMatrix A = identity(ring, 3);
    A.set_from_int(i, j, 1);
    return A;
  };
  M.gen_action = {E(0, 2), E(0, 1), E(1, 2)};
  M.fil_width = 1;
  return M;
}

std::vector<std::string> check_module(const FilteredModule& M, const MalcevGroup& G) {
  std::vector<std::string> bad;
  if (M.fil_sizes.empty() || M.fil_sizes.back() != M.rank)
    bad.push_back("filtration must exhaust the module");
  for (size_t j = 1; j < M.fil_sizes.size(); ++j)
    if (M.fil_sizes[j] < M.fil_sizes[j - 1]) bad.push_back("filtration sizes must be nondecreasing");
  if (static_cast<int>(M.gen_action.size()) != G.total_rank())
    bad.push_back("need one generator action per Mal'cev slot");
  if (!bad.empty()) return bad;

  // unipotence: (rho_s - 1) Fil^j inside Fil^(j - fil_width), as
  // block-strict-triangularity in the adapted basis
  for (int s = 0; s < G.total_rank(); ++s) {
    const auto& A = M.gen_action[s];
    if (static_cast<int>(A.rows) != M.rank || static_cast<int>(A.cols) != M.rank) {
      bad.push_back("action matrix has wrong shape");
      continue;
    }
    for (int b = 0; b < M.rank; ++b) {
      int jb = M.level_of_basis(b);
      for (int r = 0; r < M.rank; ++r) {
        mpq_class e = A.get_rat(r, b);
        if (r == b) e -= 1;
        if (e == 0) continue;
        if (M.level_of_basis(r) > jb - M.fil_width) {
          bad.push_back("unipotence fails: (rho_" + std::to_string(s) + "-1) e_" +
                        std::to_string(b) + " leaves Fil^" + std::to_string(jb - M.fil_width));
          r = M.rank;
          b = M.rank;
        }
      }
    }
  }
  if (!bad.empty()) return bad;

  // compatibility with the group law on sampled words
  uint64_t st = 0x9e3779b97f4a7c15ull;
  auto next = [&]() { st ^= st << 13; st ^= st >> 7; st ^= st << 17; return st; };
  for (int t = 0; t < 12; ++t) {
    GroupElem g(G.total_rank()), h(G.total_rank());
    for (auto& c : g) c = static_cast<int64_t>(next() % 5) - 2;
    for (auto& c : h) c = static_cast<int64_t>(next() % 5) - 2;
    ExactMatrix lhs = act_matrix(M, multiply(G, g, h));
    ExactMatrix rhs = mat_mul(act_matrix(M, g), act_matrix(M, h));
    if (!(lhs == rhs)) {
      bad.push_back("generator actions are not compatible with the group law");
      break;
    }
  }
  return bad;
}

ExactMatrix slot_power(const FilteredModule& M, int slot, int64_t x) {
  ExactMatrix delta = mat_sub(M.gen_action[slot], identity(M.ring, M.rank));
  ExactMatrix acc = identity(M.ring, M.rank);
  ExactMatrix nil = identity(M.ring, M.rank);
  int64_t max_k =
      static_cast<int64_t>(M.rank) * (M.ring.is_modular() ? std::max(1, M.ring.power) : 1);
  for (int64_t k = 1; k <= max_k + 1; ++k) {
    nil = mat_mul(nil, delta);
    if (nil.is_zero()) break;
    if (k > max_k) throw module_error("NonUnipotentAction: binomial series does not terminate");
    ExactMatrix term = nil;
    if (M.ring.is_modular())
      term = mat_scale(term, mpq_class(binom_mod(x, k, M.ring.modulus)));
    else
      term = mat_scale(term, mpq_class(binom_z(x, k)));
    acc = mat_add(acc, term);
  }
  return acc;
}

ExactMatrix act_matrix(const FilteredModule& M, const GroupElem& g) {
  // psi(g) multiplies generators shallow-to-deep (the coordinate tuple is
  // written deepest first), so rho(psi(g)) = rho_last^{x_last} ... rho_0^{x_0}
  ExactMatrix A = identity(M.ring, M.rank);
  for (size_t s = g.size(); s-- > 0;)
    if (g[s] != 0) A = mat_mul(A, slot_power(M, static_cast<int>(s), g[s]));
  return A;
}

ExactMatrix act(const FilteredModule& M, const GroupElem& g, const ExactMatrix& v) {
  return mat_mul(act_matrix(M, g), v);
}

std::vector<int> standard_filtration(const FilteredModule& M) {
  std::vector<int> sizes;
  int prev = 0;
  while (prev < M.rank) {
    int best = prev;
    for (int k = M.rank; k > prev; --k) {
      bool ok = true;
      for (const auto& A : M.gen_action) {
        for (int b = 0; b < k && ok; ++b)
          for (int r = prev; r < M.rank && ok; ++r) {
            mpq_class e = A.get_rat(r, b);
            if (r == b) e -= 1;
            if (e != 0) ok = false;
          }
        if (!ok) break;
      }
      if (ok) {
        best = k;
        break;
      }
    }
    if (best == prev) throw module_error("NotUnipotent: prefix filtration does not exhaust");
    sizes.push_back(best);
    prev = best;
  }
  return sizes;
}

int unipotence_depth(const FilteredModule& M) {
  // iterated invariants over actual submodules: F_{j+1} = {v : (rho_s-1)v in F_j}
  const int n = M.rank;
  std::vector<ExactMatrix> deltas;
  for (const auto& A : M.gen_action) deltas.push_back(mat_sub(A, identity(M.ring, n)));
  ExactMatrix F(M.ring, 0, n);  // rows span the current level
  int depth = -1;
  for (int iter = 0; iter <= 4 * n * std::max(1, M.ring.power) + 2; ++iter) {
    HowellForm HF = span_form(F);
    // full?
    bool full = true;
    for (int b = 0; b < n && full; ++b) {
      ExactMatrix e(M.ring, 1, n);
      e.set_from_int(0, b, 1);
      if (!in_row_span(HF, e)) full = false;
    }
    if (full) return depth;
    // next level: v with delta_s v in span(F) for all s: stack conditions
    // [delta_s^T | -F^T] right kernel, projected to the v block
    size_t fg = F.rows;
    ExactMatrix big(M.ring, static_cast<size_t>(n) + fg * deltas.size(),
                    static_cast<size_t>(n) * deltas.size());
    for (size_t s = 0; s < deltas.size(); ++s) {
      ExactMatrix DT = transpose(deltas[s]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          big.set_from_rat(static_cast<size_t>(i), s * n + j, DT.get_rat(i, j));
      for (size_t r = 0; r < fg; ++r)
        for (int j = 0; j < n; ++j)
          big.set_from_rat(static_cast<size_t>(n) + s * fg + r, s * n + j,
                           -F.get_rat(r, j));
    }
    ExactMatrix K = kernel(big);
    ExactMatrix next = take_cols(K, 0, static_cast<size_t>(n));
    HowellForm HN = span_form(next);
    // must strictly grow
    bool grew = false;
    for (size_t r = 0; r < HN.nrows && !grew; ++r)
      if (!in_row_span(HF, take_rows(HN.H, {r}))) grew = true;
    if (!grew) throw module_error("NotUnipotent: canonical filtration stalls");
    F = take_rows(HN.H, [&] {
      std::vector<size_t> idx(HN.nrows);
      for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      return idx;
    }());
    ++depth;
  }
  throw module_error("NotUnipotent: canonical filtration did not terminate");
}

MPoly<RatCtx> act_matrix_poly(const FilteredModule& M, const MalcevGroup& G, int64_t budget) {
  RatCtx R;
  const int n = G.total_rank(), r = M.rank;
  auto S = Staircase::make(G.slot_weights(), budget);
  auto eval = [&](const MultiIndex& J, std::vector<mpq_class>& buf) {
    GroupElem g(J.begin(), J.end());
    ExactMatrix A = act_matrix(M, g);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) buf[i * r + j] = A.get_rat(i, j);
  };
  auto P = interpolate_staircase<RatCtx>(R, S, r * r, eval);
  verify_support_bound<RatCtx>(R, S, P, eval);
  return P;
}

}  // namespace procoh

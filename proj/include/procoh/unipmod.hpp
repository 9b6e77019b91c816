#pragma once

#include "procoh/matrix.hpp"
#include "procoh/nilgroup.hpp"

namespace procoh {

struct module_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Finitely generated free W- or Q-module with an adapted (basis-prefix)
 * filtration and one invertible generator action per Mal'cev slot. The
 * action of a group element psi(g) is the slot-ordered product of
 * generator powers, each evaluated as a finite binomial sum. */
struct FilteredModule {
  RingSpec ring;
  int rank = 0;
  std::vector<int> fil_sizes;           // dim of Fil^0 <= Fil^1 <= ... <= Fil^dA = rank
  std::vector<ExactMatrix> gen_action;  // one per coordinate slot
  int fil_width = 1;

  int num_levels() const { return static_cast<int>(fil_sizes.size()); }
  int top_level() const { return num_levels() - 1; }
  int level_of_basis(int b) const;
  std::vector<int> basis_levels() const;

  static FilteredModule trivial(RingSpec ring, int rank, int slots);
  // gamma acts by an arbitrary matrix on a rank-1..n abelian(1) module
  static FilteredModule cyclic_action(RingSpec ring, const ExactMatrix& rho,
                                      std::vector<int> fil_sizes = {});
  // standard 3-dimensional representation of the Heisenberg preset
  static FilteredModule heisenberg_standard(RingSpec ring);
};

std::vector<std::string> check_module(const FilteredModule& M, const MalcevGroup& G);

/* rho_s^x = sum_k binom(x, k) (rho_s - 1)^k; exact for any integer x by
 * nilpotency of rho_s - 1. Throws NonUnipotentAction if the sum fails to
 * terminate. */
ExactMatrix slot_power(const FilteredModule& M, int slot, int64_t x);
ExactMatrix act_matrix(const FilteredModule& M, const GroupElem& g);
// rho(psi(g)) * v for a column vector v
ExactMatrix act(const FilteredModule& M, const GroupElem& g, const ExactMatrix& v);

/* Greedy basis-prefix unipotence filtration: each step takes the longest
 * prefix that all (rho_s - 1) map into the previous prefix. */
std::vector<int> standard_filtration(const FilteredModule& M);

/* Length - 1 of the canonical submodule unipotence filtration (iterated
 * invariants, arbitrary submodules); the filtration depth that drives the
 * auto degree bound. Non-prefix levels such as ell*A are handled. */
int unipotence_depth(const FilteredModule& M);

/* Cached generator powers over a scalar context; the inner loop of every
 * cochain evaluation. Matrices are flat row-major arrays. */
template <class Ctx>
class ActionTable {
 public:
  using Elt = typename Ctx::Elt;
  ActionTable(const Ctx& R, const FilteredModule& M) : R_(R), M_(&M), rank_(M.rank) {
    for (const auto& A : M.gen_action) deltas_.push_back(to_flat_minus_id(A));
  }

  int rank() const { return rank_; }

  const std::vector<Elt>& power(int slot, int64_t x) {
    auto key = std::make_pair(slot, x);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Elt> acc = flat_identity();
    std::vector<Elt> nil = flat_identity();  // (rho-1)^k
    int64_t max_k = static_cast<int64_t>(rank_) *
                    (M_->ring.is_modular() ? std::max(1, M_->ring.power) : 1);
    for (int64_t k = 1; k <= max_k + 1; ++k) {
      nil = flat_mul(nil, deltas_[slot]);
      if (flat_is_zero(nil)) break;
      if (k > max_k) throw module_error("NonUnipotentAction: binomial series does not terminate");
      Elt b = R_.binom(x, k);
      if (R_.is_zero(b)) continue;
      for (int i = 0; i < rank_ * rank_; ++i) acc[i] = R_.add(acc[i], R_.mul(b, nil[i]));
    }
    return cache_.emplace(key, std::move(acc)).first->second;
  }

  // v := rho(psi(g)) v; the deepest slot's factor is rightmost, so it acts first
  void apply(const GroupElem& g, std::vector<Elt>& v) {
    for (size_t s = 0; s < g.size(); ++s) {
      if (g[s] == 0) continue;
      const auto& A = power(static_cast<int>(s), g[s]);
      apply_flat(A, v);
    }
  }

  void apply_flat(const std::vector<Elt>& A, std::vector<Elt>& v) {
    tmp_.assign(rank_, R_.zero());
    for (int i = 0; i < rank_; ++i) {
      Elt acc = R_.zero();
      for (int j = 0; j < rank_; ++j) acc = R_.add(acc, R_.mul(A[i * rank_ + j], v[j]));
      tmp_[i] = acc;
    }
    v = tmp_;
  }

 private:
  std::vector<Elt> to_flat_minus_id(const ExactMatrix& A) {
    std::vector<Elt> f(rank_ * rank_, R_.zero());
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) {
        Elt e = R_.from_rat(A.get_rat(i, j));
        if (i == j) e = R_.sub(e, R_.one());
        f[i * rank_ + j] = e;
      }
    return f;
  }
  std::vector<Elt> flat_identity() const {
    std::vector<Elt> f(rank_ * rank_, R_.zero());
    for (int i = 0; i < rank_; ++i) f[i * rank_ + i] = R_.one();
    return f;
  }
  std::vector<Elt> flat_mul(const std::vector<Elt>& A, const std::vector<Elt>& B) const {
    std::vector<Elt> C(rank_ * rank_, R_.zero());
    for (int i = 0; i < rank_; ++i)
      for (int k = 0; k < rank_; ++k) {
        if (R_.is_zero(A[i * rank_ + k])) continue;
        for (int j = 0; j < rank_; ++j)
          C[i * rank_ + j] =
              R_.add(C[i * rank_ + j], R_.mul(A[i * rank_ + k], B[k * rank_ + j]));
      }
    return C;
  }
  bool flat_is_zero(const std::vector<Elt>& A) const {
    for (const auto& x : A)
      if (!R_.is_zero(x)) return false;
    return true;
  }

  Ctx R_;
  const FilteredModule* M_;
  int rank_;
  std::vector<std::vector<Elt>> deltas_;
  std::map<std::pair<int, int64_t>, std::vector<Elt>> cache_;
  std::vector<Elt> tmp_;
};

ExactMatrix act_matrix(const FilteredModule& M, const GroupElem& g);

/* Symbolic action matrix: entries are Mahler polynomials in the slot
 * exponents over the module's own ring; specializing at integer points
 * equals act. */
template <class Ctx>
MPoly<Ctx> act_matrix_poly(const Ctx& R, const FilteredModule& M, const MalcevGroup& G,
                           int64_t budget) {
  const int r = M.rank;
  auto S = Staircase::make(G.slot_weights(), budget);
  auto eval = [&](const MultiIndex& J, std::vector<typename Ctx::Elt>& buf) {
    GroupElem g(J.begin(), J.end());
    ExactMatrix A = act_matrix(M, g);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) buf[i * r + j] = R.from_rat(A.get_rat(i, j));
  };
  auto P = interpolate_staircase<Ctx>(R, S, r * r, eval);
  verify_support_bound<Ctx>(R, S, P, eval);
  return P;
}

}  // namespace procoh

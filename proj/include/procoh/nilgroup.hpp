#pragma once

#include <string>

#include "procoh/mahler.hpp"

namespace procoh {

struct group_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using GroupElem = Point;

/* Filtered weighted nilpotent group in Mal'cev coordinates of the second
 * kind. Coordinates are ordered deepest layer first: (x_m, ..., x_0); the
 * group law is a polynomial map in the concatenated coordinates (g, h) of
 * the two factors. */
struct MalcevGroup {
  std::string name;
  std::vector<int> layer_ranks;        // r_0, ..., r_m
  std::vector<int64_t> layer_weights;  // w_0, ..., w_m
  int64_t weight_A = 1;
  int degree_bound = 1;  // d of the conjugation/change-of-basis assumption
  PolyMap law;           // total_rank outputs in 2*total_rank variables
  bool integer_law = true;

  int num_layers() const { return static_cast<int>(layer_ranks.size()); }  // m+1
  int top_layer() const { return num_layers() - 1; }                       // m
  int total_rank() const;
  // coordinate slots run over layers m, m-1, ..., 0
  int slot_layer(int s) const;
  int64_t slot_weight(int s) const { return layer_weights[slot_layer(s)]; }
  std::vector<int64_t> slot_weights() const;
  GroupElem id() const { return GroupElem(total_rank(), 0); }
  GroupElem one_param(int slot, int64_t t) const {
    GroupElem g = id();
    g[slot] = t;
    return g;
  }
};

GroupElem multiply(const MalcevGroup& G, const GroupElem& g, const GroupElem& h);
GroupElem inverse(const MalcevGroup& G, const GroupElem& g);
// h^{-1} g h
GroupElem conjugate(const MalcevGroup& G, const GroupElem& h, const GroupElem& g);

/* The family P_i with h^{-1} psi(x) h = psi(x + P(x)); components are
 * monomial-basis polynomials in the coordinates of x, of degree <= d. */
PolyMap conjugation_polynomials(const MalcevGroup& G, const GroupElem& h);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
ValidationReport validate(const MalcevGroup& G, int64_t ell = 0);

MalcevGroup preset_abelian(int r);
MalcevGroup preset_heisenberg();
MalcevGroup preset_unitriangular(int n);
// "abelian:2", "heisenberg", "unitriangular:4"
MalcevGroup parse_group_preset(const std::string& name);

/* Congruence quotient N / N(ell^k): coordinates reduced mod ell^k; the
 * integral triangular law descends. Elements are indexed mixed-radix. */
struct FiniteQuotient {
  MalcevGroup group;
  int64_t ell = 0;
  int level = 0;
  int64_t m = 0;     // ell^level
  size_t size = 0;   // m^total_rank
  PolyMap law_mod;   // law with coefficients reduced mod m

  size_t elem_index(const GroupElem& g) const;
  GroupElem elem_at(size_t idx) const;
  GroupElem reduce(const GroupElem& g) const;
  GroupElem mul(const GroupElem& a, const GroupElem& b) const;
  GroupElem inv(const GroupElem& a) const;
  GroupElem id() const { return group.id(); }
};

FiniteQuotient congruence_quotient(const MalcevGroup& G, int64_t ell, int level,
                                   size_t cap = 729);

// Mahler -> monomial basis conversion (exact, over Q)
MonoPoly mahler_to_monomial(const MPoly<RatCtx>& P, int component);

}  // namespace procoh

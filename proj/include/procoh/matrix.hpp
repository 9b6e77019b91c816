#pragma once

#include <optional>
#include <vector>

#include "procoh/ring.hpp"

namespace procoh {

struct not_a_submodule : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Isomorphism class of a finitely generated module: free rank over Q, or a
 * multiset of torsion factors ell^e over Z/ell^i. */
struct ModuleInvariants {
  bool rational = false;
  int64_t free_rank = 0;
  std::vector<int> torsion;  // exponents e >= 1, sorted descending

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const ModuleInvariants& o) const {
    return rational == o.rational && free_rank == o.free_rank && torsion == o.torsion;
  }
  // log_ell of the group order (modular case)
  int64_t log_order() const {
    int64_t s = 0;
    for (int e : torsion) s += e;
    return s;
  }
  std::string str(int64_t ell = 0) const;
};

/* Dense matrix over Z/ell^i (canonical int64 residues) or Q (exact mpq). */
class ExactMatrix {
 public:
  RingSpec ring;
  size_t rows = 0, cols = 0;
  std::vector<int64_t> mi;      // modular storage
  std::vector<mpq_class> qi;    // rational storage

  ExactMatrix() = default;
  ExactMatrix(RingSpec r, size_t nr, size_t nc);

  int64_t& m(size_t i, size_t j) { return mi[i * cols + j]; }
  int64_t m(size_t i, size_t j) const { return mi[i * cols + j]; }
  mpq_class& q(size_t i, size_t j) { return qi[i * cols + j]; }
  const mpq_class& q(size_t i, size_t j) const { return qi[i * cols + j]; }

  bool is_zero() const;
  bool operator==(const ExactMatrix& o) const;
  void set_from_int(size_t i, size_t j, const mpz_class& v);
  void set_from_rat(size_t i, size_t j, const mpq_class& v);
  mpq_class get_rat(size_t i, size_t j) const;
  std::string str() const;
};

ExactMatrix zeros(RingSpec ring, size_t r, size_t c);
ExactMatrix identity(RingSpec ring, size_t n);
ExactMatrix mat_mul(const ExactMatrix& A, const ExactMatrix& B);
ExactMatrix mat_add(const ExactMatrix& A, const ExactMatrix& B);
ExactMatrix mat_sub(const ExactMatrix& A, const ExactMatrix& B);
ExactMatrix mat_neg(const ExactMatrix& A);
ExactMatrix mat_scale(const ExactMatrix& A, const mpq_class& c);
ExactMatrix hstack(const ExactMatrix& A, const ExactMatrix& B);
ExactMatrix vstack(const ExactMatrix& A, const ExactMatrix& B);
ExactMatrix transpose(const ExactMatrix& A);
ExactMatrix take_rows(const ExactMatrix& A, const std::vector<size_t>& idx);
ExactMatrix take_cols(const ExactMatrix& A, size_t from, size_t to);
// reduce a rational matrix mod p (throws if a denominator is divisible by p)
ExactMatrix reduce_mod(const ExactMatrix& A, RingSpec target);

struct HowellForm {
  ExactMatrix H;   // canonical form, padded with trailing zero rows
  ExactMatrix U;   // invertible, U * pad(M) = H
  size_t nrows = 0;               // number of nonzero rows of H
  std::vector<size_t> pivot_col;  // per nonzero row
  std::vector<int> pivot_val;     // ell-valuation of each pivot
};

/* Canonical row-span form over Z/ell^i: pivots are ell^v, entries above a
 * pivot reduced mod ell^v, and the span is Howell-saturated (annihilator
 * rows absorbed). Equal row spans give literally equal H. */
HowellForm howell_form(const ExactMatrix& M);

// reduced row echelon form over Q with transform (same contract shape)
HowellForm rref_form(const ExactMatrix& M);

// canonical span form for either ring
HowellForm span_form(const ExactMatrix& M);

// rows generate {v : v M = 0}; exact over Z/ell^i, a basis over Q
ExactMatrix kernel(const ExactMatrix& M);

size_t rank_rational(const ExactMatrix& M);

/* Reduce v against a span form; returns the representation coefficients if
 * v lies in the row span. `v_out`, when given, receives the residual. */
std::optional<std::vector<mpq_class>> reduce_against(const HowellForm& F, const ExactMatrix& v,
                                                     ExactMatrix* v_out = nullptr);
bool in_row_span(const HowellForm& F, const ExactMatrix& v);
bool span_contains(const ExactMatrix& Z, const ExactMatrix& B);

/* Invariants of row-span(Z)/row-span(B); throws not_a_submodule if
 * span(B) is not contained in span(Z). */
ModuleInvariants subquotient_invariants(const ExactMatrix& Z, const ExactMatrix& B);

// invariants of W^k / row-span(R) (R has k columns)
ModuleInvariants cokernel_invariants(const ExactMatrix& R, size_t k);

}  // namespace procoh

#include "procoh/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace procoh {

std::string ModuleInvariants::str(int64_t ell) const {
  std::ostringstream os;
  if (rational) {
    os << "Q^" << free_rank;
    return os.str();
  }
  if (torsion.empty()) return "0";
  std::string base = ell > 0 ? std::to_string(ell) : "l";
  for (size_t i = 0; i < torsion.size(); ++i) {
    if (i) os << " + ";
    os << "Z/" << base << "^" << torsion[i];
  }
  return os.str();
}

ExactMatrix::ExactMatrix(RingSpec r, size_t nr, size_t nc) : ring(r), rows(nr), cols(nc) {
  if (ring.is_modular())
    mi.assign(rows * cols, 0);
  else
    qi.assign(rows * cols, mpq_class(0));
}

bool ExactMatrix::is_zero() const {
  if (ring.is_modular()) {
    for (int64_t v : mi)
      if (v != 0) return false;
  } else {
    for (const auto& v : qi)
      if (v != 0) return false;
  }
  return true;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const {
  if (!(ring == o.ring) || rows != o.rows || cols != o.cols) return false;
  return ring.is_modular() ? mi == o.mi : qi == o.qi;
}

void ExactMatrix::set_from_int(size_t i, size_t j, const mpz_class& v) {
  if (ring.is_modular())
    m(i, j) = to_mod(v, ring.modulus);
  else
    q(i, j) = mpq_class(v);
}

void ExactMatrix::set_from_rat(size_t i, size_t j, const mpq_class& v) {
  if (ring.is_modular())
    m(i, j) = rat_to_mod(v, ring.modulus);
  else
    q(i, j) = v;
}

mpq_class ExactMatrix::get_rat(size_t i, size_t j) const {
  if (ring.is_modular()) return mpq_class(m(i, j));
  return q(i, j);
}

std::string ExactMatrix::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < rows; ++i) {
    os << (i == 0 ? "[" : " ") << "[";
    for (size_t j = 0; j < cols; ++j) {
      if (j) os << " ";
      if (ring.is_modular())
        os << m(i, j);
      else
        os << q(i, j);
    }
    os << "]" << (i + 1 == rows ? "]" : "\n");
  }
  if (rows == 0) os << "[]";
  return os.str();
}

ExactMatrix zeros(RingSpec ring, size_t r, size_t c) { return ExactMatrix(ring, r, c); }

ExactMatrix identity(RingSpec ring, size_t n) {
  ExactMatrix I(ring, n, n);
  for (size_t i = 0; i < n; ++i) {
    if (ring.is_modular())
      I.m(i, i) = 1 % ring.modulus;
    else
      I.q(i, i) = 1;
  }
  return I;
}

ExactMatrix mat_mul(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.cols != B.rows || !(A.ring == B.ring)) throw ring_error("mat_mul: shape/ring mismatch");
  ExactMatrix C(A.ring, A.rows, B.cols);
  if (A.ring.is_modular()) {
    int64_t m = A.ring.modulus;
    for (size_t i = 0; i < A.rows; ++i)
      for (size_t k = 0; k < A.cols; ++k) {
        int64_t a = A.m(i, k);
        if (a == 0) continue;
        const int64_t* brow = &B.mi[k * B.cols];
        int64_t* crow = &C.mi[i * C.cols];
        for (size_t j = 0; j < B.cols; ++j) crow[j] = (crow[j] + a * brow[j]) % m;
      }
  } else {
    for (size_t i = 0; i < A.rows; ++i)
      for (size_t k = 0; k < A.cols; ++k) {
        const mpq_class& a = A.q(i, k);
        if (a == 0) continue;
        for (size_t j = 0; j < B.cols; ++j) C.q(i, j) += a * B.q(k, j);
      }
  }
  return C;
}

ExactMatrix mat_add(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols || !(A.ring == B.ring))
    throw ring_error("mat_add: shape/ring mismatch");
  ExactMatrix C(A.ring, A.rows, A.cols);
  if (A.ring.is_modular())
    for (size_t i = 0; i < A.mi.size(); ++i) C.mi[i] = mod_add(A.mi[i], B.mi[i], A.ring.modulus);
  else
    for (size_t i = 0; i < A.qi.size(); ++i) C.qi[i] = A.qi[i] + B.qi[i];
  return C;
}

ExactMatrix mat_sub(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols || !(A.ring == B.ring))
    throw ring_error("mat_sub: shape/ring mismatch");
  ExactMatrix C(A.ring, A.rows, A.cols);
  if (A.ring.is_modular())
    for (size_t i = 0; i < A.mi.size(); ++i) C.mi[i] = mod_sub(A.mi[i], B.mi[i], A.ring.modulus);
  else
    for (size_t i = 0; i < A.qi.size(); ++i) C.qi[i] = A.qi[i] - B.qi[i];
  return C;
}

ExactMatrix mat_neg(const ExactMatrix& A) {
  ExactMatrix C(A.ring, A.rows, A.cols);
  if (A.ring.is_modular())
    for (size_t i = 0; i < A.mi.size(); ++i) C.mi[i] = mod_neg(A.mi[i], A.ring.modulus);
  else
    for (size_t i = 0; i < A.qi.size(); ++i) C.qi[i] = -A.qi[i];
  return C;
}

ExactMatrix mat_scale(const ExactMatrix& A, const mpq_class& c) {
  ExactMatrix C(A.ring, A.rows, A.cols);
  if (A.ring.is_modular()) {
    int64_t cm = rat_to_mod(c, A.ring.modulus);
    for (size_t i = 0; i < A.mi.size(); ++i) C.mi[i] = mod_mul(A.mi[i], cm, A.ring.modulus);
  } else {
    for (size_t i = 0; i < A.qi.size(); ++i) C.qi[i] = A.qi[i] * c;
  }
  return C;
}

ExactMatrix hstack(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.rows != B.rows || !(A.ring == B.ring)) throw ring_error("hstack: shape/ring mismatch");
  ExactMatrix C(A.ring, A.rows, A.cols + B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < C.cols; ++j) {
      if (A.ring.is_modular())
        C.m(i, j) = j < A.cols ? A.m(i, j) : B.m(i, j - A.cols);
      else
        C.q(i, j) = j < A.cols ? A.q(i, j) : B.q(i, j - A.cols);
    }
  return C;
}

ExactMatrix vstack(const ExactMatrix& A, const ExactMatrix& B) {
  if (A.cols != B.cols || !(A.ring == B.ring)) throw ring_error("vstack: shape/ring mismatch");
  ExactMatrix C(A.ring, A.rows + B.rows, A.cols);
  if (A.ring.is_modular()) {
    std::copy(A.mi.begin(), A.mi.end(), C.mi.begin());
    std::copy(B.mi.begin(), B.mi.end(), C.mi.begin() + A.mi.size());
  } else {
    std::copy(A.qi.begin(), A.qi.end(), C.qi.begin());
    std::copy(B.qi.begin(), B.qi.end(), C.qi.begin() + A.qi.size());
  }
  return C;
}

ExactMatrix transpose(const ExactMatrix& A) {
  ExactMatrix C(A.ring, A.cols, A.rows);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < A.cols; ++j) {
      if (A.ring.is_modular())
        C.m(j, i) = A.m(i, j);
      else
        C.q(j, i) = A.q(i, j);
    }
  return C;
}

ExactMatrix take_rows(const ExactMatrix& A, const std::vector<size_t>& idx) {
  ExactMatrix C(A.ring, idx.size(), A.cols);
  for (size_t k = 0; k < idx.size(); ++k)
    for (size_t j = 0; j < A.cols; ++j) {
      if (A.ring.is_modular())
        C.m(k, j) = A.m(idx[k], j);
      else
        C.q(k, j) = A.q(idx[k], j);
    }
  return C;
}

ExactMatrix take_cols(const ExactMatrix& A, size_t from, size_t to) {
  ExactMatrix C(A.ring, A.rows, to - from);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = from; j < to; ++j) {
      if (A.ring.is_modular())
        C.m(i, j - from) = A.m(i, j);
      else
        C.q(i, j - from) = A.q(i, j);
    }
  return C;
}

ExactMatrix reduce_mod(const ExactMatrix& A, RingSpec target) {
  if (A.ring.is_modular() || !target.is_modular()) throw ring_error("reduce_mod: Q -> Z/m only");
  ExactMatrix C(target, A.rows, A.cols);
  for (size_t i = 0; i < A.qi.size(); ++i) C.mi[i] = rat_to_mod(A.qi[i], target.modulus);
  return C;
}

namespace {

// row ops on raw int64 storage
inline void row_swap(std::vector<int64_t>& a, size_t c, size_t i, size_t j) {
  if (i == j) return;
  std::swap_ranges(a.begin() + i * c, a.begin() + (i + 1) * c, a.begin() + j * c);
}
inline void row_scale(std::vector<int64_t>& a, size_t c, size_t i, int64_t s, int64_t m) {
  int64_t* p = &a[i * c];
  for (size_t j = 0; j < c; ++j) p[j] = (p[j] * s) % m;
}
// row i -= s * row j
inline void row_axpy(std::vector<int64_t>& a, size_t c, size_t i, size_t j, int64_t s, int64_t m) {
  if (s == 0) return;
  int64_t* pi = &a[i * c];
  const int64_t* pj = &a[j * c];
  for (size_t k = 0; k < c; ++k) {
    if (pj[k] == 0) continue;
    pi[k] = mod_reduce(pi[k] - s * pj[k], m);
  }
}

}  // namespace

HowellForm howell_form(const ExactMatrix& M) {
  if (!M.ring.is_modular()) throw ring_error("howell_form: modular ring required");
  const int64_t m = M.ring.modulus, ell = M.ring.ell;
  const int pw = M.ring.power;
  const size_t r = M.rows, c = M.cols;
  const size_t pad = c, N = r + pad;

  std::vector<int64_t> P(N * c, 0);
  std::copy(M.mi.begin(), M.mi.end(), P.begin());
  std::vector<int64_t> U(N * N, 0);
  for (size_t i = 0; i < N; ++i) U[i * N + i] = 1 % m;

  size_t cur = 0, active = r, spare = r;
  std::vector<size_t> pivot_col;
  std::vector<int> pivot_val;

  for (size_t col = 0; col < c; ++col) {
    size_t best = N;
    int best_v = pw + 1;
    for (size_t row = cur; row < active; ++row) {
      int64_t e = P[row * c + col];
      if (e == 0) continue;
      int v = ell_val(e, ell, pw);
      if (v < best_v) {
        best_v = v;
        best = row;
        if (v == 0) break;
      }
    }
    if (best == N) continue;

    row_swap(P, c, cur, best);
    row_swap(U, N, cur, best);
    int64_t e = P[cur * c + col];
    int v = best_v;
    int64_t u = mod_reduce(unit_part(e, ell), m);
    int64_t uinv = mod_inv(u, m);
    row_scale(P, c, cur, uinv, m);
    row_scale(U, N, cur, uinv, m);
    int64_t piv = P[cur * c + col];  // = ell^v

    for (size_t row = 0; row < active; ++row) {
      if (row == cur) continue;
      int64_t t = P[row * c + col];
      if (t == 0) continue;
      int64_t qf = t / piv;  // representatives divisible for rows below; floor above
      row_axpy(P, c, row, cur, qf, m);
      row_axpy(U, N, row, cur, qf, m);
    }

    if (v > 0) {
      int64_t f = to_mod(ipow(ell, pw - v), m);
      row_axpy(P, c, spare, cur, mod_neg(f, m), m);  // spare += f * cur
      row_axpy(U, N, spare, cur, mod_neg(f, m), m);
      if (spare >= active) active = spare + 1;
      ++spare;
    }
    pivot_col.push_back(col);
    pivot_val.push_back(v);
    ++cur;
  }

  HowellForm F;
  F.H = ExactMatrix(M.ring, N, c);
  F.H.mi = std::move(P);
  F.U = ExactMatrix(M.ring, N, N);
  F.U.mi = std::move(U);
  F.nrows = cur;
  F.pivot_col = std::move(pivot_col);
  F.pivot_val = std::move(pivot_val);
  return F;
}

HowellForm rref_form(const ExactMatrix& M) {
  if (M.ring.is_modular()) throw ring_error("rref_form: rational ring required");
  const size_t r = M.rows, c = M.cols;
  ExactMatrix P = M;
  ExactMatrix U = identity(M.ring, r);
  size_t cur = 0;
  std::vector<size_t> pivot_col;
  for (size_t col = 0; col < c && cur < r; ++col) {
    size_t best = r;
    for (size_t row = cur; row < r; ++row)
      if (P.q(row, col) != 0) {
        best = row;
        break;
      }
    if (best == r) continue;
    for (size_t j = 0; j < c; ++j) std::swap(P.q(cur, j), P.q(best, j));
    for (size_t j = 0; j < r; ++j) std::swap(U.q(cur, j), U.q(best, j));
    mpq_class inv = 1 / P.q(cur, col);
    for (size_t j = 0; j < c; ++j) P.q(cur, j) *= inv;
    for (size_t j = 0; j < r; ++j) U.q(cur, j) *= inv;
    for (size_t row = 0; row < r; ++row) {
      if (row == cur) continue;
      mpq_class f = P.q(row, col);
      if (f == 0) continue;
      for (size_t j = 0; j < c; ++j) P.q(row, j) -= f * P.q(cur, j);
      for (size_t j = 0; j < r; ++j) U.q(row, j) -= f * U.q(cur, j);
    }
    pivot_col.push_back(col);
    ++cur;
  }
  HowellForm F;
  F.H = std::move(P);
  F.U = std::move(U);
  F.nrows = cur;
  F.pivot_col = std::move(pivot_col);
  F.pivot_val.assign(cur, 0);
  return F;
}

HowellForm span_form(const ExactMatrix& M) {
  return M.ring.is_modular() ? howell_form(M) : rref_form(M);
}

ExactMatrix kernel(const ExactMatrix& M) {
  const size_t r = M.rows;
  if (r == 0) return ExactMatrix(M.ring, 0, 0);
  HowellForm F = span_form(hstack(M, identity(M.ring, r)));
  std::vector<size_t> krows;
  const size_t c = M.cols;
  // rows of H with zero first block generate the left kernel (Howell property)
  for (size_t i = 0; i < F.nrows; ++i)
    if (F.pivot_col[i] >= c) krows.push_back(i);
  ExactMatrix K(M.ring, krows.size(), r);
  for (size_t k = 0; k < krows.size(); ++k)
    for (size_t j = 0; j < r; ++j) {
      if (M.ring.is_modular())
        K.m(k, j) = F.H.m(krows[k], c + j);
      else
        K.q(k, j) = F.H.q(krows[k], c + j);
    }
  return K;
}

size_t rank_rational(const ExactMatrix& M) {
  if (M.ring.is_modular()) throw ring_error("rank_rational: rational ring required");
  return rref_form(M).nrows;
}

std::optional<std::vector<mpq_class>> reduce_against(const HowellForm& F, const ExactMatrix& v,
                                                     ExactMatrix* v_out) {
  if (v.rows != 1 || v.cols != F.H.cols) throw ring_error("reduce_against: shape mismatch");
  ExactMatrix w = v;
  std::vector<mpq_class> coeff(F.nrows, mpq_class(0));
  if (F.H.ring.is_modular()) {
    const int64_t m = F.H.ring.modulus, ell = F.H.ring.ell;
    const int pw = F.H.ring.power;
    for (size_t i = 0; i < F.nrows; ++i) {
      int64_t t = w.m(0, F.pivot_col[i]);
      if (t == 0) continue;
      if (ell_val(t, ell, pw) < F.pivot_val[i]) break;  // leaves a residual
      int64_t piv = F.H.m(i, F.pivot_col[i]);
      int64_t qf = t / piv;
      for (size_t j = 0; j < w.cols; ++j)
        w.m(0, j) = mod_reduce(w.m(0, j) - qf * F.H.m(i, j), m);
      coeff[i] = qf;
    }
  } else {
    for (size_t i = 0; i < F.nrows; ++i) {
      mpq_class t = w.q(0, F.pivot_col[i]);
      if (t == 0) continue;
      for (size_t j = 0; j < w.cols; ++j) w.q(0, j) -= t * F.H.q(i, j);
      coeff[i] = t;
    }
  }
  bool member = w.is_zero();
  if (v_out) *v_out = std::move(w);
  if (!member) return std::nullopt;
  return coeff;
}

bool in_row_span(const HowellForm& F, const ExactMatrix& v) {
  return reduce_against(F, v).has_value();
}

bool span_contains(const ExactMatrix& Z, const ExactMatrix& B) {
  HowellForm F = span_form(Z);
  for (size_t i = 0; i < B.rows; ++i)
    if (!in_row_span(F, take_rows(B, {i}))) return false;
  return true;
}

ModuleInvariants cokernel_invariants(const ExactMatrix& R, size_t k) {
  if (R.cols != k && R.rows > 0) throw ring_error("cokernel_invariants: column count mismatch");
  ModuleInvariants inv;
  if (!R.ring.is_modular()) {
    inv.rational = true;
    inv.free_rank = static_cast<int64_t>(k) - (R.rows ? static_cast<int64_t>(rank_rational(R)) : 0);
    return inv;
  }
  const int64_t m = R.ring.modulus, ell = R.ring.ell;
  const int pw = R.ring.power;
  // local Smith form: repeatedly pick a minimal-valuation entry as pivot
  // and clear its row and column; everything stays in W
  std::vector<int64_t> A = R.mi;
  size_t rows = R.rows, cols = k;
  std::vector<bool> rdone(rows, false), cdone(cols, false);
  size_t pivots = 0;
  while (true) {
    int best_v = pw + 1;
    size_t bi = rows, bj = cols;
    for (size_t i = 0; i < rows; ++i) {
      if (rdone[i]) continue;
      for (size_t j = 0; j < cols; ++j) {
        if (cdone[j]) continue;
        int64_t e = A[i * cols + j];
        if (e == 0) continue;
        int v = ell_val(e, ell, pw);
        if (v < best_v) {
          best_v = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == rows) break;
    // normalize pivot to ell^v
    int64_t u = mod_reduce(unit_part(A[bi * cols + bj], ell), m);
    int64_t uinv = mod_inv(u, m);
    for (size_t j = 0; j < cols; ++j) A[bi * cols + j] = (A[bi * cols + j] * uinv) % m;
    int64_t piv = A[bi * cols + bj];
    for (size_t i = 0; i < rows; ++i) {
      if (i == bi || rdone[i]) continue;
      int64_t t = A[i * cols + bj];
      if (t == 0) continue;
      int64_t qf = t / piv;  // exact: minimality of v
      for (size_t j = 0; j < cols; ++j)
        A[i * cols + j] = mod_reduce(A[i * cols + j] - qf * A[bi * cols + j], m);
    }
    for (size_t j = 0; j < cols; ++j) {
      if (j == bj || cdone[j]) continue;
      int64_t t = A[bi * cols + j];
      if (t == 0) continue;
      int64_t qf = t / piv;
      // column op: col_j -= qf * col_bj (basis change of W^k)
      for (size_t i = 0; i < rows; ++i)
        A[i * cols + j] = mod_reduce(A[i * cols + j] - qf * A[i * cols + bj], m);
    }
    rdone[bi] = true;
    cdone[bj] = true;
    ++pivots;
    if (best_v > 0) inv.torsion.push_back(best_v);  // factor Z/ell^v
  }
  for (size_t j = 0; j < cols - std::min(cols, pivots); ++j) inv.torsion.push_back(pw);
  std::sort(inv.torsion.begin(), inv.torsion.end(), std::greater<int>());
  return inv;
}

ModuleInvariants subquotient_invariants(const ExactMatrix& Z, const ExactMatrix& B) {
  if (!(Z.ring == B.ring) || Z.cols != B.cols) throw ring_error("subquotient: ring/shape mismatch");
  HowellForm F = span_form(Z);
  const size_t s = F.nrows;
  ExactMatrix gens = take_rows(F.H, [&] {
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    return idx;
  }());
  // express relations: B rows in generator coordinates, plus internal relations
  ExactMatrix C(Z.ring, B.rows, s);
  for (size_t i = 0; i < B.rows; ++i) {
    auto coeff = reduce_against(F, take_rows(B, {i}));
    if (!coeff) throw not_a_submodule("subquotient_invariants: span(B) not contained in span(Z)");
    for (size_t j = 0; j < s; ++j) C.set_from_rat(i, j, (*coeff)[j]);
  }
  ExactMatrix K = kernel(gens);
  ExactMatrix R = vstack(C, K);
  return cokernel_invariants(R, s);
}

}  // namespace procoh

#pragma once
// Exact linear algebra over the rationals: reduced row echelon form, rank,
// kernel bases and linear solving.  Sizes in this project stay small (at most
// a few hundred rows/columns), so plain fraction-arithmetic Gauss-Jordan with
// first-nonzero pivoting is both simple and fast enough.

#include <optional>

#include "aspt/common.hpp"

namespace aspt::linalg {

// In-place reduced row echelon form.  Returns the pivot column indices in
// order; rows below the returned rank are zero afterwards.
std::vector<int> rref(QMat& m);

int rank(QMat m);

// Basis of the right kernel {x : m x = 0}, one vector per free column of the
// RREF, in free-column order.  Deterministic for a given input.
QMat nullspace(const QMat& m);

// Canonical basis of the row span of `rows`: RREF, zero rows dropped, each
// row scaled to coprime integers with positive leading entry.  Two inputs
// spanning the same subspace produce identical output.
QMat canonical_row_basis(QMat rows);

// Basis of the right kernel computed by fraction-free (Bareiss-style)
// Gauss-Jordan elimination on a denominator-cleared integer copy of m.
// Intermediate entries are minors of the input, so the per-step division is
// exact and no rational arithmetic happens until the very end.  Spans the
// same space as nullspace(m) but stays fast on large matrices whose entries
// would otherwise blow up under fraction arithmetic.  Each basis vector is
// scaled to coprime integers, one per free column, in free-column order.
QMat fraction_free_kernel(const QMat& m);

// Solves a x = b exactly.  Returns std::nullopt when inconsistent.  Free
// variables (if any) are set to zero; when a has full column rank the
// solution is the unique one.
std::optional<QVec> solve(const QMat& a, const QVec& b);

// Scales a nonzero vector by a positive rational so entries become coprime
// integers, then flips the sign so the first nonzero entry is positive.
void primitive_integer_scale(QVec& v);

}  // namespace aspt::linalg

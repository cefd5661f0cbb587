#include "aspt/linalg.hpp"

namespace aspt::linalg {

std::vector<int> rref(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && m[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(m[r], m[pr]);
    const Rational pv = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= pv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(QMat m) { return static_cast<int>(rref(m).size()); }

QMat nullspace(const QMat& m) {
  if (m.empty()) return {};
  const size_t cols = m[0].size();
  QMat a = m;
  std::vector<int> pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;

  QMat basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, Rational(0));
    v[fc] = 1;
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      v[pivots[pi]] = -a[pi][fc];
    basis.push_back(std::move(v));
  }
  return basis;
}

QMat fraction_free_kernel(const QMat& m) {
  if (m.empty()) return {};
  const size_t rows = m.size(), cols = m[0].size();

  // Clear denominators row by row; row scaling leaves the kernel unchanged.
  std::vector<std::vector<mpz_class>> z(rows, std::vector<mpz_class>(cols));
  for (size_t i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (const auto& q : m[i])
      if (q != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    for (size_t j = 0; j < cols; ++j)
      z[i][j] = m[i][j].get_num() * (l / m[i][j].get_den());
  }

  // Fraction-free Gauss-Jordan: every row (pivot rows included) is updated
  // with the cross-multiplication rule at each step, which keeps all entries
  // equal to minors of the input, so the division by the previous pivot is
  // exact.  After the sweep all pivot entries equal the final pivot `prev`
  // and all other rows are zero.
  std::vector<int> pivots;
  mpz_class prev = 1, t;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t best = rows;
    for (size_t i = r; i < rows; ++i) {
      if (z[i][c] == 0) continue;
      if (best == rows || mpz_cmpabs(z[i][c].get_mpz_t(), z[best][c].get_mpz_t()) < 0) best = i;
    }
    if (best == rows) continue;
    std::swap(z[r], z[best]);
    const mpz_class piv = z[r][c];
    for (size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const mpz_class f = z[i][c];
      for (size_t j = 0; j < cols; ++j) {
        if (j == c) continue;
        t = piv * z[i][j] - f * z[r][j];
        mpz_divexact(z[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      z[i][c] = 0;
    }
    pivots.push_back(static_cast<int>(c));
    prev = piv;
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  QMat basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, Rational(0));
    v[fc] = Rational(prev);
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      v[pivots[pi]] = Rational(mpz_class(-z[pi][fc]));
    primitive_integer_scale(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

void primitive_integer_scale(QVec& v) {
  mpz_class den_lcm = 1, num_gcd = 0;
  for (const auto& q : v) {
    if (q == 0) continue;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    den_lcm = l;
  }
  for (const auto& q : v) {
    if (q == 0) continue;
    mpz_class scaled = q.get_num() * (den_lcm / q.get_den());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    num_gcd = g;
  }
  if (num_gcd == 0) return;  // zero vector
  Rational factor(den_lcm, num_gcd);
  factor.canonicalize();
  for (auto& q : v) q *= factor;
  for (const auto& q : v) {
    if (q == 0) continue;
    if (q < 0)
      for (auto& x : v) x = -x;
    break;
  }
}

QMat canonical_row_basis(QMat rows) {
  std::vector<int> pivots = rref(rows);
  rows.resize(pivots.size());
  for (auto& r : rows) primitive_integer_scale(r);
  return rows;
}

std::optional<QVec> solve(const QMat& a, const QVec& b) {
  if (a.empty()) return is_zero(b) ? std::optional<QVec>(QVec{}) : std::nullopt;
  const size_t rows = a.size(), cols = a[0].size();
  QMat aug(rows, QVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == static_cast<int>(cols))
    return std::nullopt;  // a pivot in the augmented column: inconsistent
  QVec x(cols, Rational(0));
  for (size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = aug[pi][cols];
  return x;
}

}  // namespace aspt::linalg

#include "aspt/cluster.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <utility>

#include "aspt/linalg.hpp"

namespace aspt::cluster {

namespace {

// Sparse polynomial in the 2n matrix entries; key = exponent vector with the
// entry for row r, column i at position r*n + i.
using Poly = std::map<std::vector<int>, Rational>;

void axpy(Poly& acc, const Rational& c, const Poly& p) {
  for (const auto& [mono, coeff] : p) {
    auto it = acc.emplace(mono, Rational(0)).first;
    it->second += c * coeff;
    if (it->second == 0) acc.erase(it);
  }
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      std::vector<int> k(ka.size());
      for (size_t i = 0; i < ka.size(); ++i) k[i] = ka[i] + kb[i];
      auto it = out.emplace(std::move(k), Rational(0)).first;
      it->second += ca * cb;
      if (it->second == 0) out.erase(it);
    }
  return out;
}

// The coordinate functions Delta_d as polynomials in the matrix entries.
std::vector<Poly> delta_symbolic(int n) {
  const auto& D = fan::IndexSetD::get(n);
  auto mono = [n](int v1, int v2) {
    std::vector<int> e(2 * n, 0);
    e[v1]++;
    e[v2]++;
    return e;
  };
  std::vector<Poly> ps;
  ps.reserve(D.elements.size());
  for (const auto& [a, b] : D.elements) {
    const int i = a.index - 1, j = b.index - 1;
    Poly p;
    if (!b.barred) {
      p[mono(i, n + j)] = 1;
      p[mono(j, n + i)] = -1;
    } else {
      p[mono(i, j)] = 1;
      p[mono(n + i, n + j)] = 1;
    }
    ps.push_back(std::move(p));
  }
  return ps;
}

// All monomials of degree <= 2 in the D coordinates, as sorted position
// multisets: the constant, then singles, then pairs in lexicographic order.
std::vector<std::vector<int>> monomials_deg_le2(int D) {
  std::vector<std::vector<int>> monos;
  monos.push_back({});
  for (int d = 0; d < D; ++d) monos.push_back({d});
  for (int d1 = 0; d1 < D; ++d1)
    for (int d2 = d1; d2 < D; ++d2) monos.push_back({d1, d2});
  return monos;
}

AmbientPoint random_nonvanishing_point(int n, rng::SplitMix64& g, QVec& x) {
  for (;;) {
    AmbientPoint z = random_ambient_point(n, g);
    x = delta_eval(z);
    if (std::none_of(x.begin(), x.end(), [](const Rational& c) { return c == 0; }))
      return z;
  }
}

// ---- exact kernel of the evaluation matrix -------------------------------
//
// The matrix is a few hundred rows/columns of rationals around 10^16, where
// plain fraction-arithmetic elimination is hopeless.  Fast path: compute the
// kernel modulo a word-sized prime, lift the (tiny) canonical coefficients
// by rational reconstruction, and certify every lifted vector exactly
// against the rational matrix.  The modular kernel dimension bounds the
// rational one from above, so certifying that many independent exact kernel
// vectors proves the lift is a full exact kernel basis.  Any miss falls back
// to exact fraction-free elimination.

constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t acc = 1;
  while (e) {
    if (e & 1) acc = mulmod(acc, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return acc;
}

std::uint64_t mod_of(const Rational& q) {
  const std::uint64_t num = mpz_fdiv_ui(q.get_num().get_mpz_t(), kPrime);
  const std::uint64_t den = mpz_fdiv_ui(q.get_den().get_mpz_t(), kPrime);
  return mulmod(num, powmod(den, kPrime - 2));
}

// Wang-style rational reconstruction of a residue; the candidate is accepted
// only if it reduces back to the residue, so a failed lift can only return
// nullopt, never a wrong value.
std::optional<Rational> rat_reconstruct(std::uint64_t r) {
  if (r == 0) return Rational(0);
  constexpr std::uint64_t kBound = 1ULL << 29;  // 2 * kBound^2 < kPrime
  std::uint64_t r0 = kPrime, r1 = r;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 > kBound) {
    const std::uint64_t q = r0 / r1;
    const std::uint64_t r2 = r0 - q * r1;
    const std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  std::int64_t num = static_cast<std::int64_t>(r1), den = t1;
  if (den < 0) {
    den = -den;
    num = -num;
  }
  if (den == 0 || den > static_cast<std::int64_t>(kBound)) return std::nullopt;
  Rational q = rat(num, den);
  if (mod_of(q) != r) return std::nullopt;
  return q;
}

std::optional<std::vector<QVec>> kernel_mod_p(const QMat& m) {
  const size_t rows = m.size(), cols = m[0].size();
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) a[i][j] = mod_of(m[i][j]);

  std::vector<int> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && a[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(a[r], a[pr]);
    const std::uint64_t inv = powmod(a[r][c], kPrime - 2);
    for (size_t j = c; j < cols; ++j) a[r][j] = mulmod(a[r][j], inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::uint64_t f = a[i][c];
      for (size_t j = c; j < cols; ++j) {
        const std::uint64_t sub = mulmod(f, a[r][j]);
        a[i][j] = a[i][j] >= sub ? a[i][j] - sub : a[i][j] + kPrime - sub;
      }
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<QVec> basis;
  for (size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    QVec v(cols, Rational(0));
    v[fc] = 1;
    for (size_t pi = 0; pi < pivots.size(); ++pi) {
      auto lifted = rat_reconstruct(a[pi][fc] == 0 ? 0 : kPrime - a[pi][fc]);
      if (!lifted) return std::nullopt;
      v[pivots[pi]] = std::move(*lifted);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_kernel(const QMat& m, const QVec& v) {
  for (const auto& row : m) {
    Rational acc = 0;
    for (size_t j = 0; j < row.size(); ++j)
      if (v[j] != 0) acc += row[j] * v[j];
    if (acc != 0) return false;
  }
  return true;
}

std::vector<QVec> exact_kernel(const QMat& m) {
  if (auto fast = kernel_mod_p(m)) {
    const bool certified = std::all_of(fast->begin(), fast->end(),
                                       [&](const QVec& v) { return in_kernel(m, v); });
    // The lifted vectors have unit entries at distinct free columns, hence
    // are independent; with the modular dimension as an upper bound they
    // then span the exact kernel.
    if (certified) return std::move(*fast);
  }
  return linalg::fraction_free_kernel(m);
}

// One independent discovery round: canonical basis of the exact kernel of
// the monomial evaluation matrix at fresh random points.
std::vector<QVec> kernel_round(int n, std::uint64_t seed,
                               const std::vector<std::vector<int>>& monos) {
  rng::SplitMix64 g(seed);
  const int pts = static_cast<int>(monos.size()) + 10;
  QMat m;
  m.reserve(pts);
  for (int p = 0; p < pts; ++p) {
    QVec x;
    random_nonvanishing_point(n, g, x);
    QVec row;
    row.reserve(monos.size());
    for (const auto& mo : monos) {
      Rational v = 1;
      for (int d : mo) v *= x[d];
      row.push_back(std::move(v));
    }
    m.push_back(std::move(row));
  }
  return linalg::canonical_row_basis(exact_kernel(m));
}

}  // namespace

QVec delta_eval(const AmbientPoint& z) {
  if (z.size() != 2 || z[0].empty() || z[0].size() != z[1].size())
    throw IoError("delta_eval: ambient point must be a 2 x n matrix");
  const int n = static_cast<int>(z[0].size());
  const auto& D = fan::IndexSetD::get(n);
  QVec out;
  out.reserve(D.elements.size());
  for (const auto& [a, b] : D.elements) {
    const int i = a.index - 1, j = b.index - 1;
    if (!b.barred)
      out.push_back(z[0][i] * z[1][j] - z[0][j] * z[1][i]);
    else
      out.push_back(z[0][i] * z[0][j] + z[1][i] * z[1][j]);
  }
  return out;
}

AmbientPoint random_ambient_point(int n, rng::SplitMix64& g) {
  AmbientPoint z(2, QVec(n, Rational(0)));
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < n; ++i) z[r][i] = rng::rational(g);
  return z;
}

bool verify_relation(const QuadraticRelation& r) {
  if (r.terms.empty()) return true;
  const auto ds = delta_symbolic(r.n);
  Poly acc;
  for (const auto& t : r.terms) {
    Poly prod;
    prod[std::vector<int>(2 * r.n, 0)] = 1;
    for (int v : t.vars) prod = mul(prod, ds.at(v));
    axpy(acc, t.c, prod);
  }
  return acc.empty();
}

std::vector<QuadraticRelation> discover_relations(int n, std::uint64_t seed) {
  if (n < 3 || n > 4)
    throw CapacityError("discover_relations: supported only for n in [3,4]");
  const int D = fan::IndexSetD::get(n).size();
  const auto monos = monomials_deg_le2(D);
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto b1 = kernel_round(n, rng::mix(seed, 2 * attempt), monos);
    auto b2 = kernel_round(n, rng::mix(seed, 2 * attempt + 1), monos);
    if (b1 != b2) continue;  // unstable pair: retry with fresh derived seeds
    std::vector<QuadraticRelation> rels;
    rels.reserve(b1.size());
    for (const auto& vec : b1) {
      QuadraticRelation r;
      r.n = n;
      for (size_t mi = 0; mi < monos.size(); ++mi) {
        if (vec[mi] == 0) continue;
        if (monos[mi].size() != 2)
          throw IntegrityError("discover_relations: kernel element is not purely quadratic");
        r.terms.push_back({vec[mi], monos[mi]});
      }
      if (!verify_relation(r))
        throw IntegrityError("discover_relations: kernel element fails symbolic verification");
      rels.push_back(std::move(r));
    }
    return rels;
  }
  throw SamplingError("discover_relations: kernel dimension unstable across paired rounds");
}

QuadraticRelation init_form(const QuadraticRelation& r, const QVec& w) {
  QuadraticRelation out;
  out.n = r.n;
  if (r.terms.empty()) return out;
  std::vector<Rational> deg;
  deg.reserve(r.terms.size());
  for (const auto& t : r.terms) {
    Rational d = 0;
    for (int v : t.vars) d += w.at(v);
    deg.push_back(std::move(d));
  }
  Rational mx = deg[0];
  for (const auto& d : deg)
    if (d > mx) mx = d;
  for (size_t i = 0; i < r.terms.size(); ++i)
    if (deg[i] == mx) out.terms.push_back(r.terms[i]);
  return out;
}

bool max_twice(const QuadraticRelation& r, const QVec& w) {
  return init_form(r, w).terms.size() >= 2;
}

bool prevariety_check(const QVec& w, const std::vector<QuadraticRelation>& relations) {
  return std::all_of(relations.begin(), relations.end(),
                     [&](const QuadraticRelation& r) { return max_twice(r, w); });
}

std::string SignPattern::str() const {
  std::string s;
  s.reserve(nu.size());
  for (int v : nu) s.push_back(v > 0 ? '+' : '-');
  return s;
}

SignPattern SignPattern::parse(int n, const std::string& s) {
  if (static_cast<int>(s.size()) != n * n)
    throw IoError("sign pattern: expected " + std::to_string(n * n) + " characters, got " +
                  std::to_string(s.size()));
  SignPattern p;
  p.n = n;
  p.nu.reserve(s.size());
  for (char c : s) {
    if (c == '+')
      p.nu.push_back(1);
    else if (c == '-')
      p.nu.push_back(-1);
    else
      throw IoError("sign pattern: characters must be '+' or '-'");
  }
  return p;
}

std::optional<SignPattern> sign_of_vector(const QVec& x) {
  SignPattern p;
  int root = 0;
  while ((root + 1) * (root + 1) <= static_cast<int>(x.size())) ++root;
  p.n = (root * root == static_cast<int>(x.size())) ? root : 0;
  p.nu.reserve(x.size());
  for (const auto& c : x) {
    const int s = sgn(c);
    if (s == 0) return std::nullopt;
    p.nu.push_back(s);
  }
  return p;
}

std::optional<SignPattern> sign_pattern_of(const AmbientPoint& z) {
  return sign_of_vector(delta_eval(z));
}

QuadraticRelation apply_sign_change(const QuadraticRelation& r, const SignPattern& nu) {
  QuadraticRelation out;
  out.n = r.n;
  out.terms = r.terms;
  for (auto& t : out.terms) {
    int s = 1;
    for (int v : t.vars) s *= nu.nu.at(v);
    if (s < 0) t.c = -t.c;
  }
  return out;
}

bool signed_compatible(const SignPattern& nu, const QVec& w,
                       const std::vector<QuadraticRelation>& relations) {
  for (const auto& r : relations) {
    const auto f = init_form(apply_sign_change(r, nu), w);
    bool pos = false, neg = false;
    for (const auto& t : f.terms) (t.c > 0 ? pos : neg) = true;
    if (!pos || !neg) return false;
  }
  return true;
}

fan::FanGraph signed_trop_subfan(const SignPattern& nu, const fan::FanGraph& f,
                                 const std::vector<QuadraticRelation>& relations) {
  std::vector<int> members;
  for (size_t i = 0; i < f.cones.size(); ++i)
    if (signed_compatible(nu, f.cones[i].interior, relations))
      members.push_back(static_cast<int>(i));
  return fan::subfan_of(f, members);
}

SampleResult sample_sign_patterns(int n, std::uint64_t max_trials, std::uint64_t seed,
                                  int threads) {
  if (n < 1) throw IoError("sample_sign_patterns: n must be positive");
  SampleResult res;
  if (max_trials == 0) return res;
  int workers = threads;
  if (workers <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    workers = hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
  }

  struct Hit {
    std::uint64_t trial;
    std::string key;
    Witness wit;
  };
  constexpr std::uint64_t kChunk = 2048;
  std::uint64_t done = 0;
  std::uint64_t last_new_count = 0;  // trial count at the latest new pattern
  while (done < max_trials) {
    const std::uint64_t hi = std::min(max_trials, done + kChunk);
    // Each trial derives its own generator from (seed, trial), so splitting
    // the chunk into contiguous stripes keeps the result independent of the
    // worker count.
    std::vector<std::vector<Hit>> hits(workers);
    auto work = [&](int wi) {
      const std::uint64_t span = hi - done;
      const std::uint64_t lo = done + span * wi / workers;
      const std::uint64_t up = done + span * (wi + 1) / workers;
      for (std::uint64_t t = lo; t < up; ++t) {
        rng::SplitMix64 g(rng::mix(seed, t));
        AmbientPoint z = random_ambient_point(n, g);
        const int eps = (g.next() & 1u) ? -1 : 1;
        QVec x = delta_eval(z);
        if (eps < 0)
          for (auto& c : x) c = -c;
        auto p = sign_of_vector(x);
        if (!p) continue;  // a vanishing coordinate has no sign
        hits[wi].push_back({t, p->str(), Witness{std::move(z), eps, std::move(x), t}});
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int wi = 0; wi < workers; ++wi) pool.emplace_back(work, wi);
      for (auto& th : pool) th.join();
    }
    for (auto& stripe : hits)
      for (auto& h : stripe)
        if (res.patterns.emplace(std::move(h.key), std::move(h.wit)).second)
          last_new_count = h.trial + 1;
    done = hi;
    // Saturation: nothing new for ten times the trial count at the last
    // discovery, checked at chunk boundaries.
    if (last_new_count > 0 && done >= 11 * last_new_count) {
      res.saturated = true;
      break;
    }
  }
  res.trials_used = done;
  return res;
}

}  // namespace aspt::cluster

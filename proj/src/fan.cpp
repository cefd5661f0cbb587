#include "aspt/fan.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "aspt/linalg.hpp"

namespace aspt::fan {

using polygon::DihedralOrdering;
using polygon::SignedLabel;
using trees::Census;
using trees::SymmetricTree;

const IndexSetD& IndexSetD::get(int n) {
  if (n < 2) throw CapacityError("IndexSetD requires n >= 2");
  static std::mutex mu;
  static std::map<int, IndexSetD> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  IndexSetD d;
  d.n = n;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      d.elements.push_back({SignedLabel{i, false}, SignedLabel{j, false}});
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      d.elements.push_back({SignedLabel{i, false}, SignedLabel{j, true}});
  return cache.emplace(n, std::move(d)).first->second;
}

int IndexSetD::position(SignedLabel a, SignedLabel b) const {
  if (a == b) throw IoError("IndexSetD::position: pair must be distinct");
  if (a.barred && b.barred) {  // {a~,b~} ~ {a,b}
    a.barred = b.barred = false;
  }
  if (a.barred != b.barred) {
    if (a.barred) std::swap(a, b);  // a unbarred, b barred
    if (a.index > b.index) {        // flip the class to order the indices
      std::swap(a.index, b.index);
    }
  } else {
    if (a.index == b.index)
      throw IoError("IndexSetD::position: {i,i} has no representative");
    if (a.index > b.index) std::swap(a, b);
  }
  // part 1: (i,j), i<j, lexicographic; part 2: (i,j~), i<=j
  if (!b.barred) {
    int i = a.index, j = b.index, row = i - 1;
    return row * n - row * (row + 1) / 2 + (j - i - 1);
  }
  int i = a.index, j = b.index, row = i - 1;
  int part1 = n * (n - 1) / 2;
  return part1 + row * n - row * (row - 1) / 2 + (j - i);
}

bool is_admissible(const SymmetricTree& t, const Weighting& l) {
  if (l.size() != t.orbits.size()) return false;
  for (size_t o = 0; o < t.orbits.size(); ++o)
    if (!t.orbits[o].leaf && l[o] <= 0) return false;
  return true;
}

QVec distance_vector(const SymmetricTree& t, const Weighting& l) {
  if (l.size() != t.orbits.size())
    throw IoError("distance_vector: weighting size mismatch");
  const int n = t.tree.n;
  const IndexSetD& D = IndexSetD::get(n);
  const int V = static_cast<int>(t.tree.adj.size());
  std::map<std::pair<int, int>, const Rational*> weight_of;
  for (size_t o = 0; o < t.orbits.size(); ++o)
    for (auto e : t.orbits[o].edges) weight_of[e] = &l[o];

  // one BFS parent tree per source leaf, then walk up from the target
  QVec out(D.size());
  std::vector<int> parent(V);
  for (int p = 0; p < D.size(); ++p) {
    auto [a, b] = D.elements[p];
    int src = t.tree.leaf_of[polygon::ordinal(a, n)];
    int dst = t.tree.leaf_of[polygon::ordinal(b, n)];
    std::fill(parent.begin(), parent.end(), -1);
    parent[src] = src;
    std::vector<int> frontier = {src};
    while (parent[dst] < 0) {
      std::vector<int> next;
      for (int v : frontier)
        for (int w : t.tree.adj[v])
          if (parent[w] < 0) {
            parent[w] = v;
            next.push_back(w);
          }
      frontier = std::move(next);
    }
    Rational sum = 0;
    for (int v = dst; v != src; v = parent[v]) {
      int u = parent[v];
      sum += *weight_of.at({std::min(u, v), std::max(u, v)});
    }
    out[p] = sum;
  }
  return out;
}

QVec lineality_vector(int n, int label_index) {
  const IndexSetD& D = IndexSetD::get(n);
  QVec v(D.size());
  for (int p = 0; p < D.size(); ++p) {
    auto [a, b] = D.elements[p];
    v[p] = (a.index == label_index ? 1 : 0) + (b.index == label_index ? 1 : 0);
  }
  return v;
}

namespace {

// Precomputes the exact solving/consistency operators of the cone's matrix
// A = [lineality | rays] (full column rank k): rref([A | I]) yields k rows
// [I_k | E] with E A = I_k and |D|-k rows [0 | N] with N A = 0.
void attach_solver(ConeRecord& c) {
  const int rows = static_cast<int>(c.interior.size());
  const int k = c.dim;
  QMat aug(rows, QVec(k + rows, Rational(0)));
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < static_cast<int>(c.lineality_basis.size()); ++j)
      aug[r][j] = c.lineality_basis[j][r];
    for (int j = 0; j < static_cast<int>(c.rays.size()); ++j)
      aug[r][c.lineality_basis.size() + j] = c.rays[j][r];
    aug[r][k + r] = 1;
  }
  auto pivots = linalg::rref(aug);
  int lead = 0;
  while (lead < static_cast<int>(pivots.size()) && pivots[lead] < k) ++lead;
  if (lead != k)
    throw IntegrityError("cone_of: [lineality | rays] is rank deficient");
  c.solve_op.assign(k, QVec(rows));
  for (int r = 0; r < k; ++r)
    for (int j = 0; j < rows; ++j) c.solve_op[r][j] = aug[r][k + j];
  c.null_op.assign(rows - k, QVec(rows));
  for (int r = k; r < rows; ++r)
    for (int j = 0; j < rows; ++j) c.null_op[r - k][j] = aug[r][k + j];
}

QVec apply(const QMat& m, const QVec& v) {
  QVec out(m.size(), Rational(0));
  for (size_t r = 0; r < m.size(); ++r)
    for (size_t j = 0; j < v.size(); ++j)
      if (m[r][j] != 0 && v[j] != 0) out[r] += m[r][j] * v[j];
  return out;
}

std::string ray_key(const QVec& v) {
  std::string s;
  for (const auto& x : v) {
    s += x.get_str();
    s += ',';
  }
  return s;
}

}  // namespace

ConeRecord cone_of(const SymmetricTree& t) {
  const int n = t.tree.n;
  ConeRecord c;
  c.tree_code = t.code;
  c.dim = t.k();
  for (int i = 1; i <= n; ++i) c.lineality_basis.push_back(lineality_vector(n, i));
  Weighting unit(t.orbits.size(), Rational(0));
  c.interior.assign(IndexSetD::get(n).size(), Rational(0));
  for (int o : t.internal_orbits()) {
    unit[o] = 1;
    QVec ray = distance_vector(t, unit);
    unit[o] = 0;
    c.interior = add(c.interior, ray);
    c.rays.push_back(std::move(ray));
    c.ray_orbit.push_back(o);
  }
  attach_solver(c);  // verifies rank = k
  return c;
}

int FanGraph::cone_index(const std::string& tree_code) const {
  for (size_t i = 0; i < cones.size(); ++i)
    if (cones[i].tree_code == tree_code) return static_cast<int>(i);
  return -1;
}

const FanGraph& build_fan(int n) {
  if (n < 3 || n > 5) throw CapacityError("build_fan supports 3 <= n <= 5");
  static std::mutex mu;
  static std::map<int, FanGraph> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  FanGraph f;
  f.n = n;
  f.D = &IndexSetD::get(n);
  f.census = &trees::aspt_census(n);
  for (int i = 1; i <= n; ++i) f.lineality.push_back(lineality_vector(n, i));
  const auto& cspt = trees::cspt_codes(n);
  f.cones.reserve(f.census->trees.size());
  for (size_t i = 0; i < f.census->trees.size(); ++i) {
    ConeRecord c = cone_of(f.census->trees[i]);
    c.census_index = static_cast<int>(i);
    c.thick = cspt.count(c.tree_code) > 0;
    f.cones.push_back(std::move(c));
  }
  const bool verify = n <= 4;
  for (size_t i = 0; i < f.census->trees.size(); ++i) {
    const SymmetricTree& t = f.census->trees[i];
    for (int o : t.internal_orbits()) {
      trees::PhyloTree contracted = trees::contract_orbit(t, o);
      auto it = f.census->index_of.find(trees::canonical_string(contracted));
      if (it == f.census->index_of.end())
        throw IntegrityError("build_fan: facet tree missing from census");
      FacetEdge e{static_cast<int>(i), it->second, o};
      if (verify) {
        // exact closure inclusion: the facet's rays are the parent's rays
        // with the contracted orbit's ray removed
        std::multiset<std::string> pr, fr;
        const ConeRecord& pc = f.cones[i];
        for (size_t r = 0; r < pc.rays.size(); ++r)
          if (pc.ray_orbit[r] != o) pr.insert(ray_key(pc.rays[r]));
        for (const auto& r : f.cones[it->second].rays) fr.insert(ray_key(r));
        if (pr != fr)
          throw IntegrityError("build_fan: facet rays do not match parent");
      }
      f.facets.push_back(e);
    }
  }
  return cache.emplace(n, std::move(f)).first->second;
}

std::optional<MemberResult> member_reconstruct(const QVec& w, const FanGraph& fan) {
  if (static_cast<int>(w.size()) != fan.D->size())
    throw IoError("member_reconstruct: wrong coordinate count");
  std::optional<MemberResult> interior_hit;
  std::optional<MemberResult> boundary_hit;  // defensive; a fan never needs it
  for (const ConeRecord& c : fan.cones) {
    if (!is_zero(apply(c.null_op, w))) continue;  // w outside the span
    QVec x = apply(c.solve_op, w);
    QVec lin(x.begin(), x.begin() + fan.n);
    QVec internal(x.begin() + fan.n, x.end());
    bool nonneg = true, strict = true;
    for (const auto& v : internal) {
      if (v < 0) nonneg = false;
      if (v <= 0) strict = false;
    }
    if (!nonneg) continue;
    MemberResult r;
    r.cone = c.census_index;
    r.lineality_coeffs = std::move(lin);
    r.internal_weights = std::move(internal);
    if (strict || c.rays.empty()) {
      r.kind = MemberKind::Interior;
      if (interior_hit)
        throw IntegrityError(
            "member_reconstruct: two cones claim the same interior point");
      interior_hit = std::move(r);
    } else if (!boundary_hit) {
      r.kind = MemberKind::Boundary;
      boundary_hit = std::move(r);
    }
  }
  if (interior_hit) return interior_hit;
  if (boundary_hit) {
    // report against the facet tree obtained by contracting the zero orbits
    // (kept as a fallback; with a complete fan the interior owner is found)
    return boundary_hit;
  }
  return std::nullopt;
}

FanGraph subfan_of(const FanGraph& fan, const std::vector<int>& members) {
  std::set<int> keep(members.begin(), members.end());
  FanGraph sub;
  sub.n = fan.n;
  sub.D = fan.D;
  sub.lineality = fan.lineality;
  sub.census = fan.census;
  std::map<int, int> newpos;
  for (int idx : keep) {
    if (idx < 0 || idx >= static_cast<int>(fan.cones.size()))
      throw IoError("subfan_of: cone index out of range");
    newpos[idx] = static_cast<int>(sub.cones.size());
    sub.cones.push_back(fan.cones[idx]);
  }
  for (const auto& e : fan.facets)
    if (keep.count(e.cone) && keep.count(e.facet))
      sub.facets.push_back({newpos[e.cone], newpos[e.facet], e.orbit});
  return sub;
}

FanGraph subfan_for_ordering(const DihedralOrdering& o, const FanGraph& fan) {
  if (o.n != fan.n) throw IoError("subfan_for_ordering: mismatched n");
  auto cls = polygon::classify(o);
  if (!cls.asdo && !cls.csdo)
    throw IoError("subfan_for_ordering: ordering is neither an ASDO nor a CSDO");
  polygon::SymmetryMode mode =
      cls.asdo ? polygon::SymmetryMode::Axial : polygon::SymmetryMode::Central;
  polygon::Labeling rep = polygon::representative_labeling(o);
  std::set<int> members;
  for (const auto& th : polygon::enumerate_subdivisions(fan.n, mode)) {
    auto code = trees::canonical_string(trees::dual_tree(th, rep));
    auto it = fan.census->index_of.find(code);
    if (it == fan.census->index_of.end())
      throw IntegrityError("subfan_for_ordering: tree missing from census");
    members.insert(it->second);
  }
  return subfan_of(fan, std::vector<int>(members.begin(), members.end()));
}

namespace {

struct Poset {
  int size = 0;
  std::vector<std::vector<char>> leq;  // leq[x][y] = (x <= y)
  std::vector<int> height;             // longest chain below, order-intrinsic
};

void compute_heights(Poset& p) {
  p.height.assign(p.size, 0);
  bool grew = true;  // relaxation; posets here are tiny
  while (grew) {
    grew = false;
    for (int x = 0; x < p.size; ++x)
      for (int y = 0; y < p.size; ++y)
        if (x != y && p.leq[y][x] && p.height[y] + 1 > p.height[x]) {
          p.height[x] = p.height[y] + 1;
          grew = true;
        }
  }
}

Poset poset_of_fan(const FanGraph& f) {
  Poset p;
  p.size = static_cast<int>(f.cones.size());
  std::vector<std::set<std::string>> rays(p.size);
  for (int i = 0; i < p.size; ++i)
    for (const auto& r : f.cones[i].rays) rays[i].insert(ray_key(r));
  p.leq.assign(p.size, std::vector<char>(p.size, 0));
  for (int x = 0; x < p.size; ++x)
    for (int y = 0; y < p.size; ++y)
      p.leq[x][y] = std::includes(rays[y].begin(), rays[y].end(),
                                  rays[x].begin(), rays[x].end());
  compute_heights(p);
  return p;
}

Poset poset_of_subdivisions(const std::vector<polygon::Subdivision>& subs) {
  Poset p;
  p.size = static_cast<int>(subs.size());
  p.leq.assign(p.size, std::vector<char>(p.size, 0));
  for (int x = 0; x < p.size; ++x)
    for (int y = 0; y < p.size; ++y)
      p.leq[x][y] = polygon::refines(subs[x], subs[y]);
  compute_heights(p);
  return p;
}

bool poset_isomorphic(const Poset& a, const Poset& b) {
  if (a.size != b.size) return false;
  // signature: (height, per-height counts of comparable elements); heights
  // are order-intrinsic, so they must be preserved by any isomorphism
  int maxh = 0;
  for (int h : a.height) maxh = std::max(maxh, h);
  for (int h : b.height) maxh = std::max(maxh, h);
  auto signature = [&](const Poset& p, int x) {
    std::vector<int> s = {p.height[x]};
    std::vector<int> below(maxh + 1, 0), above(maxh + 1, 0);
    for (int y = 0; y < p.size; ++y) {
      if (y == x) continue;
      if (p.leq[y][x]) ++below[p.height[y]];
      if (p.leq[x][y]) ++above[p.height[y]];
    }
    s.insert(s.end(), below.begin(), below.end());
    s.insert(s.end(), above.begin(), above.end());
    return s;
  };
  std::vector<std::vector<int>> siga(a.size), sigb(b.size);
  {
    std::multiset<std::vector<int>> ma, mb;
    for (int x = 0; x < a.size; ++x) ma.insert(siga[x] = signature(a, x));
    for (int x = 0; x < b.size; ++x) mb.insert(sigb[x] = signature(b, x));
    if (ma != mb) return false;
  }
  // assign low elements first so contradictions surface early
  std::vector<int> order(a.size);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (a.height[x] != a.height[y]) return a.height[x] < a.height[y];
    return siga[x] < siga[y];
  });
  std::vector<int> image(a.size, -1);
  std::vector<char> used(b.size, 0);
  auto rec = [&](auto&& self, size_t i) -> bool {
    if (i == order.size()) return true;
    int x = order[i];
    for (int y = 0; y < b.size; ++y) {
      if (used[y] || sigb[y] != siga[x]) continue;
      bool ok = true;
      for (size_t j = 0; j < i && ok; ++j) {
        int x2 = order[j], y2 = image[x2];
        if (a.leq[x][x2] != b.leq[y][y2] || a.leq[x2][x] != b.leq[y2][y])
          ok = false;
      }
      if (!ok) continue;
      image[x] = y;
      used[y] = 1;
      if (self(self, i + 1)) return true;
      image[x] = -1;
      used[y] = 0;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

bool face_poset_isomorphic(const FanGraph& a, ReferenceLattice b) {
  Poset pa = poset_of_fan(a);
  std::vector<polygon::Subdivision> subs;
  if (b == ReferenceLattice::Associahedron)
    subs = polygon::enumerate_polygon_subdivisions(a.n + 2);
  else
    subs = polygon::enumerate_subdivisions(a.n, polygon::SymmetryMode::Central);
  Poset pb = poset_of_subdivisions(subs);
  return poset_isomorphic(pa, pb);
}

}  // namespace aspt::fan

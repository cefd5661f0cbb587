#include "aspt/trees.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <queue>
#include <utility>

namespace aspt::trees {

using polygon::Diagonal;
using polygon::DihedralOrdering;
using polygon::Labeling;
using polygon::Subdivision;

bool is_valid(const PhyloTree& t) {
  const int V = static_cast<int>(t.adj.size());
  if (t.n < 1 || static_cast<int>(t.leaf_of.size()) != 2 * t.n || V == 0)
    return false;
  int degree_sum = 0;
  for (const auto& a : t.adj) degree_sum += static_cast<int>(a.size());
  if (degree_sum != 2 * (V - 1)) return false;  // tree edge count
  std::vector<char> seen(V, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : t.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++visited;
        stack.push_back(w);
      }
  }
  if (visited != V) return false;
  std::vector<char> is_leaf(V, 0);
  for (int v : t.leaf_of) {
    if (v < 0 || v >= V || is_leaf[v]) return false;
    is_leaf[v] = 1;
  }
  for (int v = 0; v < V; ++v) {
    const auto& nb = t.adj[v];
    if (is_leaf[v] ? nb.size() != 1 : nb.size() < 3) return false;
    for (size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] < 0 || nb[i] >= V || nb[i] == v) return false;
      if (i > 0 && nb[i] <= nb[i - 1]) return false;
    }
  }
  return true;
}

PhyloTree dual_tree(const Subdivision& theta, const Labeling& phi) {
  const int m = theta.m;
  if (!polygon::is_valid(theta) || !polygon::is_valid(phi) || m != 2 * phi.n)
    throw IoError("dual_tree: inconsistent subdivision/labeling pair");

  // Cells by recursive splitting along diagonals; a diagonal never crosses
  // another, so each remaining one falls entirely on one side.
  std::vector<std::vector<int>> cells;
  auto split = [&](auto&& self, std::vector<int> vs,
                   std::vector<Diagonal> ds) -> void {
    if (ds.empty()) {
      cells.push_back(std::move(vs));
      return;
    }
    Diagonal d = ds.back();
    ds.pop_back();
    std::vector<int> in, out;
    for (int v : vs) {
      if (v >= d.v1 && v <= d.v2) in.push_back(v);
      if (v <= d.v1 || v >= d.v2) out.push_back(v);
    }
    std::vector<Diagonal> din, dout;
    for (const auto& e : ds)
      (e.v1 >= d.v1 && e.v2 <= d.v2 ? din : dout).push_back(e);
    self(self, std::move(in), std::move(din));
    self(self, std::move(out), std::move(dout));
  };
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  split(split, std::move(all), theta.diagonals);

  auto cells_with = [&](int a, int b) {
    std::vector<int> r;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
      if (std::binary_search(cells[c].begin(), cells[c].end(), a) &&
          std::binary_search(cells[c].begin(), cells[c].end(), b))
        r.push_back(c);
    return r;
  };

  const int C = static_cast<int>(cells.size());
  PhyloTree t;
  t.n = phi.n;
  t.adj.assign(C + m, {});
  for (const auto& d : theta.diagonals) {
    auto cc = cells_with(d.v1, d.v2);
    if (cc.size() != 2)
      throw IntegrityError("dual_tree: diagonal does not bound two cells");
    t.adj[cc[0]].push_back(cc[1]);
    t.adj[cc[1]].push_back(cc[0]);
  }
  t.leaf_of.assign(m, -1);
  for (int a = 0; a < m; ++a) {
    int s = phi.side_of[a];
    auto cc = cells_with(s, (s + 1) % m);
    if (cc.size() != 1)
      throw IntegrityError("dual_tree: side does not bound one cell");
    int leaf = C + a;
    t.adj[cc[0]].push_back(leaf);
    t.adj[leaf].push_back(cc[0]);
    t.leaf_of[a] = leaf;
  }
  for (auto& nb : t.adj) std::sort(nb.begin(), nb.end());
  return t;
}

std::string canonical_string(const PhyloTree& t) {
  const int V = static_cast<int>(t.adj.size());
  std::vector<int> label(V, -1);
  for (int a = 0; a < 2 * t.n; ++a) label[t.leaf_of[a]] = a;

  // Subtree sizes under an arbitrary root, to locate the centroid(s).
  std::vector<int> size(V, 1), parent(V, -1), order;
  order.reserve(V);
  {
    std::vector<int> stack = {0};
    std::vector<char> seen(V, 0);
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (int w : t.adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = v;
          stack.push_back(w);
        }
    }
    for (int i = V - 1; i > 0; --i) size[parent[order[i]]] += size[order[i]];
  }
  int best = V + 1;
  std::vector<int> centroids;
  for (int v = 0; v < V; ++v) {
    int worst = V - size[v];
    for (int w : t.adj[v])
      if (parent[w] == v) worst = std::max(worst, size[w]);
    if (worst < best) {
      best = worst;
      centroids = {v};
    } else if (worst == best) {
      centroids.push_back(v);
    }
  }

  auto enc = [&](auto&& self, int v, int from) -> std::string {
    if (label[v] >= 0) return "L" + polygon::label_at(label[v], t.n).str();
    std::vector<std::string> kids;
    for (int w : t.adj[v])
      if (w != from) kids.push_back(self(self, w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    s += ")";
    return s;
  };

  if (centroids.size() == 1) return "R" + enc(enc, centroids[0], -1);
  if (centroids.size() != 2)
    throw IntegrityError("canonical_string: impossible centroid count");
  std::string s1 = enc(enc, centroids[0], centroids[1]);
  std::string s2 = enc(enc, centroids[1], centroids[0]);
  if (s2 < s1) std::swap(s1, s2);
  return "E" + s1 + "|" + s2;
}

std::string hex_code(const std::string& canonical) {
  static const char* hex = "0123456789abcdef";
  std::string h;
  h.reserve(2 * canonical.size());
  for (unsigned char c : canonical) {
    h += hex[c >> 4];
    h += hex[c & 15];
  }
  return h;
}

std::string canonical_code(const PhyloTree& t) { return hex_code(canonical_string(t)); }

std::optional<std::vector<int>> find_symmetry(const PhyloTree& t) {
  const int V = static_cast<int>(t.adj.size());
  const int L = 2 * t.n;
  // Distances from every leaf; an internal vertex is pinned by its profile
  // of leaf distances, so at most one candidate image exists.
  std::vector<std::vector<int>> dist(L, std::vector<int>(V, -1));
  for (int a = 0; a < L; ++a) {
    std::queue<int> q;
    q.push(t.leaf_of[a]);
    dist[a][t.leaf_of[a]] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : t.adj[v])
        if (dist[a][w] < 0) {
          dist[a][w] = dist[a][v] + 1;
          q.push(w);
        }
    }
  }
  std::vector<int> label(V, -1);
  for (int a = 0; a < L; ++a) label[t.leaf_of[a]] = a;
  std::map<std::vector<int>, int> where;
  for (int v = 0; v < V; ++v) {
    if (label[v] >= 0) continue;
    std::vector<int> p(L);
    for (int a = 0; a < L; ++a) p[a] = dist[a][v];
    if (!where.emplace(std::move(p), v).second) return std::nullopt;
  }
  std::vector<int> sigma(V, -1);
  for (int a = 0; a < L; ++a)
    sigma[t.leaf_of[a]] = t.leaf_of[polygon::bar_ordinal(a, t.n)];
  for (int v = 0; v < V; ++v) {
    if (label[v] >= 0) continue;
    std::vector<int> p(L);
    for (int a = 0; a < L; ++a) p[polygon::bar_ordinal(a, t.n)] = dist[a][v];
    auto it = where.find(p);
    if (it == where.end()) return std::nullopt;
    sigma[v] = it->second;
  }
  for (int v = 0; v < V; ++v)
    if (sigma[sigma[v]] != v) return std::nullopt;
  for (int v = 0; v < V; ++v)
    for (int w : t.adj[v])
      if (!std::binary_search(t.adj[sigma[v]].begin(), t.adj[sigma[v]].end(),
                              sigma[w]))
        return std::nullopt;
  return sigma;
}

std::vector<int> SymmetricTree::internal_orbits() const {
  std::vector<int> r;
  for (int i = 0; i < static_cast<int>(orbits.size()); ++i)
    if (!orbits[i].leaf) r.push_back(i);
  return r;
}

SymmetricTree make_symmetric(PhyloTree t) {
  if (!is_valid(t)) throw IntegrityError("make_symmetric: invalid tree");
  auto sig = find_symmetry(t);
  if (!sig) throw IntegrityError("make_symmetric: no label-swap symmetry");
  SymmetricTree out;
  out.sigma = *sig;
  const int V = static_cast<int>(t.adj.size());
  std::vector<char> leaf(V, 0);
  for (int v : t.leaf_of) leaf[v] = 1;
  std::set<std::pair<int, int>> taken;
  for (int u = 0; u < V; ++u)
    for (int w : t.adj[u]) {
      if (u > w) continue;
      std::pair<int, int> e{u, w};
      if (taken.count(e)) continue;
      int iu = out.sigma[u], iw = out.sigma[w];
      std::pair<int, int> f{std::min(iu, iw), std::max(iu, iw)};
      EdgeOrbit o;
      o.edges.push_back(e);
      taken.insert(e);
      if (f != e) {
        o.edges.push_back(f);
        taken.insert(f);
      }
      std::sort(o.edges.begin(), o.edges.end());
      o.leaf = leaf[e.first] || leaf[e.second];
      out.orbits.push_back(std::move(o));
    }
  std::sort(out.orbits.begin(), out.orbits.end(),
            [](const EdgeOrbit& a, const EdgeOrbit& b) {
              return a.edges.front() < b.edges.front();
            });
  int leaf_orbits = 0;
  for (const auto& o : out.orbits) leaf_orbits += o.leaf;
  if (leaf_orbits != t.n)
    throw IntegrityError("make_symmetric: unexpected leaf orbit count");
  out.code = canonical_string(t);
  out.tree = std::move(t);
  return out;
}

const Census& aspt_census(int n) {
  if (n < 3 || n > 5)
    throw CapacityError("ASPT census supports 3 <= n <= 5 only");
  static std::mutex mu;
  static std::map<int, Census> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  std::map<std::string, PhyloTree> found;
  for (const auto& th :
       polygon::enumerate_subdivisions(n, polygon::SymmetryMode::Axial))
    for (const auto& phi :
         polygon::enumerate_labelings(n, polygon::SymmetryMode::Axial)) {
      PhyloTree t = dual_tree(th, phi);
      std::string code = canonical_string(t);
      found.emplace(std::move(code), std::move(t));
    }
  Census c;
  c.n = n;
  c.trees.reserve(found.size());
  for (auto& [code, tree] : found) {
    (void)code;
    c.trees.push_back(make_symmetric(std::move(tree)));
  }
  std::stable_sort(c.trees.begin(), c.trees.end(),
                   [](const SymmetricTree& a, const SymmetricTree& b) {
                     if (a.k() != b.k()) return a.k() < b.k();
                     return a.code < b.code;
                   });
  for (int i = 0; i < static_cast<int>(c.trees.size()); ++i)
    c.index_of.emplace(c.trees[i].code, i);
  return cache.emplace(n, std::move(c)).first->second;
}

const std::set<std::string>& cspt_codes(int n) {
  if (n < 3 || n > 5)
    throw CapacityError("CSPT census supports 3 <= n <= 5 only");
  static std::mutex mu;
  static std::map<int, std::set<std::string>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::set<std::string> codes;
  for (const auto& th :
       polygon::enumerate_subdivisions(n, polygon::SymmetryMode::Central))
    for (const auto& phi :
         polygon::enumerate_labelings(n, polygon::SymmetryMode::Central))
      codes.insert(canonical_string(dual_tree(th, phi)));
  return cache.emplace(n, std::move(codes)).first->second;
}

bool is_cspt(const SymmetricTree& t) {
  return cspt_codes(t.tree.n).count(t.code) > 0;
}

PhyloTree contract_orbit(const SymmetricTree& s, int orbit_index) {
  if (orbit_index < 0 || orbit_index >= s.k())
    throw ContractionError("contract_orbit: orbit index out of range");
  const EdgeOrbit& o = s.orbits[orbit_index];
  if (o.leaf)
    throw ContractionError("contract_orbit: leaf orbits are not contractible");
  const PhyloTree& t = s.tree;
  const int V = static_cast<int>(t.adj.size());
  std::vector<int> root(V);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (auto [u, w] : o.edges) root[find(u)] = find(w);
  std::vector<int> newid(V, -1);
  int next = 0;
  for (int v = 0; v < V; ++v)
    if (int r = find(v); newid[r] < 0) newid[r] = next++;

  PhyloTree out;
  out.n = t.n;
  out.adj.assign(next, {});
  std::set<std::pair<int, int>> edges;
  for (int u = 0; u < V; ++u)
    for (int w : t.adj[u]) {
      int a = newid[find(u)], b = newid[find(w)];
      if (a == b) continue;
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  for (auto [a, b] : edges) {
    out.adj[a].push_back(b);
    out.adj[b].push_back(a);
  }
  for (auto& nb : out.adj) std::sort(nb.begin(), nb.end());
  out.leaf_of.resize(2 * t.n);
  for (int a = 0; a < 2 * t.n; ++a) out.leaf_of[a] = newid[find(t.leaf_of[a])];

  const Census& c = aspt_census(t.n);
  if (!c.index_of.count(canonical_string(out)))
    throw IntegrityError("contract_orbit: result is not an enumerated ASPT");
  return out;
}

namespace {

// Canonical strings of all dual trees realizing a given ordering.  Any
// labeling inducing the ordering gives the same set (dihedral motions act on
// subdivisions bijectively), so the canonical word itself is used.
const std::set<std::string>& realization_codes(int n, const DihedralOrdering& o) {
  static std::mutex mu;
  static std::map<std::pair<int, std::string>, std::set<std::string>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, o.str());
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Labeling phi;
  phi.n = n;
  phi.side_of.assign(2 * n, -1);
  for (int s = 0; s < 2 * n; ++s)
    phi.side_of[polygon::ordinal(o.word[s], n)] = s;
  std::set<std::string> codes;
  for (const auto& th :
       polygon::enumerate_subdivisions(n, polygon::SymmetryMode::All))
    codes.insert(canonical_string(dual_tree(th, phi)));
  return cache.emplace(std::move(key), std::move(codes)).first->second;
}

}  // namespace

bool compatible(const PhyloTree& t, const DihedralOrdering& o) {
  if (t.n != o.n) throw IoError("compatible: mismatched n");
  return realization_codes(t.n, o).count(canonical_string(t)) > 0;
}

std::vector<DihedralOrdering> compatible_orderings(const PhyloTree& t,
                                                   polygon::OrderingFilter f) {
  std::vector<DihedralOrdering> out;
  for (const auto& o : polygon::enumerate_orderings(t.n, f))
    if (compatible(t, o)) out.push_back(o);
  return out;
}

std::vector<std::vector<int>> shape_classes(const Census& c) {
  const int n = c.n;
  std::vector<int> cls(c.trees.size(), -1);
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < static_cast<int>(c.trees.size()); ++i) {
    if (cls[i] >= 0) continue;
    int id = static_cast<int>(classes.size());
    classes.emplace_back();
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      for (int mask = 0; mask < (1 << n); ++mask) {
        PhyloTree r = c.trees[i].tree;
        for (int a = 0; a < 2 * n; ++a) {
          polygon::SignedLabel l = polygon::label_at(a, n);
          bool flip = ((mask >> (l.index - 1)) & 1) != 0;
          polygon::SignedLabel img{p[l.index - 1] + 1, l.barred != flip};
          r.leaf_of[polygon::ordinal(img, n)] = c.trees[i].tree.leaf_of[a];
        }
        auto it = c.index_of.find(canonical_string(r));
        if (it == c.index_of.end())
          throw IntegrityError("shape_classes: relabeled tree left the census");
        if (cls[it->second] < 0) {
          cls[it->second] = id;
          classes[id].push_back(it->second);
        } else if (cls[it->second] != id) {
          throw IntegrityError("shape_classes: inconsistent orbit structure");
        }
      }
    } while (std::next_permutation(p.begin(), p.end()));
  }
  for (auto& cl : classes) std::sort(cl.begin(), cl.end());
  return classes;
}

}  // namespace aspt::trees

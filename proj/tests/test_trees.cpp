#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "aspt/trees.hpp"

using namespace aspt;
using namespace aspt::polygon;
using namespace aspt::trees;

namespace {

// Builder for handwritten trees: vertices named by small ints, leaves given
// as (label, vertex).
PhyloTree build(int n, std::vector<std::pair<int, int>> edges,
                std::vector<std::pair<std::string, int>> leaves) {
  int maxv = 0;
  for (auto [u, v] : edges) maxv = std::max({maxv, u, v});
  PhyloTree t;
  t.n = n;
  t.adj.assign(maxv + 1, {});
  for (auto [u, v] : edges) {
    t.adj[u].push_back(v);
    t.adj[v].push_back(u);
  }
  for (auto& a : t.adj) std::sort(a.begin(), a.end());
  t.leaf_of.assign(2 * n, -1);
  for (auto& [s, v] : leaves) t.leaf_of[ordinal(SignedLabel::parse(s), n)] = v;
  return t;
}

// Oracle: count all graph automorphisms sending leaf a to leaf a~, by plain
// backtracking over vertex images -- independent of the library's
// profile-based construction.
int count_bar_swapping_automorphisms(const PhyloTree& t) {
  const int V = static_cast<int>(t.adj.size());
  std::vector<int> image(V, -1), used(V, 0);
  for (int a = 0; a < 2 * t.n; ++a) {
    int from = t.leaf_of[a];
    int to = t.leaf_of[a < t.n ? a + t.n : a - t.n];
    image[from] = to;
    used[to] = 1;
  }
  std::vector<int> free_vs;
  for (int v = 0; v < V; ++v)
    if (image[v] == -1) free_vs.push_back(v);
  int found = 0;
  auto ok_edges = [&]() {
    for (int u = 0; u < V; ++u)
      for (int w : t.adj[u]) {
        auto& nb = t.adj[image[u]];
        if (!std::binary_search(nb.begin(), nb.end(), image[w])) return false;
      }
    return true;
  };
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == free_vs.size()) {
      if (ok_edges()) ++found;
      return;
    }
    int v = free_vs[i];
    for (int w = 0; w < V; ++w) {
      if (used[w] || t.adj[w].size() != t.adj[v].size()) continue;
      image[v] = w;
      used[w] = 1;
      self(self, i + 1);
      image[v] = -1;
      used[w] = 0;
    }
  };
  rec(rec, 0);
  return found;
}

// The seven reference forms on 2n = 6 leaves; {a,b,c} = {1,2,3} below, with
// other label choices exercised through shape classes.
PhyloTree form1() {
  return build(3, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}},
               {{"1", 1}, {"1~", 2}, {"2", 3}, {"2~", 4}, {"3", 5}, {"3~", 6}});
}
PhyloTree form2() {  // p(a,a~) -- q(b,b~,c,c~)
  return build(3, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}, {3, 7}},
               {{"1", 1}, {"1~", 2}, {"2", 4}, {"2~", 5}, {"3", 6}, {"3~", 7}});
}
PhyloTree form3() {  // p(a,b,c) -- q(a~,b~,c~)
  return build(3, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}, {4, 6}, {4, 7}},
               {{"1", 1}, {"2", 2}, {"3", 3}, {"1~", 5}, {"2~", 6}, {"3~", 7}});
}
PhyloTree form4() {  // caterpillar p(a,a~) -- q(b,b~) -- r(c,c~)
  return build(3, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}, {6, 7}, {6, 8}},
               {{"1", 1}, {"1~", 2}, {"2", 4}, {"2~", 5}, {"3", 7}, {"3~", 8}});
}
PhyloTree form5() {  // p(a,a~) -- q(b,c), r(b~,c~)
  return build(3, {{0, 1}, {0, 2}, {0, 3}, {0, 6}, {3, 4}, {3, 5}, {6, 7}, {6, 8}},
               {{"1", 1}, {"1~", 2}, {"2", 4}, {"3", 5}, {"2~", 7}, {"3~", 8}});
}
PhyloTree form6() {  // p(a,a~) -- q -- r(b,c), s(b~,c~)
  return build(3,
               {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 7}, {4, 5}, {4, 6}, {7, 8}, {7, 9}},
               {{"1", 1}, {"1~", 2}, {"2", 5}, {"3", 6}, {"2~", 8}, {"3~", 9}});
}
PhyloTree form7() {  // p(a) -- q(a~), p -- r(b,c), q -- s(b~,c~)
  return build(3,
               {{0, 1}, {0, 2}, {0, 5}, {2, 3}, {2, 4}, {5, 6}, {6, 7}, {6, 8}, {5, 9}},
               {{"1", 1}, {"2", 3}, {"3", 4}, {"1~", 9}, {"2~", 7}, {"3~", 8}});
}

// Reference diagrams on the octagon (n=4): a fan triangulation, an axially
// symmetric non-central one, and a centrally symmetric one realizing the same
// tree as the first.
Subdivision pic1_theta() {
  return Subdivision(8, {Diagonal(0, 2), Diagonal(0, 4), Diagonal(0, 6)});
}
Labeling pic1_phi() {
  // 2,4~,1,3~,3,1~,4,2~ around sides 0..7
  Labeling l{4, std::vector<int>(8, -1)};
  auto set = [&](const char* s, int side) {
    l.side_of[ordinal(SignedLabel::parse(s), 4)] = side;
  };
  set("2", 0); set("4~", 1); set("1", 2); set("3~", 3);
  set("3", 4); set("1~", 5); set("4", 6); set("2~", 7);
  return l;
}
Subdivision pic2_theta() {
  return Subdivision(8, {Diagonal(0, 3), Diagonal(0, 5), Diagonal(3, 5)});
}
Labeling pic2_phi() {
  Labeling l{4, std::vector<int>(8, -1)};
  auto set = [&](const char* s, int side) {
    l.side_of[ordinal(SignedLabel::parse(s), 4)] = side;
  };
  set("1", 0); set("3~", 1); set("2", 2); set("4", 3);
  set("4~", 4); set("2~", 5); set("3", 6); set("1~", 7);
  return l;
}
Subdivision pic3_theta() {
  return Subdivision(8, {Diagonal(1, 5), Diagonal(1, 7), Diagonal(3, 5)});
}
Labeling pic3_phi() {
  Labeling l{4, std::vector<int>(8, -1)};
  auto set = [&](const char* s, int side) {
    l.side_of[ordinal(SignedLabel::parse(s), 4)] = side;
  };
  set("4", 0); set("1", 1); set("3~", 2); set("2", 3);
  set("4~", 4); set("1~", 5); set("3", 6); set("2~", 7);
  return l;
}

std::vector<int> leafset_of(const PhyloTree& t, int v) {
  std::vector<int> out;
  for (int a = 0; a < 2 * t.n; ++a)
    if (std::binary_search(t.adj[v].begin(), t.adj[v].end(), t.leaf_of[a]))
      out.push_back(a);
  return out;
}

}  // namespace

TEST_CASE("dual tree of the empty subdivision is the star") {
  for (int n : {3, 4}) {
    Subdivision empty(2 * n, {});
    Labeling phi = enumerate_labelings(n, SymmetryMode::Axial).front();
    PhyloTree t = dual_tree(empty, phi);
    CHECK(is_valid(t));
    CHECK_EQ(t.adj.size(), 2 * n + 1);
    CHECK_EQ(t.adj[0].size(), 2 * n);  // the single cell
  }
  // the star's code must not depend on the labeling used to produce it
  Subdivision empty(6, {});
  std::set<std::string> codes;
  for (const auto& phi : enumerate_labelings(3, SymmetryMode::All))
    codes.insert(canonical_string(dual_tree(empty, phi)));
  CHECK_EQ(codes.size(), 1);
}

TEST_CASE("reference diagrams: dual trees, codes, symmetry, CSPT flags") {
  PhyloTree t1 = dual_tree(pic1_theta(), pic1_phi());
  PhyloTree t2 = dual_tree(pic2_theta(), pic2_phi());
  PhyloTree t3 = dual_tree(pic3_theta(), pic3_phi());
  REQUIRE(is_valid(t1));
  REQUIRE(is_valid(t2));
  REQUIRE(is_valid(t3));

  SUBCASE("first diagram gives the printed caterpillar") {
    // cells along the fan: {2,4~} {1,3~} {3,1~} {4,2~}, internal path of 4
    std::vector<std::vector<int>> want = {
        {ordinal({2, false}, 4), ordinal({4, true}, 4)},
        {ordinal({1, false}, 4), ordinal({3, true}, 4)},
        {ordinal({3, false}, 4), ordinal({1, true}, 4)},
        {ordinal({4, false}, 4), ordinal({2, true}, 4)}};
    // locate internal vertices by their leaf sets
    int found = 0;
    for (size_t v = 0; v < t1.adj.size(); ++v) {
      auto ls = leafset_of(t1, v);
      if (ls.size() == 2 && std::find(want.begin(), want.end(), ls) != want.end())
        ++found;
    }
    CHECK_EQ(found, 4);
  }

  SUBCASE("first and third diagrams yield the same tree, second differs") {
    CHECK_EQ(canonical_string(t1), canonical_string(t3));
    CHECK_NE(canonical_string(t1), canonical_string(t2));
    CHECK_EQ(canonical_code(t1), canonical_code(t3));
    for (char c : canonical_code(t1))
      CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  }

  SUBCASE("symmetries exist and the label-switched tree has none") {
    CHECK(find_symmetry(t1).has_value());
    CHECK(find_symmetry(t2).has_value());
    CHECK(find_symmetry(t3).has_value());
    // switching labels 1 and 4 destroys the symmetry
    PhyloTree broken = t1;
    std::swap(broken.leaf_of[ordinal({1, false}, 4)],
              broken.leaf_of[ordinal({4, false}, 4)]);
    CHECK_FALSE(find_symmetry(broken).has_value());
    CHECK_EQ(count_bar_swapping_automorphisms(broken), 0);
  }

  SUBCASE("central realizability") {
    CHECK(is_cspt(make_symmetric(t3)));
    CHECK_FALSE(is_cspt(make_symmetric(t2)));
    CHECK(is_cspt(make_symmetric(t1)));  // same tree as the third diagram
  }
}

TEST_CASE("canonical encoding is invariant under vertex renumbering") {
  PhyloTree t = form6();
  std::string base = canonical_string(t);
  // renumber vertices by a fixed derangement-ish permutation
  const int V = static_cast<int>(t.adj.size());
  for (int shift = 1; shift < V; ++shift) {
    std::vector<int> perm(V);
    for (int i = 0; i < V; ++i) perm[i] = (i + shift) % V;
    PhyloTree r;
    r.n = t.n;
    r.adj.assign(V, {});
    for (int u = 0; u < V; ++u)
      for (int w : t.adj[u])
        if (u < w) {
          r.adj[perm[u]].push_back(perm[w]);
          r.adj[perm[w]].push_back(perm[u]);
        }
    for (auto& a : r.adj) std::sort(a.begin(), a.end());
    r.leaf_of.resize(2 * t.n);
    for (int a = 0; a < 2 * t.n; ++a) r.leaf_of[a] = perm[t.leaf_of[a]];
    CHECK_EQ(canonical_string(r), base);
  }
  // the seven forms are pairwise distinct
  std::set<std::string> codes;
  for (auto* f : {form1, form2, form3, form4, form5, form6, form7})
    codes.insert(canonical_string(f()));
  CHECK_EQ(codes.size(), 7);
}

TEST_CASE("census n=3: counts, dims, symmetry uniqueness, forms present") {
  const Census& c = aspt_census(3);
  CHECK_EQ(c.trees.size(), 35);
  std::map<int, int> by_k;
  for (const auto& t : c.trees) ++by_k[t.k()];
  CHECK_EQ(by_k, std::map<int, int>{{3, 1}, {4, 13}, {5, 21}});
  for (const auto& t : c.trees) {
    CHECK(is_valid(t.tree));
    // exactly n leaf orbits
    int leaf_orbits = 0;
    for (const auto& o : t.orbits) leaf_orbits += o.leaf;
    CHECK_EQ(leaf_orbits, 3);
    // independent oracle: sigma exists and is the unique bar-swapping
    // automorphism
    CHECK_EQ(count_bar_swapping_automorphisms(t.tree), 1);
  }
  for (auto* f : {form1, form2, form3, form4, form5, form6, form7})
    CHECK(c.index_of.count(canonical_string(f())));
}

TEST_CASE("census n=4 and n=5 sizes; capacity guard") {
  const Census& c4 = aspt_census(4);
  CHECK_EQ(c4.trees.size(), 482);
  std::map<int, int> by_k;
  for (const auto& t : c4.trees) ++by_k[t.k()];
  CHECK_EQ(by_k, std::map<int, int>{{4, 1}, {5, 43}, {6, 210}, {7, 228}});
  CHECK_THROWS_AS(aspt_census(6), CapacityError);
}

TEST_CASE("sigma uniqueness oracle over the full n=4 census") {
  for (const auto& t : aspt_census(4).trees)
    CHECK_EQ(count_bar_swapping_automorphisms(t.tree), 1);
}

TEST_CASE("CSPT censuses and containment") {
  CHECK_EQ(cspt_codes(3).size(), 23);
  CHECK_EQ(cspt_codes(4).size(), 297);
  for (int n : {3, 4}) {
    const Census& c = aspt_census(n);
    for (const auto& code : cspt_codes(n)) CHECK(c.index_of.count(code));
    // dim census of the CSPT subclass at n=3: {3:1, 4:10, 5:12}
    if (n == 3) {
      std::map<int, int> by_k;
      for (const auto& code : cspt_codes(3)) ++by_k[c.trees[c.index_of.at(code)].k()];
      CHECK_EQ(by_k, std::map<int, int>{{3, 1}, {4, 10}, {5, 12}});
    }
  }
}

TEST_CASE("shape classes at n=3 are the seven forms with the right sizes") {
  const Census& c = aspt_census(3);
  auto classes = shape_classes(c);
  CHECK_EQ(classes.size(), 7);
  std::map<std::string, int> class_of;  // code -> class id
  for (size_t i = 0; i < classes.size(); ++i)
    for (int idx : classes[i]) class_of[c.trees[idx].code] = static_cast<int>(i);
  auto size_of_form = [&](PhyloTree f) {
    return classes[class_of.at(canonical_string(f))].size();
  };
  CHECK_EQ(size_of_form(form1()), 1);
  CHECK_EQ(size_of_form(form2()), 3);
  CHECK_EQ(size_of_form(form3()), 4);
  CHECK_EQ(size_of_form(form4()), 3);
  CHECK_EQ(size_of_form(form5()), 6);
  CHECK_EQ(size_of_form(form6()), 6);
  CHECK_EQ(size_of_form(form7()), 12);
  CHECK_EQ(shape_classes(aspt_census(4)).size(), 22);
}

TEST_CASE("contraction rules") {
  const Census& c = aspt_census(3);

  SUBCASE("form 4 caterpillar: contracting the (p,q) orbit gives form 2") {
    SymmetricTree t = make_symmetric(form4());
    CHECK_EQ(t.k(), 5);
    auto internals = t.internal_orbits();
    REQUIRE_EQ(internals.size(), 2);
    std::set<std::string> results;
    for (int o : internals) results.insert(canonical_string(contract_orbit(t, o)));
    // contracting (p,q) merges the (1,1~) pair into the middle; contracting
    // (q,r) merges (3,3~); both give form-2 trees with different labels
    SymmetricTree f2a = make_symmetric(build(
        3, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}, {3, 7}},
        {{"3", 1}, {"3~", 2}, {"1", 4}, {"1~", 5}, {"2", 6}, {"2~", 7}}));
    CHECK(results.count(f2a.code));
    for (const auto& r : results) CHECK(c.index_of.count(r));
  }

  SUBCASE("form 3: single internal orbit contracts to the star") {
    SymmetricTree t = make_symmetric(form3());
    auto internals = t.internal_orbits();
    REQUIRE_EQ(internals.size(), 1);
    CHECK_EQ(canonical_string(contract_orbit(t, internals[0])),
             canonical_string(form1()));
  }

  SUBCASE("contracting all internal orbits of any ASPT yields the star") {
    std::string star = canonical_string(form1());
    for (const auto& t : c.trees) {
      SymmetricTree cur = t;
      while (!cur.internal_orbits().empty())
        cur = make_symmetric(contract_orbit(cur, cur.internal_orbits()[0]));
      CHECK_EQ(cur.code, star);
    }
  }

  SUBCASE("leaf orbits refuse to contract") {
    SymmetricTree t = make_symmetric(form3());
    int leaf_orbit = -1;
    for (int i = 0; i < t.k(); ++i)
      if (t.orbits[i].leaf) leaf_orbit = i;
    CHECK_THROWS_AS(contract_orbit(t, leaf_orbit), ContractionError);
  }

  SUBCASE("facet surjectivity: every non-maximal ASPT is a contraction") {
    for (int n : {3, 4}) {
      const Census& cen = aspt_census(n);
      std::set<std::string> hit;
      for (const auto& t : cen.trees)
        for (int o : t.internal_orbits())
          hit.insert(canonical_string(contract_orbit(t, o)));
      for (const auto& t : cen.trees)
        if (t.k() < 2 * n - 1) CHECK(hit.count(t.code));
    }
  }
}

TEST_CASE("dual_tree is invariant under dihedral motions of the diagram") {
  int n = 3, m = 6;
  auto subs = enumerate_subdivisions(n, SymmetryMode::Axial);
  auto labs = enumerate_labelings(n, SymmetryMode::Axial);
  for (size_t pick : {0u, 3u, 7u}) {
    const Subdivision& th = subs[pick % subs.size()];
    const Labeling& phi = labs[(3 * pick) % labs.size()];
    std::string base = canonical_string(dual_tree(th, phi));
    for (int r = 0; r < m; ++r) {
      for (bool reflect : {false, true}) {
        auto move_v = [&](int v) {
          if (reflect) v = mirror_vertex(v, m);
          return (v + r) % m;
        };
        auto move_s = [&](int s) {
          if (reflect) s = mirror_side(s, m);
          return (s + r) % m;
        };
        std::vector<Diagonal> ds;
        for (const auto& d : th.diagonals) ds.emplace_back(move_v(d.v1), move_v(d.v2));
        Subdivision th2(m, ds);
        Labeling phi2{n, phi.side_of};
        for (int a = 0; a < m; ++a) phi2.side_of[a] = move_s(phi.side_of[a]);
        CHECK_EQ(canonical_string(dual_tree(th2, phi2)), base);
      }
    }
  }
}

TEST_CASE("compatibility with dihedral orderings") {
  SUBCASE("star is compatible with every ordering") {
    PhyloTree star = form1();
    auto all = compatible_orderings(star, OrderingFilter::All);
    CHECK_EQ(all.size(), 60);
  }

  SUBCASE("ASDO counts of the maximal shapes; double counting") {
    // Per maximal shape (brute-forced independently over all 720 labelings x
    // 45 subdivisions): caterpillars 4 each, form-6 trees 4 each, form-7
    // trees 2 each; 3*4 + 6*4 + 12*2 = 60 = 12 ASDOs x 5 maximal cones.
    const Census& c = aspt_census(3);
    auto count_for_class = [&](PhyloTree rep, size_t expect_size, size_t expect_asdos) {
      std::string code = canonical_string(rep);
      auto classes = shape_classes(c);
      for (const auto& cls : classes) {
        if (std::find_if(cls.begin(), cls.end(), [&](int i) {
              return c.trees[i].code == code;
            }) == cls.end())
          continue;
        CHECK_EQ(cls.size(), expect_size);
        for (int idx : cls)
          CHECK_EQ(compatible_orderings(c.trees[idx].tree, OrderingFilter::Asdo)
                       .size(),
                   expect_asdos);
      }
    };
    count_for_class(form4(), 3, 4);
    count_for_class(form6(), 6, 4);
    count_for_class(form7(), 12, 2);
    int total = 0;
    for (const auto& t : c.trees)
      if (t.k() == 5)
        total += static_cast<int>(
            compatible_orderings(t.tree, OrderingFilter::Asdo).size());
    CHECK_EQ(total, 60);
  }

  SUBCASE("axial-realization criterion for ASDO compatibility, exhaustively") {
    // T compatible with ASDO lambda iff T = dual(Theta, phi0) for an axially
    // symmetric Theta and the ordering's axial representative phi0
    const Census& c = aspt_census(3);
    auto ax_subs = enumerate_subdivisions(3, SymmetryMode::Axial);
    for (const auto& lam : enumerate_orderings(3, OrderingFilter::Asdo)) {
      Labeling phi0 = representative_labeling(lam);
      std::set<std::string> axial_real;
      for (const auto& th : ax_subs)
        axial_real.insert(canonical_string(dual_tree(th, phi0)));
      for (const auto& t : c.trees)
        CHECK_EQ(compatible(t.tree, lam), axial_real.count(t.code) > 0);
    }
  }
}

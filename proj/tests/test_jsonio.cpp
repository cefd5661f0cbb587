#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "aspt/jsonio.hpp"

using namespace aspt;
using namespace aspt::jsonio;

namespace {

int count_occurrences(const std::string& hay, const std::string& needle) {
  int k = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++k;
  return k;
}

}  // namespace

TEST_CASE("rational vectors roundtrip through exact strings") {
  QVec v = {rat(-3, 2), rat(5), rat(0), rat(22, 7)};
  Json j = qvec_to_json(v);
  REQUIRE(j.is_array());
  CHECK(j[0] == "-3/2");
  CHECK(j[1] == "5");
  CHECK(qvec_from_json(j) == v);

  // Plain integers are accepted on input.
  CHECK(qvec_from_json(Json::parse("[1, \"2/3\", -4]")) ==
        QVec{rat(1), rat(2, 3), rat(-4)});

  CHECK_THROWS_AS(qvec_from_json(Json::parse("{\"a\":1}")), IoError);
  CHECK_THROWS_AS(qvec_from_json(Json::parse("[\"one half\"]")), IoError);
  CHECK_THROWS_AS(qvec_from_json(Json::parse("[true]")), IoError);
}

TEST_CASE("trees roundtrip and malformed input is rejected") {
  const auto& census = trees::aspt_census(3);
  for (int idx : {0, 5, 20, 34}) {
    const auto& t = census.trees[idx].tree;
    Json j = tree_to_json(t);
    CHECK(j["n"] == 3);
    CHECK(j["leaves"].size() == 6);
    auto back = tree_from_json(j);
    CHECK(trees::canonical_string(back) == trees::canonical_string(t));
    CHECK(back.adj == t.adj);
    CHECK(back.leaf_of == t.leaf_of);
  }

  // Star tree spot check: every label maps to a distinct leaf vertex.
  Json star = tree_to_json(census.trees[0].tree);
  std::set<int> leaf_vertices;
  for (const auto& [label, v] : star["leaves"].items()) leaf_vertices.insert(v.get<int>());
  CHECK(leaf_vertices.size() == 6);

  CHECK_THROWS_AS(tree_from_json(Json::parse("[]")), IoError);
  CHECK_THROWS_AS(tree_from_json(Json::parse("{\"n\":3}")), IoError);
  // A two-vertex "tree" with a degree-1 internal vertex is invalid.
  CHECK_THROWS_AS(
      tree_from_json(Json::parse(
          R"({"n":1,"edges":[[0,1]],"leaves":{"1":0,"1~":0}})")),
      IoError);
  // Unknown label key.
  Json bad = tree_to_json(census.trees[0].tree);
  bad["leaves"].erase("1");
  CHECK_THROWS_AS(tree_from_json(bad), IoError);
}

TEST_CASE("fan export carries cones, rays, and facet triples exactly") {
  auto f = fan::build_fan(3);
  Json j = fan_to_json(f);
  CHECK(j["n"] == 3);
  REQUIRE(j["D"].size() == 9);
  CHECK(j["D"][0] == Json::array({"1", "2"}));
  CHECK(j["D"][3] == Json::array({"1", "1~"}));
  REQUIRE(j["lineality"].size() == 3);
  CHECK(qvec_from_json(j["lineality"][0]) == f.lineality[0]);
  REQUIRE(j["cones"].size() == 35);
  REQUIRE(j["facets"].size() == f.facets.size());

  const auto& star = j["cones"][0];
  CHECK(star["dim"] == 3);
  CHECK(star["thick"] == true);
  CHECK(star["rays"].empty());
  CHECK(qvec_from_json(star["interior"]) == QVec(9, Rational(0)));
  CHECK(star["tree"] == trees::hex_code(f.cones[0].tree_code));

  // Spot-check a maximal cone: rays parse back to the exact vectors.
  int maximal = -1;
  for (size_t i = 0; i < f.cones.size(); ++i)
    if (f.cones[i].dim == 5) {
      maximal = static_cast<int>(i);
      break;
    }
  REQUIRE(maximal >= 0);
  const auto& cj = j["cones"][maximal];
  REQUIRE(cj["rays"].size() == f.cones[maximal].rays.size());
  for (size_t r = 0; r < f.cones[maximal].rays.size(); ++r)
    CHECK(qvec_from_json(cj["rays"][r]) == f.cones[maximal].rays[r]);

  // Facet triples match the graph records.
  for (size_t e = 0; e < f.facets.size(); ++e) {
    CHECK(j["facets"][e][0] == f.facets[e].cone);
    CHECK(j["facets"][e][1] == f.facets[e].facet);
    CHECK(j["facets"][e][2] == f.facets[e].orbit);
  }
}

TEST_CASE("dot export draws the codimension-1 facet graph") {
  auto f = fan::build_fan(3);
  std::string dot = fan_to_dot(f);
  CHECK(dot.rfind("graph", 0) == 0);
  CHECK(count_occurrences(dot, "[label=") == 13);  // dim-4 cones
  CHECK(count_occurrences(dot, " -- ") == 21);     // one edge per dim-5 cone

  // The hexagon subfan draws as a 6-cycle.
  auto omega =
      fan::subfan_for_ordering(polygon::parse_ordering(3, "1,2,3,1~,2~,3~"), f);
  std::string hexagon = fan_to_dot(omega);
  CHECK(count_occurrences(hexagon, "[label=") == 6);
  CHECK(count_occurrences(hexagon, " -- ") == 6);
  // All of the hexagon is CSPT, so everything is drawn thick.
  CHECK(count_occurrences(hexagon, "penwidth=2.5") == 12);
}

TEST_CASE("relations roundtrip with pair-label monomials") {
  auto rels = cluster::discover_relations(3, 20240817);
  Json j = relations_to_json(rels);
  REQUIRE(j.size() == 9);

  // The first canonical relation is the Brahmagupta trinomial
  // x_(1,2)^2 - x_(1,1~)x_(2,2~) + x_(1,2~)^2.
  const auto& first = j[0]["terms"];
  REQUIRE(first.size() == 3);
  CHECK(first[0]["c"] == "1");
  CHECK(first[0]["mono"] == Json::parse(R"([["1","2"],["1","2"]])"));
  CHECK(first[1]["c"] == "-1");
  CHECK(first[1]["mono"] == Json::parse(R"([["1","1~"],["2","2~"]])"));
  CHECK(first[2]["c"] == "1");
  CHECK(first[2]["mono"] == Json::parse(R"([["1","2~"],["1","2~"]])"));

  auto back = relations_from_json(3, j);
  REQUIRE(back.size() == rels.size());
  for (size_t i = 0; i < rels.size(); ++i) {
    CHECK(back[i].n == 3);
    REQUIRE(back[i].terms.size() == rels[i].terms.size());
    for (size_t t = 0; t < rels[i].terms.size(); ++t) {
      CHECK(back[i].terms[t].c == rels[i].terms[t].c);
      CHECK(back[i].terms[t].vars == rels[i].terms[t].vars);
    }
    CHECK(cluster::verify_relation(back[i]));
  }

  CHECK_THROWS_AS(relations_from_json(3, Json::parse("{}")), IoError);
  CHECK_THROWS_AS(
      relations_from_json(3, Json::parse(R"([{"terms":[{"c":"x","mono":[]}]}])")),
      IoError);
}

TEST_CASE("sign census export keeps witnesses reconstructible") {
  auto s = cluster::sample_sign_patterns(3, 5000, 11);
  REQUIRE(!s.patterns.empty());
  Json j = sample_to_json(3, s);
  CHECK(j["n"] == 3);
  CHECK(j["trials"] == s.trials_used);
  CHECK(j["saturated"] == s.saturated);
  REQUIRE(j["patterns"].size() == s.patterns.size());
  for (const auto& [key, wit] : s.patterns) {
    REQUIRE(j["patterns"].contains(key));
    const auto& wj = j["patterns"][key];
    CHECK(wj["trial"] == wit.trial);
    CHECK(wj["eps"] == wit.eps);
    CHECK(qvec_from_json(wj["point"]) == wit.point);
    REQUIRE(wj["z"].size() == 2);
    CHECK(qvec_from_json(wj["z"][0]) == wit.z[0]);
    CHECK(qvec_from_json(wj["z"][1]) == wit.z[1]);
    // The exported point really is eps * delta(z).
    auto x = cluster::delta_eval({qvec_from_json(wj["z"][0]), qvec_from_json(wj["z"][1])});
    CHECK(qvec_from_json(wj["point"]) == scale(Rational(wit.eps), x));
  }
}

#pragma once
// JSON and DOT serialization.  Rationals travel as exact strings ("-3/2",
// "5"); trees, fans, relations and sign censuses have fixed schemas so
// exports are stable across runs and platforms.

#include <string>
#include <vector>

#include <json.hpp>

#include "aspt/cluster.hpp"
#include "aspt/fan.hpp"
#include "aspt/trees.hpp"

namespace aspt::jsonio {

using Json = nlohmann::json;

// Vectors in Q^D: arrays of exact rational strings; plain JSON integers are
// accepted on input.  IoError on malformed data.
Json qvec_to_json(const QVec& v);
QVec qvec_from_json(const Json& j);

// Trees: {"n":3, "edges":[[0,1],...], "leaves":{"1":4, "1~":5, ...}} with
// "leaves" mapping each label to its vertex.  Parsing validates the result
// (IoError when the input is not a well-formed labeled tree).
Json tree_to_json(const trees::PhyloTree& t);
trees::PhyloTree tree_from_json(const Json& j);

// Fans: {"n", "D":[["1","2"],...], "lineality":[...],
//        "cones":[{"tree","dim","thick","rays","interior"},...],
//        "facets":[[cone, facet, orbit],...]}
// where "tree" is the canonical hex code and "thick" marks CSPT cones.
Json fan_to_json(const fan::FanGraph& f);

// Facet graph in DOT form: one node per codimension-1 cone, one edge per
// maximal cone joining each pair of its codimension-1 facets present in the
// graph.  CSPT nodes and edges are drawn thick.
std::string fan_to_dot(const fan::FanGraph& f);

// Relations: [{"terms":[{"c":"-1","mono":[["1","1~"],["2","2~"]]},...]},...]
// with one ["a","b"] entry per variable occurrence (so squares repeat their
// pair).  The polygon parameter is not part of the format and must be
// supplied when parsing.
Json relations_to_json(const std::vector<cluster::QuadraticRelation>& rels);
std::vector<cluster::QuadraticRelation> relations_from_json(int n, const Json& j);

// Sign census: {"n","trials","saturated",
//               "patterns":{"++..":{"trial","eps","z","point"},...}}
Json sample_to_json(int n, const cluster::SampleResult& s);

}  // namespace aspt::jsonio

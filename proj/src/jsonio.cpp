#include "aspt/jsonio.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace aspt::jsonio {

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw IoError("expected an exact rational string or integer");
}

}  // namespace

Json qvec_to_json(const QVec& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

QVec qvec_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("expected a JSON array of rationals");
  QVec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

Json tree_to_json(const trees::PhyloTree& t) {
  Json j;
  j["n"] = t.n;
  Json edges = Json::array();
  for (size_t u = 0; u < t.adj.size(); ++u)
    for (int v : t.adj[u])
      if (static_cast<int>(u) < v) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  Json leaves = Json::object();
  for (int ord = 0; ord < 2 * t.n; ++ord)
    leaves[polygon::label_at(ord, t.n).str()] = t.leaf_of[ord];
  j["leaves"] = std::move(leaves);
  return j;
}

trees::PhyloTree tree_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges") || !j.contains("leaves"))
    throw IoError("tree json: expected an object with n, edges, leaves");
  trees::PhyloTree t;
  if (!j["n"].is_number_integer()) throw IoError("tree json: n must be an integer");
  t.n = j["n"].get<int>();
  if (t.n < 1) throw IoError("tree json: n must be positive");
  if (!j["edges"].is_array()) throw IoError("tree json: edges must be an array");
  int vmax = -1;
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw IoError("tree json: each edge must be a pair of vertex ids");
    const int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 0 || v < 0 || u == v) throw IoError("tree json: bad edge endpoints");
    vmax = std::max({vmax, u, v});
    edges.emplace_back(u, v);
  }
  t.adj.assign(vmax + 1, {});
  for (auto [u, v] : edges) {
    t.adj[u].push_back(v);
    t.adj[v].push_back(u);
  }
  for (auto& nb : t.adj) std::sort(nb.begin(), nb.end());
  if (!j["leaves"].is_object()) throw IoError("tree json: leaves must be an object");
  t.leaf_of.assign(2 * t.n, -1);
  for (int ord = 0; ord < 2 * t.n; ++ord) {
    const std::string key = polygon::label_at(ord, t.n).str();
    if (!j["leaves"].contains(key))
      throw IoError("tree json: missing leaf label " + key);
    const auto& lv = j["leaves"][key];
    if (!lv.is_number_integer()) throw IoError("tree json: leaf vertex must be an integer");
    const int v = lv.get<int>();
    if (v < 0 || v > vmax) throw IoError("tree json: leaf vertex out of range");
    t.leaf_of[ord] = v;
  }
  if (!trees::is_valid(t)) throw IoError("tree json: not a valid labeled tree");
  return t;
}

Json fan_to_json(const fan::FanGraph& f) {
  Json j;
  j["n"] = f.n;
  Json d = Json::array();
  for (const auto& [a, b] : fan::IndexSetD::get(f.n).elements)
    d.push_back({a.str(), b.str()});
  j["D"] = std::move(d);
  Json lin = Json::array();
  for (const auto& row : f.lineality) lin.push_back(qvec_to_json(row));
  j["lineality"] = std::move(lin);
  Json cones = Json::array();
  for (const auto& c : f.cones) {
    Json cj;
    cj["tree"] = trees::hex_code(c.tree_code);
    cj["dim"] = c.dim;
    cj["thick"] = c.thick;
    Json rays = Json::array();
    for (const auto& r : c.rays) rays.push_back(qvec_to_json(r));
    cj["rays"] = std::move(rays);
    cj["interior"] = qvec_to_json(c.interior);
    cones.push_back(std::move(cj));
  }
  j["cones"] = std::move(cones);
  Json facets = Json::array();
  for (const auto& e : f.facets) facets.push_back({e.cone, e.facet, e.orbit});
  j["facets"] = std::move(facets);
  return j;
}

std::string fan_to_dot(const fan::FanGraph& f) {
  const int node_dim = 2 * f.n - 2;
  std::ostringstream out;
  out << "graph facet_graph {\n";
  out << "  // nodes: codimension-1 cones; edges: maximal cones; thick = CSPT\n";
  for (size_t i = 0; i < f.cones.size(); ++i) {
    const auto& c = f.cones[i];
    if (c.dim != node_dim) continue;
    out << "  c" << i << " [label=\"" << trees::hex_code(c.tree_code).substr(0, 8)
        << "\", penwidth=" << (c.thick ? "2.5" : "1.0") << "];\n";
  }
  std::map<int, std::vector<int>> facets_of;  // maximal cone -> facet nodes
  for (const auto& e : f.facets)
    if (f.cones[e.cone].dim == node_dim + 1 && f.cones[e.facet].dim == node_dim)
      facets_of[e.cone].push_back(e.facet);
  for (const auto& [m, fs] : facets_of)
    for (size_t a = 0; a < fs.size(); ++a)
      for (size_t b = a + 1; b < fs.size(); ++b)
        out << "  c" << fs[a] << " -- c" << fs[b]
            << " [penwidth=" << (f.cones[m].thick ? "2.5" : "1.0") << "];\n";
  out << "}\n";
  return out.str();
}

Json relations_to_json(const std::vector<cluster::QuadraticRelation>& rels) {
  Json arr = Json::array();
  for (const auto& r : rels) {
    const auto& D = fan::IndexSetD::get(r.n);
    Json terms = Json::array();
    for (const auto& t : r.terms) {
      Json mono = Json::array();
      for (int v : t.vars) {
        const auto& [a, b] = D.elements.at(v);
        mono.push_back({a.str(), b.str()});
      }
      terms.push_back({{"c", to_string(t.c)}, {"mono", std::move(mono)}});
    }
    arr.push_back({{"terms", std::move(terms)}});
  }
  return arr;
}

std::vector<cluster::QuadraticRelation> relations_from_json(int n, const Json& j) {
  if (!j.is_array()) throw IoError("relations json: expected an array");
  const auto& D = fan::IndexSetD::get(n);
  std::vector<cluster::QuadraticRelation> rels;
  for (const auto& rj : j) {
    if (!rj.is_object() || !rj.contains("terms") || !rj["terms"].is_array())
      throw IoError("relations json: each entry needs a terms array");
    cluster::QuadraticRelation r;
    r.n = n;
    for (const auto& tj : rj["terms"]) {
      if (!tj.is_object() || !tj.contains("c") || !tj.contains("mono") || !tj["mono"].is_array())
        throw IoError("relations json: each term needs c and mono");
      cluster::Term t;
      t.c = rational_from_json(tj["c"]);
      for (const auto& mj : tj["mono"]) {
        if (!mj.is_array() || mj.size() != 2 || !mj[0].is_string() || !mj[1].is_string())
          throw IoError("relations json: each mono entry must be a label pair");
        t.vars.push_back(D.position(polygon::SignedLabel::parse(mj[0].get<std::string>()),
                                    polygon::SignedLabel::parse(mj[1].get<std::string>())));
      }
      std::sort(t.vars.begin(), t.vars.end());
      r.terms.push_back(std::move(t));
    }
    std::sort(r.terms.begin(), r.terms.end(),
              [](const cluster::Term& a, const cluster::Term& b) { return a.vars < b.vars; });
    rels.push_back(std::move(r));
  }
  return rels;
}

Json sample_to_json(int n, const cluster::SampleResult& s) {
  Json j;
  j["n"] = n;
  j["trials"] = s.trials_used;
  j["saturated"] = s.saturated;
  Json pats = Json::object();
  for (const auto& [key, w] : s.patterns) {
    Json wj;
    wj["trial"] = w.trial;
    wj["eps"] = w.eps;
    wj["z"] = Json::array({qvec_to_json(w.z[0]), qvec_to_json(w.z[1])});
    wj["point"] = qvec_to_json(w.point);
    pats[key] = std::move(wj);
  }
  j["patterns"] = std::move(pats);
  return j;
}

}  // namespace aspt::jsonio

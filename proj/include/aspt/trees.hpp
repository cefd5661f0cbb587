#pragma once
// Axially symmetric phylogenetic trees.  A tree here has 2n labeled leaves
// (labels 1..n, 1~..n~), internal vertices of degree >= 3, and a unique
// involutive automorphism sigma exchanging the leaf labeled a with the leaf
// labeled a~.  Such trees are exactly the dual trees of axially symmetric
// subdivisions of the 2n-gon equipped with axially symmetric side labelings;
// centrally symmetric subdivisions and labelings cut out the CSPT subclass.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aspt/polygon.hpp"

namespace aspt::trees {

struct PhyloTree {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists
  std::vector<int> leaf_of;           // label ordinal -> vertex id
};

bool is_valid(const PhyloTree& t);  // tree, no degree-2 vertex, leaves labeled

// Dual tree of a subdivision of the 2n-gon with a side labeling: one vertex
// per cell, edges across shared diagonals, one labeled leaf per polygon side.
PhyloTree dual_tree(const polygon::Subdivision& theta, const polygon::Labeling& phi);

// Canonical form (centroid-rooted AHU encoding with leaf labels).  Two trees
// are isomorphic respecting labels iff their canonical strings agree.
std::string canonical_string(const PhyloTree& t);
std::string hex_code(const std::string& canonical);  // lowercase-hex transport form
std::string canonical_code(const PhyloTree& t);      // hex_code(canonical_string(t))

// The label-swap symmetry as a vertex permutation, or nullopt.  When it
// exists it is unique: internal vertices are pinned by their leaf-distance
// profiles.
std::optional<std::vector<int>> find_symmetry(const PhyloTree& t);

struct EdgeOrbit {
  std::vector<std::pair<int, int>> edges;  // 1 or 2 edges, each (u < v)
  bool leaf = false;                       // touches a leaf vertex
};

struct SymmetricTree {
  PhyloTree tree;
  std::vector<int> sigma;
  std::vector<EdgeOrbit> orbits;  // sorted by smallest edge
  std::string code;               // canonical_string(tree)

  int k() const { return static_cast<int>(orbits.size()); }  // cone dimension
  std::vector<int> internal_orbits() const;
};

// Wraps a tree that must possess the symmetry; IntegrityError otherwise.
SymmetricTree make_symmetric(PhyloTree t);

struct Census {
  int n = 0;
  std::vector<SymmetricTree> trees;     // sorted by (k, canonical string)
  std::map<std::string, int> index_of;  // canonical string -> position
};

// All ASPTs on 2n leaves, from axial subdivisions x axial labelings; cached.
const Census& aspt_census(int n);  // 3 <= n <= 5
// Canonical strings of the centrally symmetric subclass; cached.
const std::set<std::string>& cspt_codes(int n);
bool is_cspt(const SymmetricTree& t);

// Contracts every edge of one internal orbit; the result is again an ASPT
// (the facet tree).  Leaf orbits are not contractible.
PhyloTree contract_orbit(const SymmetricTree& t, int orbit_index);

// Partition of census positions into shape classes: two ASPTs share a shape
// when some signed relabeling of the leaves (permute 1..n, flip bars) carries
// one to the other.  n=3 yields the seven reference forms.
std::vector<std::vector<int>> shape_classes(const Census& c);

// T is compatible with an ordering when T arises as the dual tree of some
// subdivision under one (hence any) labeling realizing the ordering.
bool compatible(const PhyloTree& t, const polygon::DihedralOrdering& o);
std::vector<polygon::DihedralOrdering> compatible_orderings(
    const PhyloTree& t, polygon::OrderingFilter f);

}  // namespace aspt::trees

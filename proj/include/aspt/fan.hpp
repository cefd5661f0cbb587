#pragma once
// The space of ASPTs as an explicit polyhedral fan in Q^D.
//
// D is the n^2-element coordinate set holding one representative of every
// class {a,b} ~ {a~,b~} of leaf-label pairs.  A tree with orbit weights maps
// to its leaf-distance vector; the images of one tree's weightings form a
// relatively open cone of dimension k (= orbit count) whose lineality part
// is spanned by the shared leaf vectors L_1..L_n and whose rays are the
// unit-weight images of the internal orbits.  The collection of all these
// cones is a fan; facets arise by contracting one internal orbit.

#include <optional>
#include <string>
#include <vector>

#include "aspt/trees.hpp"

namespace aspt::fan {

struct IndexSetD {
  int n = 0;
  // first the (i,j) with 1<=i<j<=n, then the (i,j~) with 1<=i<=j<=n
  std::vector<std::pair<polygon::SignedLabel, polygon::SignedLabel>> elements;

  static const IndexSetD& get(int n);
  int size() const { return static_cast<int>(elements.size()); }
  // Position of the representative of the class of {a,b}; the pair must be
  // distinct as a set ({i,i} alone is rejected, {i,i~} is fine).
  int position(polygon::SignedLabel a, polygon::SignedLabel b) const;
};

// One exact weight per sigma-orbit, indexed like SymmetricTree::orbits.
using Weighting = QVec;

// Admissible = strictly positive on internal orbits (leaf weights are free).
bool is_admissible(const trees::SymmetricTree& t, const Weighting& l);

// Leaf-distance vector: coordinate at (a,b) is the weight sum over the path
// between the leaves labeled a and b (well-defined on classes).
QVec distance_vector(const trees::SymmetricTree& t, const Weighting& l);

// The shared lineality vector of leaf orbit i (1-based label index):
// coordinate (a,b) counts how many of a,b have index i.
QVec lineality_vector(int n, int label_index);

struct ConeRecord {
  std::string tree_code;       // canonical string of the tree
  int census_index = -1;       // position in the ASPT census
  int dim = 0;                 // k(T,v) = n + #rays, rank-verified
  QMat lineality_basis;        // L_1..L_n, identical for every cone
  QMat rays;                   // unit internal-orbit images, orbit-list order
  std::vector<int> ray_orbit;  // ray index -> orbit id in the tree
  QVec interior;               // leaf weights 0, internal weights 1
  bool thick = false;          // tree is a CSPT

  // Exact solver for [lineality | rays] x = w, precomputed:
  // solve_op * A = I_dim and null_op * A = 0; w is consistent iff
  // null_op * w = 0, and then x = solve_op * w.
  QMat solve_op;  // dim x |D|
  QMat null_op;   // (|D| - dim) x |D|
};

struct FacetEdge {
  int cone = -1;   // parent cone index
  int facet = -1;  // contraction result index
  int orbit = -1;  // contracted internal orbit id (in the parent tree)
};

struct FanGraph {
  int n = 0;
  const IndexSetD* D = nullptr;
  QMat lineality;                // L_1..L_n
  std::vector<ConeRecord> cones; // census order (by dim, then code)
  std::vector<FacetEdge> facets; // one per (cone, internal orbit)
  const trees::Census* census = nullptr;

  int cone_index(const std::string& tree_code) const;  // -1 if absent
};

// Cone of a single tree, with the exact dimension check (rank of
// [lineality | rays] must equal k).
ConeRecord cone_of(const trees::SymmetricTree& t);

// The whole fan; facet edges are cross-checked against the parent's rays
// (a facet's rays must be exactly the parent's minus the contracted one).
// Cached.  Facet verification runs in full for n <= 4.
const FanGraph& build_fan(int n);  // 3 <= n <= 5

enum class MemberKind { Interior, Boundary };

struct MemberResult {
  int cone = -1;             // index into fan.cones
  QVec lineality_coeffs;     // n leaf-orbit weights
  QVec internal_weights;     // dim-n internal weights, ray order
  MemberKind kind = MemberKind::Interior;
};

// The unique cone whose relative interior contains w, with the exact
// weights reconstructing w; absent when w lies outside the fan's support.
// Two interior matches would falsify injectivity -> IntegrityError.
std::optional<MemberResult> member_reconstruct(const QVec& w, const FanGraph& fan);

// Subfan spanned by a subset of cone indices (re-indexed; facet edges with
// both ends inside are kept).
FanGraph subfan_of(const FanGraph& fan, const std::vector<int>& members);

// Subfan of the cones compatible with an ASDO or CSDO (IoError otherwise):
// dual trees of the symmetric subdivisions under a symmetric representative
// labeling of the ordering.
FanGraph subfan_for_ordering(const polygon::DihedralOrdering& o, const FanGraph& fan);

enum class ReferenceLattice { Associahedron, Cyclohedron };

// Order isomorphism test between a subfan's face poset (cones ordered by
// ray-set inclusion) and a reference subdivision lattice: associahedron =
// all subdivisions of the (n+2)-gon, cyclohedron = centrally symmetric
// subdivisions of the 2n-gon, both under refinement.
bool face_poset_isomorphic(const FanGraph& a, ReferenceLattice b);

}  // namespace aspt::fan

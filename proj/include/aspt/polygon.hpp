#pragma once
// Combinatorics of the labeled 2n-gon: noncrossing diagonal subdivisions,
// symmetric side labelings, dihedral orderings, and the contraction that
// identifies axially symmetric subdivisions with subdivisions of a small
// (n+2)-gon.
//
// Conventions used throughout:
//   * polygon vertices are 0..m-1 counterclockwise; side s joins s and
//     (s+1) mod m;
//   * leaf labels are 1..n and their barred partners 1~..n~, ordered
//     1 < 1~ < 2 < 2~ < ...;
//   * the mirror symmetry is v -> -v (mod 2n), fixing the axis through
//     vertices 0 and n; the central symmetry is v -> v+n (mod 2n);
//   * subdivisions include the empty one.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "aspt/common.hpp"

namespace aspt::polygon {

enum class SymmetryMode { All, Axial, Central };

// ---------------------------------------------------------------- labels --

struct SignedLabel {
  int index = 1;  // 1..n
  bool barred = false;

  auto operator<=>(const SignedLabel&) const = default;
  SignedLabel bar() const { return {index, !barred}; }
  std::string str() const;
  static SignedLabel parse(const std::string& s);  // "3" or "3~"
};

std::vector<SignedLabel> all_labels(int n);       // ordinal order: 1..n, 1~..n~
int ordinal(const SignedLabel& a, int n);         // position in all_labels(n)
SignedLabel label_at(int ord, int n);
inline int bar_ordinal(int ord, int n) { return ord < n ? ord + n : ord - n; }

// ------------------------------------------------------------- diagonals --

struct Diagonal {
  int v1 = 0, v2 = 0;  // normalized v1 < v2

  Diagonal() = default;
  Diagonal(int a, int b) : v1(a < b ? a : b), v2(a < b ? b : a) {}
  auto operator<=>(const Diagonal&) const = default;
};

bool is_diagonal(const Diagonal& d, int m);  // distinct, non-adjacent mod m
// Open-arc interleaving test; shared endpoints never cross.
bool crosses(const Diagonal& a, const Diagonal& b);

inline int mirror_vertex(int v, int m) { return (m - v) % m; }
inline int mirror_side(int s, int m) { return m - 1 - s; }
inline int central_vertex(int v, int m) { return (v + m / 2) % m; }
inline int central_side(int s, int m) { return (s + m / 2) % m; }
Diagonal mirror_image(const Diagonal& d, int m);
Diagonal central_image(const Diagonal& d, int m);

// ----------------------------------------------------------- subdivisions --

struct Subdivision {
  int m = 0;                       // polygon vertex count
  std::vector<Diagonal> diagonals; // sorted, pairwise noncrossing

  Subdivision() = default;
  Subdivision(int m_, std::vector<Diagonal> ds);  // sorts and deduplicates
  auto operator<=>(const Subdivision&) const = default;
};

bool is_valid(const Subdivision& s);
bool is_axial(const Subdivision& s);    // closed under mirror_image (even m)
bool is_central(const Subdivision& s);  // closed under central_image (even m)
inline bool is_triangulation(const Subdivision& s) {
  return static_cast<int>(s.diagonals.size()) == s.m - 3;
}
// coarse <= fine as diagonal sets
bool refines(const Subdivision& coarse, const Subdivision& fine);

// Every noncrossing diagonal set of an m-gon, the empty one included,
// sorted by (size, lexicographic).
std::vector<Subdivision> enumerate_polygon_subdivisions(int m);
// Subdivisions of the 2n-gon filtered by symmetry; 3 <= n <= 5.
std::vector<Subdivision> enumerate_subdivisions(int n, SymmetryMode mode);
// Members of `all` not strictly contained in another member.
std::vector<Subdivision> maximal_subdivisions(const std::vector<Subdivision>& all);

// Contraction to the small polygon: vertices 0..n of the 2n-gon survive, the
// arc n+1..2n-1 collapses to one extra vertex u = n+1 of an (n+2)-gon.
// Diagonals on the surviving arc are kept, a perpendicular {v, 2n-v} becomes
// {v, u}, and everything else (the mirror partners) is dropped.  This is a
// poset isomorphism onto all subdivisions of the (n+2)-gon.
Subdivision contract_to_small_polygon(const Subdivision& axial);
Subdivision expand_from_small_polygon(const Subdivision& small, int n);

// -------------------------------------------------------------- labelings --

// A bijection from the 2n leaf labels to the 2n sides; side_of is indexed by
// label ordinal.
struct Labeling {
  int n = 0;
  std::vector<int> side_of;

  auto operator<=>(const Labeling&) const = default;
};

bool is_valid(const Labeling& l);
bool is_axial(const Labeling& l);    // side_of(a~) == mirror_side(side_of(a))
bool is_central(const Labeling& l);
std::vector<Labeling> enumerate_labelings(int n, SymmetryMode mode);

// -------------------------------------------------------------- orderings --

// Cyclic reading of the side labels up to rotation and reflection, stored as
// the lexicographically minimal representative word.
struct DihedralOrdering {
  int n = 0;
  std::vector<SignedLabel> word;

  auto operator<=>(const DihedralOrdering&) const = default;
  std::string str() const;  // comma-joined, e.g. "1,2,3,1~,2~,3~"
};

DihedralOrdering canonicalize_word(int n, std::vector<SignedLabel> word);
DihedralOrdering ordering_of(const Labeling& l);
DihedralOrdering parse_ordering(int n, const std::string& csv);

struct OrderingClass {
  bool asdo = false;  // realized by an axially symmetric labeling
  bool csdo = false;  // realized by a centrally symmetric labeling
};
OrderingClass classify(const DihedralOrdering& o);

enum class OrderingFilter { All, Asdo, Csdo };
std::vector<DihedralOrdering> enumerate_orderings(int n, OrderingFilter f);

// First symmetric labeling (axial for an ASDO, else central for a CSDO)
// realizing the ordering, in enumerate_labelings order.
Labeling representative_labeling(const DihedralOrdering& o);

}  // namespace aspt::polygon

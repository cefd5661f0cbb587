#include "aspt/polygon.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace aspt::polygon {

// ---------------------------------------------------------------- labels --

std::string SignedLabel::str() const {
  return std::to_string(index) + (barred ? "~" : "");
}

SignedLabel SignedLabel::parse(const std::string& s) {
  if (s.empty()) throw IoError("empty label");
  size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits])))
    ++digits;
  if (digits == 0) throw IoError("bad label: " + s);
  bool barred = false;
  if (digits < s.size()) {
    if (s.substr(digits) != "~") throw IoError("bad label: " + s);
    barred = true;
  }
  int idx = std::stoi(s.substr(0, digits));
  if (idx < 1) throw IoError("bad label index: " + s);
  return {idx, barred};
}

std::vector<SignedLabel> all_labels(int n) {
  std::vector<SignedLabel> out;
  out.reserve(2 * n);
  for (int i = 1; i <= n; ++i) out.push_back({i, false});
  for (int i = 1; i <= n; ++i) out.push_back({i, true});
  return out;
}

int ordinal(const SignedLabel& a, int n) {
  if (a.index < 1 || a.index > n) throw IoError("label out of range: " + a.str());
  return (a.index - 1) + (a.barred ? n : 0);
}

SignedLabel label_at(int ord, int n) {
  return {ord % n + 1, ord >= n};
}

// ------------------------------------------------------------- diagonals --

bool is_diagonal(const Diagonal& d, int m) {
  if (d.v1 < 0 || d.v2 >= m || d.v1 == d.v2) return false;
  int gap = d.v2 - d.v1;
  return gap != 1 && gap != m - 1;
}

bool crosses(const Diagonal& a, const Diagonal& b) {
  if (a.v1 == b.v1 || a.v1 == b.v2 || a.v2 == b.v1 || a.v2 == b.v2) return false;
  bool in1 = a.v1 < b.v1 && b.v1 < a.v2;
  bool in2 = a.v1 < b.v2 && b.v2 < a.v2;
  return in1 != in2;
}

Diagonal mirror_image(const Diagonal& d, int m) {
  return Diagonal(mirror_vertex(d.v1, m), mirror_vertex(d.v2, m));
}

Diagonal central_image(const Diagonal& d, int m) {
  return Diagonal(central_vertex(d.v1, m), central_vertex(d.v2, m));
}

// ----------------------------------------------------------- subdivisions --

Subdivision::Subdivision(int m_, std::vector<Diagonal> ds) : m(m_) {
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  diagonals = std::move(ds);
}

bool is_valid(const Subdivision& s) {
  if (s.m < 3) return false;
  for (size_t i = 0; i < s.diagonals.size(); ++i) {
    if (!is_diagonal(s.diagonals[i], s.m)) return false;
    if (i > 0 && !(s.diagonals[i - 1] < s.diagonals[i])) return false;
    for (size_t j = i + 1; j < s.diagonals.size(); ++j)
      if (crosses(s.diagonals[i], s.diagonals[j])) return false;
  }
  return true;
}

bool is_axial(const Subdivision& s) {
  if (s.m % 2 != 0) return false;
  std::set<Diagonal> ds(s.diagonals.begin(), s.diagonals.end());
  for (const auto& d : s.diagonals)
    if (!ds.count(mirror_image(d, s.m))) return false;
  return true;
}

bool is_central(const Subdivision& s) {
  if (s.m % 2 != 0) return false;
  std::set<Diagonal> ds(s.diagonals.begin(), s.diagonals.end());
  for (const auto& d : s.diagonals)
    if (!ds.count(central_image(d, s.m))) return false;
  return true;
}

bool refines(const Subdivision& coarse, const Subdivision& fine) {
  return std::includes(fine.diagonals.begin(), fine.diagonals.end(),
                       coarse.diagonals.begin(), coarse.diagonals.end());
}

std::vector<Subdivision> enumerate_polygon_subdivisions(int m) {
  std::vector<Diagonal> cand;
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j)
      if (!(i == 0 && j == m - 1)) cand.push_back(Diagonal(i, j));

  std::vector<Subdivision> out;
  std::vector<Diagonal> cur;
  auto bt = [&](auto&& self, size_t next) -> void {
    if (next == cand.size()) {
      out.emplace_back(m, cur);
      return;
    }
    self(self, next + 1);
    for (const auto& d : cur)
      if (crosses(cand[next], d)) return;
    cur.push_back(cand[next]);
    self(self, next + 1);
    cur.pop_back();
  };
  bt(bt, 0);
  std::sort(out.begin(), out.end(), [](const Subdivision& a, const Subdivision& b) {
    if (a.diagonals.size() != b.diagonals.size())
      return a.diagonals.size() < b.diagonals.size();
    return a.diagonals < b.diagonals;
  });
  return out;
}

std::vector<Subdivision> enumerate_subdivisions(int n, SymmetryMode mode) {
  if (n < 3 || n > 5)
    throw CapacityError("enumerate_subdivisions supports 3 <= n <= 5");
  static std::map<std::pair<int, SymmetryMode>, std::vector<Subdivision>> cache;
  auto key = std::make_pair(n, mode);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<Subdivision> all = enumerate_polygon_subdivisions(2 * n);
  std::vector<Subdivision> out;
  for (const auto& s : all) {
    bool keep = mode == SymmetryMode::All || (mode == SymmetryMode::Axial && is_axial(s)) ||
                (mode == SymmetryMode::Central && is_central(s));
    if (keep) out.push_back(s);
  }
  cache[key] = out;
  return out;
}

std::vector<Subdivision> maximal_subdivisions(const std::vector<Subdivision>& all) {
  std::vector<Subdivision> out;
  for (const auto& s : all) {
    bool maximal = true;
    for (const auto& t : all)
      if (s != t && refines(s, t)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(s);
  }
  return out;
}

Subdivision contract_to_small_polygon(const Subdivision& axial) {
  if (!is_valid(axial) || !is_axial(axial))
    throw std::invalid_argument("contract_to_small_polygon needs a valid axially symmetric subdivision");
  const int n = axial.m / 2;
  const int u = n + 1;  // collapsed vertex of the (n+2)-gon
  std::vector<Diagonal> out;
  for (const auto& d : axial.diagonals) {
    if (d.v2 <= n) {
      out.push_back(d);  // survives on the fixed arc
    } else if (d.v1 >= 1 && d.v1 <= n - 1 && d.v2 == 2 * n - d.v1) {
      out.push_back(Diagonal(d.v1, u));  // perpendicular to the axis
    } else if (d.v1 == 0 || d.v1 >= n) {
      // mirror partner of a surviving diagonal; dropped
    } else {
      // a non-perpendicular diagonal with one endpoint strictly inside each
      // arc crosses its own mirror image, so it cannot occur here
      throw IntegrityError("axially symmetric subdivision contains a self-crossing orbit");
    }
  }
  return Subdivision(n + 2, out);
}

Subdivision expand_from_small_polygon(const Subdivision& small, int n) {
  if (small.m != n + 2) throw std::invalid_argument("expand: polygon size mismatch");
  if (!is_valid(small)) throw std::invalid_argument("expand: invalid subdivision");
  const int u = n + 1;
  std::vector<Diagonal> out;
  for (const auto& d : small.diagonals) {
    if (d.v2 == u) {
      out.push_back(Diagonal(d.v1, 2 * n - d.v1));
    } else {
      out.push_back(d);
      out.push_back(mirror_image(d, 2 * n));
    }
  }
  Subdivision s(2 * n, out);
  if (!is_valid(s) || !is_axial(s))
    throw IntegrityError("expand_from_small_polygon produced an invalid subdivision");
  return s;
}

// -------------------------------------------------------------- labelings --

bool is_valid(const Labeling& l) {
  if (static_cast<int>(l.side_of.size()) != 2 * l.n) return false;
  std::vector<bool> used(2 * l.n, false);
  for (int s : l.side_of) {
    if (s < 0 || s >= 2 * l.n || used[s]) return false;
    used[s] = true;
  }
  return true;
}

bool is_axial(const Labeling& l) {
  if (!is_valid(l)) return false;
  for (int a = 0; a < 2 * l.n; ++a)
    if (l.side_of[bar_ordinal(a, l.n)] != mirror_side(l.side_of[a], 2 * l.n))
      return false;
  return true;
}

bool is_central(const Labeling& l) {
  if (!is_valid(l)) return false;
  for (int a = 0; a < 2 * l.n; ++a)
    if (l.side_of[bar_ordinal(a, l.n)] != central_side(l.side_of[a], 2 * l.n))
      return false;
  return true;
}

std::vector<Labeling> enumerate_labelings(int n, SymmetryMode mode) {
  if (n < 3 || n > 5) throw CapacityError("enumerate_labelings supports 3 <= n <= 5");
  std::vector<Labeling> out;

  if (mode == SymmetryMode::All) {
    if (n > 4) throw CapacityError("unrestricted labelings limited to n <= 4");
    std::vector<int> perm(2 * n);
    for (int i = 0; i < 2 * n; ++i) perm[i] = i;
    do {
      out.push_back(Labeling{n, perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }

  // Symmetric labelings: pick which label family occupies each side orbit and
  // which member of the pair goes first.  The side orbits are {t, 2n-1-t}
  // (axial) respectively {t, t+n} (central) for t = 0..n-1.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      Labeling l{n, std::vector<int>(2 * n, -1)};
      for (int t = 0; t < n; ++t) {
        SignedLabel first{perm[t], (mask >> t & 1) != 0};
        int partner = mode == SymmetryMode::Axial ? mirror_side(t, 2 * n)
                                                  : central_side(t, 2 * n);
        l.side_of[ordinal(first, n)] = t;
        l.side_of[ordinal(first.bar(), n)] = partner;
      }
      out.push_back(std::move(l));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// -------------------------------------------------------------- orderings --

std::string DihedralOrdering::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) os << ',';
    os << word[i].str();
  }
  return os.str();
}

DihedralOrdering canonicalize_word(int n, std::vector<SignedLabel> word) {
  const int m = static_cast<int>(word.size());
  if (m != 2 * n) throw IoError("ordering word must have 2n letters");
  std::vector<SignedLabel> best;
  auto consider = [&](const std::vector<SignedLabel>& w) {
    for (int r = 0; r < m; ++r) {
      std::vector<SignedLabel> cand(m);
      for (int i = 0; i < m; ++i) cand[i] = w[(r + i) % m];
      if (best.empty() || cand < best) best = std::move(cand);
    }
  };
  consider(word);
  std::reverse(word.begin(), word.end());
  consider(word);
  return DihedralOrdering{n, std::move(best)};
}

DihedralOrdering ordering_of(const Labeling& l) {
  if (!is_valid(l)) throw std::invalid_argument("ordering_of: invalid labeling");
  std::vector<SignedLabel> word(2 * l.n);
  for (int a = 0; a < 2 * l.n; ++a) word[l.side_of[a]] = label_at(a, l.n);
  return canonicalize_word(l.n, std::move(word));
}

DihedralOrdering parse_ordering(int n, const std::string& csv) {
  std::vector<SignedLabel> word;
  std::string tok;
  std::istringstream is(csv);
  while (std::getline(is, tok, ',')) word.push_back(SignedLabel::parse(tok));
  if (static_cast<int>(word.size()) != 2 * n)
    throw IoError("ordering needs 2n comma-separated labels");
  std::set<SignedLabel> seen(word.begin(), word.end());
  if (static_cast<int>(seen.size()) != 2 * n)
    throw IoError("ordering repeats a label");
  for (const auto& a : word)
    if (a.index < 1 || a.index > n) throw IoError("ordering label out of range: " + a.str());
  return canonicalize_word(n, std::move(word));
}

namespace {

const std::set<DihedralOrdering>& symmetric_orderings(int n, SymmetryMode mode) {
  static std::map<std::pair<int, SymmetryMode>, std::set<DihedralOrdering>> cache;
  auto key = std::make_pair(n, mode);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::set<DihedralOrdering> s;
    for (const auto& l : enumerate_labelings(n, mode)) s.insert(ordering_of(l));
    it = cache.emplace(key, std::move(s)).first;
  }
  return it->second;
}

}  // namespace

OrderingClass classify(const DihedralOrdering& o) {
  OrderingClass c;
  c.asdo = symmetric_orderings(o.n, SymmetryMode::Axial).count(o) > 0;
  c.csdo = symmetric_orderings(o.n, SymmetryMode::Central).count(o) > 0;
  return c;
}

std::vector<DihedralOrdering> enumerate_orderings(int n, OrderingFilter f) {
  if (n < 3 || n > 5) throw CapacityError("enumerate_orderings supports 3 <= n <= 5");
  if (f == OrderingFilter::All) {
    if (n > 4) throw CapacityError("unrestricted orderings limited to n <= 4");
    // canonical forms of all words: fix label 1 in front to cut the orbit work
    std::vector<SignedLabel> rest = all_labels(n);
    rest.erase(rest.begin());
    std::set<DihedralOrdering> out;
    std::sort(rest.begin(), rest.end());
    do {
      std::vector<SignedLabel> word;
      word.push_back({1, false});
      word.insert(word.end(), rest.begin(), rest.end());
      out.insert(canonicalize_word(n, std::move(word)));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return {out.begin(), out.end()};
  }
  const auto& s = symmetric_orderings(
      n, f == OrderingFilter::Asdo ? SymmetryMode::Axial : SymmetryMode::Central);
  return {s.begin(), s.end()};
}

Labeling representative_labeling(const DihedralOrdering& o) {
  OrderingClass c = classify(o);
  SymmetryMode mode;
  if (c.asdo)
    mode = SymmetryMode::Axial;
  else if (c.csdo)
    mode = SymmetryMode::Central;
  else
    throw IoError("ordering " + o.str() + " is neither an ASDO nor a CSDO");
  for (const auto& l : enumerate_labelings(o.n, mode))
    if (ordering_of(l) == o) return l;
  throw IntegrityError("classified ordering has no symmetric representative");
}

}  // namespace aspt::polygon

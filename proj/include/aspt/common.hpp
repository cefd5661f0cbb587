#pragma once
// Shared scalar types and error taxonomy for the ASPT engine.
//
// All arithmetic in this project is exact: weights, ray coordinates and
// polynomial coefficients are rationals (GMP mpq).  Nothing here is ever
// evaluated in floating point.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace aspt {

using Rational = mpq_class;
using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // row-major

// A requested computation exceeds the supported problem size (CLI exit 2).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal cross-check failed (inconsistent census, ambiguous
// reconstruction, facet mismatch...).  Never expected on valid inputs.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Randomized numerical discovery produced unstable results across
// independent samples; caller should retry with a fresh seed.
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external data (CLI exit 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A tree contraction was requested on an orbit that may not be contracted
// (leaf orbits are part of the lineality data, not the cone shape).
struct ContractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }

// All rationals flowing through the library must be canonical (gcd 1,
// positive denominator); GMP's two-argument constructor does not normalize,
// so construct fractions through this helper.
inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p" or "p/q" with nonzero q; canonicalizes the sign and gcd.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw IoError("empty rational literal");
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw IoError("bad rational literal: " + s);
  }
}

inline bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline QVec add(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVec scale(const Rational& c, const QVec& v) {
  QVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
  return r;
}

}  // namespace aspt

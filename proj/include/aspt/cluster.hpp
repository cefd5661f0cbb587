#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aspt/common.hpp"
#include "aspt/fan.hpp"
#include "aspt/rng.hpp"

namespace aspt::cluster {

// A point of (Q^2)^n: a 2 x n rational matrix whose columns are the n plane
// vectors z_1, ..., z_n (row 0 = first component, row 1 = second).
using AmbientPoint = QMat;

// The n^2 coordinates of the point Delta(z) in Q^D, ordered as in
// fan::IndexSetD::get(n):
//   (i,j)     1 <= i < j <= n :  z_{1,i} z_{2,j} - z_{1,j} z_{2,i}
//   (i,jbar)  1 <= i <= j <= n:  z_{1,i} z_{1,j} + z_{2,i} z_{2,j}
QVec delta_eval(const AmbientPoint& z);

// Uniform random ambient point with entries generated by rng::rational
// (numerators and denominators bounded by 10^4).
AmbientPoint random_ambient_point(int n, rng::SplitMix64& g);

// One term c * prod_{v in vars} x_v of a polynomial in the coordinates x_d.
// vars holds sorted positions into fan::IndexSetD::get(n); repetition encodes
// the exponent.  Everything in this module has degree <= 2.
struct Term {
  Rational c;
  std::vector<int> vars;
};

struct QuadraticRelation {
  int n = 0;
  std::vector<Term> terms;  // sorted by vars; coefficients nonzero
};

// Exact symbolic check: substituting x_d -> Delta_d and expanding in the 2n
// matrix entries yields the zero polynomial.
bool verify_relation(const QuadraticRelation& r);

// Canonical basis of the space of degree <= 2 forms in the x_d vanishing on
// the image of delta_eval, obtained as the exact kernel of the evaluation
// matrix of all degree <= 2 monomials at random ambient points.  Two
// independent rounds must agree exactly (SamplingError after three
// disagreeing attempts).  Every basis element must be purely quadratic and
// pass verify_relation (IntegrityError otherwise).
std::vector<QuadraticRelation> discover_relations(int n, std::uint64_t seed);

// Subsum of the terms of r whose w-degree (sum of w over the monomial's
// positions, with multiplicity) is maximal.
QuadraticRelation init_form(const QuadraticRelation& r, const QVec& w);

// init_form(r, w) has at least two terms.
bool max_twice(const QuadraticRelation& r, const QVec& w);

// max_twice holds for every relation: w passes the tropical-prevariety
// certificate over the supplied generating set.
bool prevariety_check(const QVec& w, const std::vector<QuadraticRelation>& relations);

// A sign vector in {+1,-1}^D.
struct SignPattern {
  int n = 0;
  std::vector<int> nu;  // +1 / -1 per coordinate of Q^D

  std::string str() const;  // '+' / '-' per coordinate, in order
  static SignPattern parse(int n, const std::string& s);  // IoError on bad input
};

// Sign vector of a point of Q^D; absent if any coordinate vanishes.
std::optional<SignPattern> sign_of_vector(const QVec& x);

// Sign vector of delta_eval(z).
std::optional<SignPattern> sign_pattern_of(const AmbientPoint& z);

// The automorphism alpha_nu taking x_d to nu_d x_d: each coefficient is
// scaled by the product of nu over the term's positions (with multiplicity).
QuadraticRelation apply_sign_change(const QuadraticRelation& r, const SignPattern& nu);

// Certificate that (w, nu) is compatible with every relation: for each r,
// init_form(alpha_nu(r), w) carries at least one positive and at least one
// negative coefficient.
bool signed_compatible(const SignPattern& nu, const QVec& w,
                       const std::vector<QuadraticRelation>& relations);

// Subfan of the cones whose interior point passes signed_compatible.
fan::FanGraph signed_trop_subfan(const SignPattern& nu, const fan::FanGraph& f,
                                 const std::vector<QuadraticRelation>& relations);

// A sampled witness for an occurring sign pattern.  Real points of the
// variety are the two antipodal images +Delta(z) and -Delta(z), so a witness
// carries the ambient point together with the global sign.
struct Witness {
  AmbientPoint z;
  int eps = 1;              // +1 or -1
  QVec point;               // eps * delta_eval(z)
  std::uint64_t trial = 0;  // first trial that produced the pattern
};

struct SampleResult {
  std::map<std::string, Witness> patterns;  // keyed by SignPattern::str()
  std::uint64_t trials_used = 0;
  bool saturated = false;
};

// Randomized census of the sign patterns occurring on the real points.
// Trial t draws its own generator from mix(seed, t), samples z and a global
// sign eps, and records the sign vector of eps * delta_eval(z) (draws with a
// vanishing coordinate yield no pattern).  Stops early once no new pattern
// has appeared for ten times the trial count at the last discovery, checked
// at chunk boundaries.  The result is bit-identical for a fixed seed and
// independent of the worker count (threads <= 0 picks a hardware default).
SampleResult sample_sign_patterns(int n, std::uint64_t max_trials, std::uint64_t seed,
                                  int threads = 0);

}  // namespace aspt::cluster

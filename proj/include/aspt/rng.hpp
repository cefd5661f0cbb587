#pragma once
// Deterministic random sampling.  A splitmix64 stream keyed by (seed, salt)
// gives platform-independent reproducibility: the standard <random>
// distributions are implementation-defined, so they are deliberately not used
// for anything whose exact value matters to the protocols here.

#include <cstdint>

#include "aspt/common.hpp"

namespace aspt::rng {

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-enough integer in [lo, hi]; the modulo bias is irrelevant for the
  // sampling protocols here and keeps the mapping trivially reproducible.
  long below(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
};

// Derives an independent stream for (seed, salt); used to key per-trial and
// per-round generators so results do not depend on worker scheduling.
inline uint64_t mix(uint64_t seed, uint64_t salt) {
  SplitMix64 s(seed ^ (0x5851f42d4c957f2dULL * (salt + 1)));
  s.next();
  return s.next();
}

// Random rational with numerator in [-10^4, 10^4] and denominator in
// [1, 10^4], the coefficient window used by all sampling protocols.
inline Rational rational(SplitMix64& g) {
  Rational q(g.below(-10000, 10000), g.below(1, 10000));
  q.canonicalize();
  return q;
}

// Nonzero variant, for weights that must stay off coordinate hyperplanes.
inline Rational nonzero_rational(SplitMix64& g) {
  for (;;) {
    Rational q = rational(g);
    if (q != 0) return q;
  }
}

inline Rational positive_rational(SplitMix64& g) {
  Rational q(g.below(1, 10000), g.below(1, 10000));
  q.canonicalize();
  return q;
}

}  // namespace aspt::rng

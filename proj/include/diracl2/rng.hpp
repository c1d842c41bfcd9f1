#pragma once

#include <cstdint>
#include <random>

#include "diracl2/multivector.hpp"
#include "diracl2/rational.hpp"

namespace diracl2 {

// ========================= deterministic sampling =========================
//
// Raw mt19937_64 output shaped by hand.  The standard distribution adaptors
// are implementation-defined, which would break the byte-identical-report
// contract across toolchains, so they are deliberately avoided.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for trial `stream` of a suite seeded with `seed`;
  // stream outputs do not depend on how trials are scheduled.
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream))) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], both inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Small-integer rational p/q with p in [-9, 9], q in [1, 9].
inline Rational random_rational(Rng& rng) {
  return Rational(rng.next_int(-9, 9), rng.next_int(1, 9));
}

// Element with small integer coefficients; good coverage, exact arithmetic.
inline Multivector<Rational> random_int_multivector(int n, Rng& rng) {
  Multivector<Rational> out(n);
  for (Index i = 0; i < out.dim(); ++i)
    out.coeffs()[i] = Rational(rng.next_int(-9, 9));
  return out;
}

inline Multivector<Rational> random_rational_multivector(int n, Rng& rng) {
  Multivector<Rational> out(n);
  for (Index i = 0; i < out.dim(); ++i) out.coeffs()[i] = random_rational(rng);
  return out;
}

}  // namespace diracl2

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "diracl2/common.hpp"

namespace diracl2 {

// ============================ basis blades ============================
//
// A blade e_A is a product of distinct generators e_1..e_n in ascending
// order; e_0 = 1 is the empty product.  Bit k-1 of `mask` records whether
// generator e_k participates, so an algebra with n generators uses masks
// in [0, 2^n).  Multiplication is governed by e_i e_j = -e_j e_i (i != j)
// and e_i^2 = -1.

struct Blade {
  std::uint32_t mask = 0;

  constexpr int grade() const { return std::popcount(mask); }
  constexpr bool contains(int generator) const {
    return (mask >> (generator - 1)) & 1u;
  }
  friend constexpr bool operator==(Blade a, Blade b) = default;
};

constexpr Blade kScalarBlade{0};

constexpr Blade generator_blade(int i) {
  // e_0 is the empty blade; e_i for i >= 1 is the single-generator blade.
  return i == 0 ? Blade{0} : Blade{1u << (i - 1)};
}

// Number of generator transpositions needed to interleave e_A e_B into a
// single ascending word, i.e. #{(i, j) : i in A, j in B, i > j}.
constexpr int transposition_count(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  for (std::uint32_t x = a >> 1; x != 0; x >>= 1)
    swaps += std::popcount(x & b);
  return swaps;
}

struct BladeProduct {
  int sign;     // +1 or -1
  Blade blade;  // resulting basis blade
};

// e_A * e_B = sign * e_(A xor B): reorder into ascending order, then cancel
// repeated generators, each cancellation contributing e_i^2 = -1.
constexpr BladeProduct blade_product(Blade a, Blade b) {
  const int flips =
      transposition_count(a.mask, b.mask) + std::popcount(a.mask & b.mask);
  return {(flips & 1) ? -1 : +1, Blade{a.mask ^ b.mask}};
}

// ======================= grade-indexed involutions =======================

enum class Involution { Inversion, Reversion, Bar };

constexpr int inversion_sign(int grade) { return (grade & 1) ? -1 : +1; }
constexpr int reversion_sign(int grade) {
  return ((grade * (grade - 1) / 2) & 1) ? -1 : +1;
}
constexpr int bar_sign(int grade) {
  return ((grade * (grade + 1) / 2) & 1) ? -1 : +1;
}

constexpr int involution_sign(Involution kind, int grade) {
  switch (kind) {
    case Involution::Inversion: return inversion_sign(grade);
    case Involution::Reversion: return reversion_sign(grade);
    case Involution::Bar: return bar_sign(grade);
  }
  return +1;  // unreachable
}

// =========================== cached sign table ===========================
//
// For small n the full 2^n x 2^n product sign table is precomputed once and
// shared; beyond that the O(n)-per-pair formula above is used directly.

class SignTable {
 public:
  static constexpr int kMaxTableN = 8;

  // Returns the table for an n-generator algebra, building it on first use.
  static const SignTable& get(int n);

  int sign(std::uint32_t a, std::uint32_t b) const {
    return signs_[(static_cast<std::size_t>(a) << n_) | b];
  }

 private:
  explicit SignTable(int n);
  int n_;
  std::vector<std::int8_t> signs_;
};

// Human-readable blade name: "e0" for the unit, otherwise generator digits
// ("e13" = e_1 e_3); braces with commas once generators reach two digits.
std::string blade_name(Blade b);

// Parses the same format back ("e0", "e2", "e13", "e{1,12}").
Blade parse_blade_name(const std::string& name);

}  // namespace diracl2

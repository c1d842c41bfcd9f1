#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace diracl2 {

using Index = std::int64_t;

// Hard cap on the number of generators: 2^12 = 4096 coefficients per element.
inline constexpr int kMaxAlgebraN = 12;

// A malformed or out-of-range run configuration (bad flags, bad file, bad
// dimensions requested by the caller).  The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric failure at run time (non-finite field values, quadrature of an
// undefined integrand, solver breakdown).  The CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixing elements that live in algebras of different dimension is a caller
// bug, reported eagerly instead of producing garbage.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The two coefficient scalar kinds the library is instantiated with.  The
// kind travels with reports so a reader can tell an exact check from a
// floating-point one.
enum class ScalarKind { Float64, ExactRational };

// Which side a generator multiplies on; shared by the grid and symbolic
// Dirac operators.
enum class Side { Left, Right };

template <typename Scalar>
struct ScalarKindOf;  // specialized for double and Rational

template <>
struct ScalarKindOf<double> {
  static constexpr ScalarKind value = ScalarKind::Float64;
};

inline const char* to_string(ScalarKind k) {
  return k == ScalarKind::Float64 ? "float64" : "exact-rational";
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw config_error(what);
}

}  // namespace diracl2

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "diracl2/common.hpp"

namespace diracl2 {

// Exact arbitrary-precision rational scalar.  Identity verification runs on
// this type so that every algebraic assertion is a true equality, never a
// tolerance check.  The Eigen NumTraits bridge shipped with Boost makes it a
// first-class Eigen scalar.
using Rational = boost::multiprecision::cpp_rational;

template <>
struct ScalarKindOf<Rational> {
  static constexpr ScalarKind value = ScalarKind::ExactRational;
};

inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace diracl2

#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Core>

#include "diracl2/blade.hpp"
#include "diracl2/common.hpp"

namespace diracl2 {

// ========================== algebra elements ==========================
//
// An element of the real Clifford algebra with n anticommuting generators
// of square -1, stored densely as 2^n coefficients indexed by blade mask.
// The coefficient scalar is a template parameter: double for numerics,
// Rational for exact identity checking.  Mixing the two kinds in one
// expression refuses to compile; mixing two algebra dimensions throws.

template <typename Scalar>
class Multivector {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Multivector() : n_(0), c_(Coeffs::Zero(1)) {}

  explicit Multivector(int n) : n_(checked(n)), c_(Coeffs::Zero(dim_of(n))) {}

  Multivector(int n, Coeffs coeffs) : n_(checked(n)), c_(std::move(coeffs)) {
    if (c_.size() != dim_of(n_))
      throw dimension_error("coefficient vector has size " +
                            std::to_string(c_.size()) + ", expected 2^" +
                            std::to_string(n_));
  }

  static Multivector zero(int n) { return Multivector(n); }

  static Multivector scalar(int n, Scalar v) {
    Multivector out(n);
    out.c_[0] = std::move(v);
    return out;
  }

  // The algebra unit e_0.
  static Multivector unit(int n) { return scalar(n, Scalar(1)); }

  static Multivector basis(int n, Blade b) {
    Multivector out(n);
    out.c_[out.checked_index(b)] = Scalar(1);
    return out;
  }

  int n() const { return n_; }
  Index dim() const { return c_.size(); }

  const Coeffs& coeffs() const { return c_; }
  Coeffs& coeffs() { return c_; }

  const Scalar& operator[](Blade b) const { return c_[checked_index(b)]; }
  Scalar& operator[](Blade b) { return c_[checked_index(b)]; }

  const Scalar& scalar_part() const { return c_[0]; }

  bool is_zero() const {
    for (Index i = 0; i < c_.size(); ++i)
      if (c_[i] != Scalar(0)) return false;
    return true;
  }

  Multivector& operator+=(const Multivector& o) {
    require_same(o, "+");
    c_ += o.c_;
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    require_same(o, "-");
    c_ -= o.c_;
    return *this;
  }
  Multivector& operator*=(const Scalar& s) {
    c_ *= s;
    return *this;
  }

  friend Multivector operator+(Multivector a, const Multivector& b) {
    a += b;
    return a;
  }
  friend Multivector operator-(Multivector a, const Multivector& b) {
    a -= b;
    return a;
  }
  friend Multivector operator-(Multivector a) {
    a.c_ = -a.c_;
    return a;
  }
  friend Multivector operator*(Multivector a, const Scalar& s) {
    a *= s;
    return a;
  }
  friend Multivector operator*(const Scalar& s, Multivector a) {
    a *= s;
    return a;
  }
  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.n_ == b.n_ && a.c_ == b.c_;
  }

  void require_same(const Multivector& o, const char* op) const {
    if (n_ != o.n_)
      throw dimension_error(std::string("operands of '") + op +
                            "' live in algebras with n=" +
                            std::to_string(n_) + " and n=" +
                            std::to_string(o.n_));
  }

 private:
  static int checked(int n) {
    if (n < 0 || n > kMaxAlgebraN)
      throw dimension_error("algebra parameter n=" + std::to_string(n) +
                            " outside [0, " + std::to_string(kMaxAlgebraN) +
                            "]");
    return n;
  }
  static Index dim_of(int n) { return Index(1) << n; }

  Index checked_index(Blade b) const {
    if (b.mask >= (std::uint32_t(1) << n_))
      throw dimension_error("blade " + std::to_string(b.mask) +
                            " outside an algebra with n=" +
                            std::to_string(n_));
    return static_cast<Index>(b.mask);
  }

  int n_;
  Coeffs c_;
};

// ============================== products ==============================

template <typename Scalar>
Multivector<Scalar> mul(const Multivector<Scalar>& a,
                        const Multivector<Scalar>& b) {
  a.require_same(b, "mul");
  const int n = a.n();
  const Index d = a.dim();
  Multivector<Scalar> out(n);
  const SignTable* table =
      n <= SignTable::kMaxTableN ? &SignTable::get(n) : nullptr;
  for (Index ia = 0; ia < d; ++ia) {
    const Scalar& xa = a.coeffs()[ia];
    if (xa == Scalar(0)) continue;
    for (Index ib = 0; ib < d; ++ib) {
      const Scalar& xb = b.coeffs()[ib];
      if (xb == Scalar(0)) continue;
      const std::uint32_t ma = static_cast<std::uint32_t>(ia);
      const std::uint32_t mb = static_cast<std::uint32_t>(ib);
      const int s =
          table ? table->sign(ma, mb) : blade_product(Blade{ma}, Blade{mb}).sign;
      Scalar t = xa * xb;
      if (s < 0)
        out.coeffs()[ia ^ ib] -= t;
      else
        out.coeffs()[ia ^ ib] += t;
    }
  }
  return out;
}

template <typename Scalar>
Multivector<Scalar> operator*(const Multivector<Scalar>& a,
                              const Multivector<Scalar>& b) {
  return mul(a, b);
}

// ============================= involutions =============================

template <typename Scalar>
Multivector<Scalar> involution(const Multivector<Scalar>& a, Involution kind) {
  Multivector<Scalar> out = a;
  for (Index i = 0; i < a.dim(); ++i) {
    const int g = std::popcount(static_cast<std::uint32_t>(i));
    if (involution_sign(kind, g) < 0) out.coeffs()[i] = -out.coeffs()[i];
  }
  return out;
}

template <typename Scalar>
Multivector<Scalar> inversion(const Multivector<Scalar>& a) {
  return involution(a, Involution::Inversion);
}

template <typename Scalar>
Multivector<Scalar> reversion(const Multivector<Scalar>& a) {
  return involution(a, Involution::Reversion);
}

// The conjugation written lambda-bar: composition of inversion and
// reversion; the adjoint involution for the scalar inner product below.
template <typename Scalar>
Multivector<Scalar> bar(const Multivector<Scalar>& a) {
  return involution(a, Involution::Bar);
}

// ====================== coefficients and functionals ======================

template <typename Scalar>
const Scalar& component(const Multivector<Scalar>& a, Blade b) {
  return a[b];
}

// Scalar inner product (a, b)_0 = 2^n * sum_A a_A b_A; equals the scalar
// part functional applied to a * bar(b).
template <typename Scalar>
Scalar inner0(const Multivector<Scalar>& a, const Multivector<Scalar>& b) {
  a.require_same(b, "inner0");
  return Scalar(Index(1) << a.n()) * a.coeffs().dot(b.coeffs());
}

template <typename Scalar>
Scalar norm0_sq(const Multivector<Scalar>& a) {
  return inner0(a, a);
}

inline double norm0(const Multivector<double>& a) {
  return std::sqrt(norm0_sq(a));
}

// The coefficient functional tau_{e_A}: <tau_{e_A}, mu> is 2^n times the
// e_A coefficient carrying the bar-involution sign of |A|; equivalently the
// scalar part of e_A * mu scaled by 2^n, so <tau_{e_0}, mu> = 2^n mu_0.
template <typename Scalar>
Scalar tau(Blade a, const Multivector<Scalar>& mu) {
  const Scalar scale(Index(1) << mu.n());
  const Scalar& coeff = mu[a];
  return bar_sign(a.grade()) < 0 ? Scalar(-scale * coeff) : Scalar(scale * coeff);
}

// Display form used by counterexample records: "c*eA + c*eB".
template <typename Scalar>
std::string to_coefficient_string(const Multivector<Scalar>& a) {
  std::ostringstream out;
  bool first = true;
  for (Index i = 0; i < a.dim(); ++i) {
    const Scalar& c = a.coeffs()[i];
    if (c == Scalar(0)) continue;
    if (!first) out << " + ";
    out << c << "*" << blade_name(Blade{static_cast<std::uint32_t>(i)});
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace diracl2

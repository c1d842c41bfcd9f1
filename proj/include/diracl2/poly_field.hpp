#pragma once

#include <map>
#include <vector>

#include "diracl2/multivector.hpp"
#include "diracl2/rng.hpp"

namespace diracl2 {

// ======================= symbolic polynomial fields =======================
//
// Multivariate polynomials with double coefficients over the n+1 grid
// coordinates, and algebra-valued fields whose components are such
// polynomials.  Differentiation and Clifford multiplication are exact at
// the coefficient level, which turns first-order calculus identities
// (product rules, conjugation rules, operator factorizations) into
// coefficient comparisons instead of sampling arguments.

class Polynomial {
 public:
  // Exponent vector, one entry per coordinate axis.
  using Key = std::vector<int>;

  explicit Polynomial(int axes) : axes_(axes) {}

  static Polynomial constant(int axes, double v);
  static Polynomial monomial(int axes, Key key, double coeff);

  int axes() const { return axes_; }
  const std::map<Key, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Key& key, double coeff);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator*(double s) const;

  Polynomial derivative(int axis) const;
  double eval(const Eigen::VectorXd& x) const;
  double max_abs_coeff() const;

 private:
  int axes_;
  std::map<Key, double> terms_;  // zero coefficients are pruned
};

class PolyField {
 public:
  PolyField(int n, std::vector<Polynomial> comps);
  static PolyField zero(int n);

  int n() const { return n_; }
  int axes() const { return n_ + 1; }
  Index components() const { return static_cast<Index>(comps_.size()); }
  const Polynomial& comp(Index mask) const {
    return comps_[static_cast<std::size_t>(mask)];
  }
  Polynomial& comp(Index mask) { return comps_[static_cast<std::size_t>(mask)]; }

  Multivector<double> eval(const Eigen::VectorXd& x) const;

  PolyField derivative(int axis) const;
  PolyField laplacian() const;

  // Clifford structure, mirroring the grid operators symbolically.
  PolyField dirac(Side left_or_right, bool conjugated) const;
  PolyField bar() const;
  PolyField mul_generator(int generator, Side side) const;

  friend PolyField operator+(const PolyField& a, const PolyField& b);
  friend PolyField operator-(const PolyField& a, const PolyField& b);
  friend PolyField operator*(const PolyField& a, const PolyField& b);

  double max_abs_coeff() const;

  // Random field of total degree <= maxDegree with small integer
  // coefficients; `gradeCap` < 0 keeps all blades, otherwise only blades of
  // grade <= gradeCap are populated.
  static PolyField random(int n, int maxDegree, Rng& rng, int gradeCap = -1);

 private:
  int n_;
  std::vector<Polynomial> comps_;
};

}  // namespace diracl2

#include "diracl2/poly_field.hpp"

#include <cmath>

namespace diracl2 {

Polynomial Polynomial::constant(int axes, double v) {
  Polynomial p(axes);
  p.add_term(Key(static_cast<std::size_t>(axes), 0), v);
  return p;
}

Polynomial Polynomial::monomial(int axes, Key key, double coeff) {
  Polynomial p(axes);
  p.add_term(key, coeff);
  return p;
}

void Polynomial::add_term(const Key& key, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out(a.axes_);
  Polynomial::Key key(static_cast<std::size_t>(a.axes_), 0);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      for (int i = 0; i < a.axes_; ++i)
        key[static_cast<std::size_t>(i)] =
            ka[static_cast<std::size_t>(i)] + kb[static_cast<std::size_t>(i)];
      out.add_term(key, ca * cb);
    }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out(axes_);
  for (const auto& [key, c] : terms_) out.add_term(key, c * s);
  return out;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial out(axes_);
  const auto a = static_cast<std::size_t>(axis);
  for (const auto& [key, c] : terms_) {
    if (key[a] == 0) continue;
    Key k = key;
    k[a] -= 1;
    out.add_term(k, c * static_cast<double>(key[a]));
  }
  return out;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  double acc = 0.0;
  for (const auto& [key, c] : terms_) {
    double term = c;
    for (int i = 0; i < axes_; ++i)
      for (int p = 0; p < key[static_cast<std::size_t>(i)]; ++p) term *= x[i];
    acc += term;
  }
  return acc;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

// ---------------------------------------------------------------------

PolyField::PolyField(int n, std::vector<Polynomial> comps)
    : n_(n), comps_(std::move(comps)) {
  require(static_cast<Index>(comps_.size()) == (Index(1) << n),
          "polynomial field needs 2^n components");
}

PolyField PolyField::zero(int n) {
  return PolyField(
      n, std::vector<Polynomial>(std::size_t(1) << n, Polynomial(n + 1)));
}

Multivector<double> PolyField::eval(const Eigen::VectorXd& x) const {
  Multivector<double> out(n_);
  for (Index c = 0; c < components(); ++c) out.coeffs()[c] = comp(c).eval(x);
  return out;
}

PolyField PolyField::derivative(int axis) const {
  PolyField out = zero(n_);
  for (Index c = 0; c < components(); ++c)
    out.comp(c) = comp(c).derivative(axis);
  return out;
}

PolyField PolyField::laplacian() const {
  PolyField out = zero(n_);
  for (int a = 0; a < axes(); ++a) {
    const PolyField second = derivative(a).derivative(a);
    for (Index c = 0; c < components(); ++c) out.comp(c) += second.comp(c);
  }
  return out;
}

PolyField PolyField::mul_generator(int generator, Side side) const {
  const Blade g = generator_blade(generator);
  PolyField out = zero(n_);
  for (Index c = 0; c < components(); ++c) {
    if (comp(c).is_zero()) continue;
    const Blade b{static_cast<std::uint32_t>(c)};
    const BladeProduct p =
        side == Side::Left ? blade_product(g, b) : blade_product(b, g);
    out.comp(static_cast<Index>(p.blade.mask)) +=
        comp(c) * static_cast<double>(p.sign);
  }
  return out;
}

PolyField PolyField::dirac(Side side, bool conjugated) const {
  PolyField out = zero(n_);
  for (int i = 0; i <= n_; ++i) {
    PolyField term = derivative(i).mul_generator(i, side);
    const double s = (conjugated && i >= 1) ? -1.0 : 1.0;
    for (Index c = 0; c < components(); ++c)
      out.comp(c) += term.comp(c) * s;
  }
  return out;
}

PolyField PolyField::bar() const {
  PolyField out = zero(n_);
  for (Index c = 0; c < components(); ++c) {
    const int g = std::popcount(static_cast<std::uint32_t>(c));
    out.comp(c) = comp(c) * static_cast<double>(bar_sign(g));
  }
  return out;
}

PolyField operator+(const PolyField& a, const PolyField& b) {
  PolyField out = a;
  for (Index c = 0; c < out.components(); ++c) out.comp(c) += b.comp(c);
  return out;
}

PolyField operator-(const PolyField& a, const PolyField& b) {
  PolyField out = a;
  for (Index c = 0; c < out.components(); ++c) out.comp(c) -= b.comp(c);
  return out;
}

PolyField operator*(const PolyField& a, const PolyField& b) {
  require(a.n() == b.n(), "polynomial field product: algebra mismatch");
  PolyField out = PolyField::zero(a.n());
  const SignTable& table = SignTable::get(a.n());
  for (Index ia = 0; ia < a.components(); ++ia) {
    if (a.comp(ia).is_zero()) continue;
    for (Index ib = 0; ib < b.components(); ++ib) {
      if (b.comp(ib).is_zero()) continue;
      const int s = table.sign(static_cast<std::uint32_t>(ia),
                               static_cast<std::uint32_t>(ib));
      out.comp(ia ^ ib) +=
          (a.comp(ia) * b.comp(ib)) * static_cast<double>(s);
    }
  }
  return out;
}

double PolyField::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& p : comps_) m = std::max(m, p.max_abs_coeff());
  return m;
}

PolyField PolyField::random(int n, int maxDegree, Rng& rng, int gradeCap) {
  PolyField out = zero(n);
  const int axes = n + 1;
  for (Index c = 0; c < out.components(); ++c) {
    if (gradeCap >= 0 &&
        std::popcount(static_cast<std::uint32_t>(c)) > gradeCap)
      continue;
    const int terms = static_cast<int>(rng.next_int(1, 4));
    for (int t = 0; t < terms; ++t) {
      Polynomial::Key key(static_cast<std::size_t>(axes), 0);
      int degreeLeft = maxDegree;
      for (int a = 0; a < axes; ++a) {
        const int e = static_cast<int>(rng.next_int(0, degreeLeft));
        key[static_cast<std::size_t>(a)] = e;
        degreeLeft -= e;
      }
      double coeff = static_cast<double>(rng.next_int(-9, 9));
      if (coeff == 0.0) coeff = 1.0;
      out.comp(c).add_term(key, coeff);
    }
  }
  return out;
}

}  // namespace diracl2

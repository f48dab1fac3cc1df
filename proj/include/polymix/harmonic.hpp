#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polymix {

/// Polynomial in (x, y, z) stored as monomial terms, with exact gradient.
/// The catalog entries are harmonic.
template <typename Scalar>
class HarmonicPolynomial {
 public:
  using Vec = Eigen::Matrix<Scalar, 3, 1>;

  struct Term {
    Scalar coef;
    int px, py, pz;
  };

  HarmonicPolynomial(std::string name, std::vector<Term> terms)
      : name_(std::move(name)), terms_(std::move(terms)) {
    for (const Term& t : terms_) degree_ = std::max(degree_, t.px + t.py + t.pz);
  }

  const std::string& name() const { return name_; }
  int degree() const { return degree_; }

  Scalar value(const Vec& X) const {
    Scalar sum = 0;
    for (const Term& t : terms_) sum += t.coef * ipow(X.x(), t.px) * ipow(X.y(), t.py) * ipow(X.z(), t.pz);
    return sum;
  }

  Vec gradient(const Vec& X) const {
    Vec g = Vec::Zero();
    for (const Term& t : terms_) {
      const Scalar ex = ipow(X.x(), t.px), ey = ipow(X.y(), t.py), ez = ipow(X.z(), t.pz);
      if (t.px) g.x() += t.coef * t.px * ipow(X.x(), t.px - 1) * ey * ez;
      if (t.py) g.y() += t.coef * t.py * ex * ipow(X.y(), t.py - 1) * ez;
      if (t.pz) g.z() += t.coef * t.pz * ex * ey * ipow(X.z(), t.pz - 1);
    }
    return g;
  }

  Scalar operator()(const Vec& X) const { return value(X); }

 private:
  static Scalar ipow(Scalar b, int e) {
    Scalar r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  }

  std::string name_;
  std::vector<Term> terms_;
  int degree_ = 0;
};

/// Constants, linear functions and the solid harmonics of degree 2 and 3.
template <typename Scalar>
std::vector<HarmonicPolynomial<Scalar>> harmonic_catalog(int max_degree = 3) {
  using P = HarmonicPolynomial<Scalar>;
  std::vector<P> all = {
      P("1", {{1, 0, 0, 0}}),
      P("x", {{1, 1, 0, 0}}),
      P("y", {{1, 0, 1, 0}}),
      P("z", {{1, 0, 0, 1}}),
      P("xy", {{1, 1, 1, 0}}),
      P("yz", {{1, 0, 1, 1}}),
      P("zx", {{1, 1, 0, 1}}),
      P("x2-y2", {{1, 2, 0, 0}, {-1, 0, 2, 0}}),
      P("2z2-x2-y2", {{2, 0, 0, 2}, {-1, 2, 0, 0}, {-1, 0, 2, 0}}),
      P("xyz", {{1, 1, 1, 1}}),
      P("x3-3xy2", {{1, 3, 0, 0}, {-3, 1, 2, 0}}),
      P("3x2y-y3", {{3, 2, 1, 0}, {-1, 0, 3, 0}}),
      P("z(x2-y2)", {{1, 2, 0, 1}, {-1, 0, 2, 1}}),
      P("x(4z2-x2-y2)", {{4, 1, 0, 2}, {-1, 3, 0, 0}, {-1, 1, 2, 0}}),
      P("y(4z2-x2-y2)", {{4, 0, 1, 2}, {-1, 2, 1, 0}, {-1, 0, 3, 0}}),
      P("z(2z2-3x2-3y2)", {{2, 0, 0, 3}, {-3, 2, 0, 1}, {-3, 0, 2, 1}}),
  };
  std::vector<P> out;
  for (P& p : all)
    if (p.degree() <= max_degree) out.push_back(std::move(p));
  return out;
}

template <typename Scalar>
std::optional<HarmonicPolynomial<Scalar>> find_harmonic(std::string_view name) {
  for (auto& p : harmonic_catalog<Scalar>())
    if (p.name() == name) return p;
  return std::nullopt;
}

}  // namespace polymix

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace polymix {

class SectorDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * Harmonic function b = r^beta sin(beta theta), beta = pi / (2 alpha), on the
 * wedge above D = {t = 0, y > 0} and N = {theta = alpha}, crease along the
 * x-axis, with polar coordinates y = r cos(theta), t = r sin(theta).
 *
 * b vanishes on D and its normal derivative vanishes on N. For apertures
 * alpha in [pi, 2 pi) its gradient is not square integrable on the boundary
 * near the crease. Points are (x, y, t).
 */
template <typename Scalar>
class SectorSolution {
 public:
  using Vec = Eigen::Matrix<Scalar, 3, 1>;

  struct Polar {
    Scalar r;
    Scalar theta;
  };

  explicit SectorSolution(Scalar aperture) : aperture_(aperture) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    if (!(aperture >= pi && aperture < 2 * pi))
      throw std::invalid_argument("sector aperture must lie in [pi, 2pi)");
    exponent_ = pi / (2 * aperture);
  }

  Scalar aperture() const { return aperture_; }
  Scalar exponent() const { return exponent_; }

  static Polar polar(const Vec& X) {
    Scalar theta = std::atan2(X.z(), X.y());
    if (theta < 0) theta += 2 * std::numbers::pi_v<Scalar>;
    return {std::hypot(X.y(), X.z()), theta};
  }

  /// Open wedge 0 < theta < alpha, off the crease.
  bool in_domain(const Vec& X) const {
    const Polar p = polar(X);
    return p.r > 0 && p.theta > 0 && p.theta < aperture_;
  }

  Scalar value(const Vec& X) const {
    const Polar p = checked_polar(X);
    return std::pow(p.r, exponent_) * std::sin(exponent_ * p.theta);
  }

  Vec gradient(const Vec& X) const {
    const Polar p = checked_polar(X);
    const Scalar scale = exponent_ * std::pow(p.r, exponent_ - 1);
    const Scalar dr = scale * std::sin(exponent_ * p.theta);      // d_r b
    const Scalar dtheta = scale * std::cos(exponent_ * p.theta);  // r^-1 d_theta b
    const Scalar c = std::cos(p.theta), s = std::sin(p.theta);
    return Vec(0, dr * c - dtheta * s, dr * s + dtheta * c);
  }

  /// |grad b| = beta r^(beta - 1), independent of theta.
  Scalar gradient_norm(Scalar r) const { return exponent_ * std::pow(r, exponent_ - 1); }

  /// d_theta b at polar (r, theta).
  Scalar angular_derivative(Scalar r, Scalar theta) const {
    return exponent_ * std::pow(r, exponent_) * std::cos(exponent_ * theta);
  }

 private:
  Polar checked_polar(const Vec& X) const {
    const Polar p = polar(X);
    if (!(p.r > 0)) throw SectorDomainError("point on the crease (r = 0): gradient is singular");
    if (p.theta > aperture_) throw SectorDomainError("point outside the sector");
    return p;
  }

  Scalar aperture_;
  Scalar exponent_;
};

/// Seven-point central-difference Laplacian of f at X.
template <typename Scalar, typename F>
Scalar discrete_laplacian(F&& f, const Eigen::Matrix<Scalar, 3, 1>& X, Scalar h) {
  const Scalar center = f(X);
  Scalar sum = 0;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Matrix<Scalar, 3, 1> step = Eigen::Matrix<Scalar, 3, 1>::Zero();
    step[axis] = h;
    sum += f(X + step) + f(X - step) - 2 * center;
  }
  return sum / (h * h);
}

/// Discrete Laplacian of b; every stencil point must lie in the open wedge.
template <typename Scalar>
Scalar check_harmonic(const SectorSolution<Scalar>& sol, const Eigen::Matrix<Scalar, 3, 1>& X,
                      Scalar h) {
  if (!(h > 0)) throw std::invalid_argument("stencil step must be positive");
  for (int axis = 0; axis < 3; ++axis)
    for (Scalar sign : {Scalar(-1), Scalar(0), Scalar(1)}) {
      Eigen::Matrix<Scalar, 3, 1> p = X;
      p[axis] += sign * h;
      if (!sol.in_domain(p)) throw SectorDomainError("stencil leaves the sector");
    }
  return discrete_laplacian<Scalar>([&](const auto& p) { return sol.value(p); }, X, h);
}

// ---------------------------------------------------------------------------
// Truncated boundary energy on D: I(eps) = int_eps^1 |grad b|^2 dr.

template <typename Scalar>
struct TruncatedEnergy {
  Scalar epsilon;
  Scalar closed_form;
  Scalar quadrature;
  Scalar quadrature_error;  // |Q(2m panels) - Q(m panels)|
};

template <typename Scalar>
bool is_log_law(const SectorSolution<Scalar>& sol) {
  return std::abs(1 - 2 * sol.exponent()) <= Scalar(1e-12);
}

template <typename Scalar>
Scalar truncated_energy_closed_form(const SectorSolution<Scalar>& sol, Scalar eps) {
  const Scalar beta = sol.exponent();
  const Scalar log_eps = std::log(eps);
  if (is_log_law(sol)) return -beta * beta * log_eps;
  return beta * beta * std::expm1((2 * beta - 1) * log_eps) / (1 - 2 * beta);
}

namespace detail {

// Composite 5-point Gauss-Legendre in s = log r, evaluating |grad b|^2 on D
// through the gradient itself.
template <typename Scalar>
Scalar energy_quadrature(const SectorSolution<Scalar>& sol, Scalar eps, int panels) {
  static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                  0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                    0.5688888888888889, 0.4786286704993665,
                                                    0.2369268850561891};
  using Vec = typename SectorSolution<Scalar>::Vec;
  const Scalar lo = std::log(eps), width = -lo / panels;
  Scalar total = 0;
  for (int p = 0; p < panels; ++p) {
    const Scalar mid = lo + (p + Scalar(0.5)) * width;
    for (int k = 0; k < 5; ++k) {
      const Scalar s = mid + Scalar(0.5) * width * Scalar(nodes[k]);
      const Scalar r = std::exp(s);
      const Scalar g2 = sol.gradient(Vec(0, r, 0)).squaredNorm();
      total += Scalar(weights[k]) * g2 * r;  // dr = r ds
    }
  }
  return total * Scalar(0.5) * width;
}

}  // namespace detail

template <typename Scalar>
TruncatedEnergy<Scalar> truncated_energy(const SectorSolution<Scalar>& sol, Scalar eps) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("truncation must lie in (0, 1]");
  if (eps == 1) return {eps, 0, 0, 0};
  const int panels = std::max(4, static_cast<int>(std::ceil(-4 * std::log(eps))));
  const Scalar coarse = detail::energy_quadrature(sol, eps, panels);
  const Scalar fine = detail::energy_quadrature(sol, eps, 2 * panels);
  return {eps, truncated_energy_closed_form(sol, eps), fine, std::abs(fine - coarse)};
}

/**
 * Blow-up of I(eps) as eps -> 0. The fitted exponent is the least-squares
 * slope of log(I(eps_{k+1}) - I(eps_k)) against log(eps_k) over consecutive
 * truncations, computed from the quadrature values; for a geometric
 * sequence of truncations the increments follow eps^(2 beta - 1) exactly.
 * At alpha = pi the growth is logarithmic and log_coefficient estimates
 * I(eps) / log(1/eps) at the smallest eps.
 */
template <typename Scalar>
struct BlowupReport {
  Scalar aperture;
  Scalar exponent;
  std::vector<TruncatedEnergy<Scalar>> rows;
  bool log_law;
  Scalar fitted_exponent;
  Scalar closed_form_exponent;
  Scalar log_coefficient;
};

template <typename Scalar>
BlowupReport<Scalar> blowup_study(const SectorSolution<Scalar>& sol, std::vector<Scalar> epsilons) {
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  BlowupReport<Scalar> rep{sol.aperture(), sol.exponent(), {}, is_log_law(sol),
                           std::numeric_limits<Scalar>::quiet_NaN(), 2 * sol.exponent() - 1,
                           std::numeric_limits<Scalar>::quiet_NaN()};
  for (Scalar e : epsilons) rep.rows.push_back(truncated_energy(sol, e));

  std::vector<Scalar> xs, ys;
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    const Scalar inc = rep.rows[k + 1].quadrature - rep.rows[k].quadrature;
    if (inc > 0) {
      xs.push_back(std::log(rep.rows[k].epsilon));
      ys.push_back(std::log(inc));
    }
  }
  if (xs.size() >= 2) {
    const Scalar n = static_cast<Scalar>(xs.size());
    Scalar mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= n, my /= n;
    Scalar sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.fitted_exponent = sxy / sxx;
  }
  if (!rep.rows.empty() && rep.rows.back().epsilon < 1)
    rep.log_coefficient = rep.rows.back().quadrature / -std::log(rep.rows.back().epsilon);
  return rep;
}

// ---------------------------------------------------------------------------
// Nontangential maximal function of |grad b| at a point of D.

/// Approach region {X : |X - P| < (1 + a) dist(X, boundary)} at
/// P = (0, distance, 0), truncated to |X - P| < truncation.
template <typename Scalar>
struct NtCone {
  Scalar distance;
  Scalar a;
  Scalar truncation;

  Eigen::Matrix<Scalar, 3, 1> base_point() const { return {0, distance, 0}; }
};

/// Distance from a wedge point to D union N (the two half-planes).
template <typename Scalar>
Scalar wedge_boundary_distance(const SectorSolution<Scalar>& sol, const Eigen::Matrix<Scalar, 3, 1>& X) {
  const auto p = SectorSolution<Scalar>::polar(X);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  auto to_half_plane = [&](Scalar plane_theta) {
    Scalar sep = std::abs(p.theta - plane_theta);
    sep = std::min(sep, 2 * pi - sep);
    return sep <= pi / 2 ? p.r * std::sin(sep) : p.r;
  };
  return std::min(to_half_plane(0), to_half_plane(sol.aperture()));
}

template <typename Scalar>
bool in_nt_cone(const SectorSolution<Scalar>& sol, const NtCone<Scalar>& cone,
                const Eigen::Matrix<Scalar, 3, 1>& X) {
  if (!sol.in_domain(X)) return false;
  const Scalar dist_p = (X - cone.base_point()).norm();
  return dist_p < cone.truncation && dist_p < (1 + cone.a) * wedge_boundary_distance(sol, X);
}

/// Infimum of the crease distance r over the cone, by grid search in the
/// plane x = 0 (moving along x only increases |X - P|) with successive local
/// refinement.
template <typename Scalar>
Scalar min_crease_distance(const SectorSolution<Scalar>& sol, const NtCone<Scalar>& cone) {
  if (!(cone.distance > 0)) throw std::invalid_argument("base point must be off the crease");
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Vec P = cone.base_point();
  Scalar best = std::numeric_limits<Scalar>::infinity();
  Scalar best_phi = pi / 2, best_s = 0;
  Scalar phi_lo = 0, phi_hi = pi, s_lo = 0, s_hi = cone.truncation;
  for (int round = 0; round < 8; ++round) {
    const int m = round == 0 ? 600 : 80;
    for (int i = 0; i <= m; ++i) {
      const Scalar phi = phi_lo + (phi_hi - phi_lo) * i / m;
      for (int j = 1; j <= m; ++j) {
        const Scalar s = s_lo + (s_hi - s_lo) * j / m;
        const Vec X = P + s * Vec(0, std::cos(phi), std::sin(phi));
        if (!in_nt_cone(sol, cone, X)) continue;
        const Scalar r = std::hypot(X.y(), X.z());
        if (r < best) best = r, best_phi = phi, best_s = s;
      }
    }
    if (!std::isfinite(best)) break;
    const Scalar dphi = 4 * (phi_hi - phi_lo) / m, ds = 4 * (s_hi - s_lo) / m;
    phi_lo = std::max<Scalar>(0, best_phi - dphi), phi_hi = std::min(pi, best_phi + dphi);
    s_lo = std::max<Scalar>(0, best_s - ds), s_hi = std::min(cone.truncation, best_s + ds);
  }
  return best;
}

template <typename Scalar>
struct NtMaxEstimate {
  Scalar estimate;         // max |grad b| over accepted samples
  Scalar sampled_r_min;    // smallest crease distance among them
  std::uint64_t accepted;
  Scalar r_min;            // from min_crease_distance
  Scalar limit;            // beta * r_min^(beta - 1)
};

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1, r = 0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace detail

/// Supremum of |grad b| over the first n points of a 2D Halton sequence in
/// the cone's slice x = 0, in polar coordinates about P (radius uniform on
/// [0, truncation)). Projecting any cone point onto x = 0 keeps it in the
/// cone with the same |grad b|, since both boundary half-planes are x-invariant
/// and |grad b| depends on r only, so the slice carries the full supremum.
template <typename Scalar>
NtMaxEstimate<Scalar> estimate_ntmax(const SectorSolution<Scalar>& sol, const NtCone<Scalar>& cone,
                                     std::uint64_t n) {
  if (!(cone.distance > 0)) throw std::invalid_argument("base point must be off the crease");
  if (!(cone.a > 0) || !(cone.truncation > 0)) throw std::invalid_argument("bad cone parameters");
  using Vec = Eigen::Matrix<Scalar, 3, 1>;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Vec P = cone.base_point();
  NtMaxEstimate<Scalar> out{0, std::numeric_limits<Scalar>::infinity(), 0, 0, 0};
  for (std::uint64_t i = 1; i <= n; ++i) {
    const Scalar rad = cone.truncation * Scalar(detail::radical_inverse(i, 2));
    const Scalar phi = 2 * pi * Scalar(detail::radical_inverse(i, 3));
    const Vec X = P + rad * Vec(0, std::cos(phi), std::sin(phi));
    if (!in_nt_cone(sol, cone, X)) continue;
    ++out.accepted;
    const Scalar r = std::hypot(X.y(), X.z());
    out.sampled_r_min = std::min(out.sampled_r_min, r);
    out.estimate = std::max(out.estimate, sol.gradient(X).norm());
  }
  out.r_min = min_crease_distance(sol, cone);
  out.limit = sol.gradient_norm(out.r_min);
  return out;
}

}  // namespace polymix

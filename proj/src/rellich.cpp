#include "polymix/rellich.hpp"

#include "polymix/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace polymix {

namespace {

Estimate sum(std::initializer_list<Estimate> parts) {
  Estimate out;
  double var = 0;
  for (const Estimate& e : parts) {
    out.value += e.value;
    var += e.std_error * e.std_error;
  }
  out.std_error = std::sqrt(var);
  return out;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

// Integrand pieces in the frame with the vertex at the origin.
struct Local {
  Vec3 x;
  Vec3 w;
  Vec3 grad;
};

Local localize(const Vec3& point, const Vec3& origin, const HarmonicFunction& u) {
  const Vec3 x = point - origin;
  return {x, x.normalized(), u.gradient(x)};
}

Estimate volume_term(const ArchSamples& s, const HarmonicFunction& u) {
  const Vec3 o = s.arch.center();
  return integrate(s.volume, [&](const Vec3& p, std::size_t) {
    const Local l = localize(p, o, u);
    const double wg = l.w.dot(l.grad);
    return 2 * wg * wg / l.x.norm();
  });
}

}  // namespace

ArchSamples sample_arch_boundary(const ArchRegion& arch, std::uint64_t n, std::uint64_t seed,
                                 const SamplingOptions& opt) {
  return ArchSamples{arch,
                     sample_arch(arch, n, derive_seed(seed, 101, 0), opt),
                     sample_base(*arch.surface, arch.vertex, arch.r, n, derive_seed(seed, 102, 0), opt),
                     sample_base(*arch.surface, arch.vertex, arch.R, n, derive_seed(seed, 103, 0), opt),
                     sample_lateral(arch, n, derive_seed(seed, 104, 0), opt)};
}

double RellichResult::combined_stderr() const {
  return std::hypot(lhs.std_error, rhs.std_error);
}

double RellichResult::relative_residual() const {
  const double scale = std::max({std::abs(lhs.value), std::abs(rhs.value), std::abs(inner_base.value),
                                 std::abs(outer_base.value), std::abs(lateral.value)});
  if (scale == 0) return 0;
  return std::abs(lhs.value - rhs.value) / scale;
}

RellichResult rellich_identity(const ArchSamples& s, const HarmonicFunction& u) {
  const Vec3 o = s.arch.center();
  RellichResult res;
  res.u_name = u.name();
  res.vertex = s.arch.vertex;
  res.r = s.arch.r;
  res.R = s.arch.R;
  res.lhs = volume_term(s, u);

  // nu = -W: -|grad u|^2 + 2 (W.grad u)^2
  res.inner_base = integrate(s.inner_base, [&](const Vec3& p, std::size_t) {
    const Local l = localize(p, o, u);
    const double wg = l.w.dot(l.grad);
    return -l.grad.squaredNorm() + 2 * wg * wg;
  });
  // nu = W: |grad u|^2 - 2 (W.grad u)^2
  res.outer_base = integrate(s.outer_base, [&](const Vec3& p, std::size_t) {
    const Local l = localize(p, o, u);
    const double wg = l.w.dot(l.grad);
    return l.grad.squaredNorm() - 2 * wg * wg;
  });
  res.lateral = integrate(s.lateral, [&](const Vec3& p, std::size_t i) {
    const Local l = localize(p, o, u);
    const Vec3& nu = s.lateral.normals[i];
    return nu.dot(l.w) * l.grad.squaredNorm() - 2 * nu.dot(l.grad) * l.w.dot(l.grad);
  });
  res.rhs = sum({res.inner_base, res.outer_base, res.lateral});
  return res;
}

RellichResult rellich_identity(const ArchRegion& arch, const HarmonicFunction& u, std::uint64_t n,
                               std::uint64_t seed, const SamplingOptions& opt) {
  return rellich_identity(sample_arch_boundary(arch, n, seed, opt), u);
}

RellichBound rellich_estimate(const ArchSamples& s, const HarmonicFunction& u) {
  const Vec3 o = s.arch.center();
  RellichBound b;
  b.u_name = u.name();
  b.lhs = volume_term(s, u);
  b.outer_base = integrate(s.outer_base, [&](const Vec3& p, std::size_t) {
    return localize(p, o, u).grad.squaredNorm();
  });
  b.inner_base = integrate(s.inner_base, [&](const Vec3& p, std::size_t) {
    const Local l = localize(p, o, u);
    const double wg = l.w.dot(l.grad);
    return 2 * wg * wg;
  });
  b.lateral = integrate(s.lateral, [&](const Vec3& p, std::size_t i) {
    const Local l = localize(p, o, u);
    const Vec3& nu = s.lateral.normals[i];
    const double normal = nu.dot(l.grad);
    const Vec3 tangential = l.grad - normal * nu;
    return 2 * std::abs(normal) * tangential.norm();
  });
  b.rhs = sum({b.outer_base, b.inner_base, b.lateral});
  b.slack = {b.rhs.value - b.lhs.value, std::hypot(b.rhs.std_error, b.lhs.std_error)};
  return b;
}

RellichBound rellich_estimate(const ArchRegion& arch, const HarmonicFunction& u, std::uint64_t n,
                              std::uint64_t seed, const SamplingOptions& opt) {
  return rellich_estimate(sample_arch_boundary(arch, n, seed, opt), u);
}

std::string rellich_csv(const std::string& fixture, const std::vector<RellichResult>& rows) {
  std::string out = "fixture,vertex,r,R,u_name,lhs,lhs_stderr,rhs,rhs_stderr,residual\n";
  for (const RellichResult& r : rows) {
    out += fixture + ',' + std::to_string(r.vertex) + ',';
    for (double v : {r.r, r.R}) append_double(out, v), out += ',';
    out += r.u_name + ',';
    append_double(out, r.lhs.value), out += ',';
    append_double(out, r.lhs.std_error), out += ',';
    append_double(out, r.rhs.value), out += ',';
    append_double(out, r.rhs.std_error), out += ',';
    append_double(out, r.relative_residual());
    out += '\n';
  }
  return out;
}

}  // namespace polymix

#pragma once

#include "polymix/harmonic.hpp"
#include "polymix/sampling.hpp"

#include <string>
#include <vector>

namespace polymix {

using HarmonicFunction = HarmonicPolynomial<double>;

/// The four independent sample batches of one arch: the solid shell, the
/// inner and outer spherical bases and the lateral faces.
struct ArchSamples {
  ArchRegion arch;
  SampleBatch volume;
  SampleBatch inner_base;
  SampleBatch outer_base;
  SampleBatch lateral;
};

ArchSamples sample_arch_boundary(const ArchRegion& arch, std::uint64_t n, std::uint64_t seed,
                                 const SamplingOptions& opt = {});

/**
 * Both sides of the radial Rellich identity on an arch with W = X/|X| and
 * the vertex moved to the origin:
 *
 *   lhs = 2 int_A (W.grad u)^2 / |X| dX
 *   rhs = int_dA (nu.W) |grad u|^2 - 2 (d_nu u)(W.grad u) ds
 *
 * with nu = -W on the inner base, +W on the outer base and the face normal
 * on the lateral part.
 */
struct RellichResult {
  std::string u_name;
  int vertex = 0;
  double r = 0, R = 0;
  Estimate lhs;
  Estimate rhs;
  Estimate inner_base;
  Estimate outer_base;
  Estimate lateral;

  double combined_stderr() const;
  /// |lhs - rhs| divided by the largest magnitude among lhs, rhs and the
  /// three boundary pieces; zero when all vanish. Normalizing by lhs alone
  /// would measure the cancellation between the boundary pieces instead of
  /// the quadrature error (pyramid apex, u = xy: lhs is 6% of the outer base).
  double relative_residual() const;
};

RellichResult rellich_identity(const ArchSamples& samples, const HarmonicFunction& u);
RellichResult rellich_identity(const ArchRegion& arch, const HarmonicFunction& u, std::uint64_t n,
                               std::uint64_t seed, const SamplingOptions& opt = {});

/// The upper bound obtained from the identity by discarding signed terms:
///   lhs <= int_{B(R)} |grad u|^2 + 2 int_{B(r)} (W.grad u)^2
///          + 2 int_{lateral} |d_nu u| |grad_t u|
struct RellichBound {
  std::string u_name;
  Estimate lhs;
  Estimate rhs;
  Estimate outer_base;
  Estimate inner_base;
  Estimate lateral;
  Estimate slack;  // rhs - lhs
};

RellichBound rellich_estimate(const ArchSamples& samples, const HarmonicFunction& u);
RellichBound rellich_estimate(const ArchRegion& arch, const HarmonicFunction& u, std::uint64_t n,
                              std::uint64_t seed, const SamplingOptions& opt = {});

/// CSV: fixture,vertex,r,R,u_name,lhs,lhs_stderr,rhs,rhs_stderr,residual
std::string rellich_csv(const std::string& fixture, const std::vector<RellichResult>& rows);

}  // namespace polymix

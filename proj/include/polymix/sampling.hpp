#pragma once

#include "polymix/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polymix {

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated cone: the solid within distance r of a vertex. Non-owning
/// reference to the surface.
struct ConeRegion {
  const Surface* surface;
  int vertex;
  double r;
};

/// Arch: the solid between distances r and R of a vertex.
struct ArchRegion {
  const Surface* surface;
  int vertex;
  double r;
  double R;

  const Vec3& center() const { return surface->vertex(vertex); }
};

/// Both constructors require radii at most 0.9 * separation_radius(v).
ConeRegion make_cone(const Surface& s, int vertex, double r);
ArchRegion make_arch(const Surface& s, int vertex, double r, double R);

enum class RegionTag { ArchVolume, BaseSphere, Lateral };
std::string_view to_string(RegionTag tag);

/// Accepted sample points of one rejection-sampling run. Every accepted point
/// carries the same weight proposal_measure / proposals, so the sum of
/// weights is an unbiased estimate of the region's measure.
struct SampleBatch {
  RegionTag region;
  std::vector<Vec3> points;
  // Base: outward radial unit vector. Lateral: outward face normal.
  std::vector<Vec3> normals;
  std::uint64_t proposals = 0;
  double proposal_measure = 0;
  std::uint64_t seed = 0;

  double weight() const { return proposal_measure / static_cast<double>(proposals); }
  double measure() const { return weight() * static_cast<double>(points.size()); }
  double acceptance() const { return static_cast<double>(points.size()) / static_cast<double>(proposals); }
  double measure_stderr() const {
    const double p = acceptance();
    return proposal_measure * std::sqrt(p * (1 - p) / static_cast<double>(proposals));
  }
};

struct Estimate {
  double value = 0;
  double std_error = 0;
};

/// Monte Carlo estimate of the integral of g over the sampled region, with
/// the standard error of the mean over all proposals (rejections count as
/// zeros). g is called as g(point, index).
template <typename G>
Estimate integrate(const SampleBatch& batch, G&& g) {
  double sum = 0, sum_sq = 0;
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    const double y = g(batch.points[i], i);
    sum += y;
    sum_sq += y * y;
  }
  const double n = static_cast<double>(batch.proposals);
  const double m = batch.proposal_measure;
  const double mean = m * sum / n;
  const double second = m * m * sum_sq / n;
  const double var = std::max(0.0, second - mean * mean);
  return {mean, n > 1 ? std::sqrt(var / (n - 1)) : 0.0};
}

struct SamplingOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t shard_size = 1 << 16;
  double min_acceptance = 1e-4;
};

/// Uniform samples in the shell r <= |X - v| <= R, rejected to the solid.
SampleBatch sample_arch(const ArchRegion& a, std::uint64_t n, std::uint64_t seed,
                        const SamplingOptions& opt = {});
/// Uniform samples on the sphere |X - v| = r, rejected to the solid.
SampleBatch sample_base(const Surface& s, int vertex, double r, std::uint64_t n,
                        std::uint64_t seed, const SamplingOptions& opt = {});
SampleBatch sample_base(const ConeRegion& c, std::uint64_t n, std::uint64_t seed,
                        const SamplingOptions& opt = {});
/// Area-weighted samples on the faces near v, rejected to the shell.
SampleBatch sample_lateral(const ArchRegion& a, std::uint64_t n, std::uint64_t seed,
                           const SamplingOptions& opt = {});

}  // namespace polymix

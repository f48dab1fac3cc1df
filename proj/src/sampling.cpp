#include "polymix/sampling.hpp"

#include "polymix/random.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>
#include <thread>

namespace polymix {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 uniform_direction(Rng& rng) {
  const double z = rng.uniform(-1, 1);
  const double phi = 2 * kPi * rng.uniform();
  const double rho = std::sqrt(std::max(0.0, 1 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

struct Shard {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
};

// Splits n proposals into fixed-size shards with seeds derived from
// (seed, stream, shard index) and concatenates results in shard order, so
// the batch does not depend on the thread count.
template <typename Fn>
SampleBatch run_sharded(RegionTag tag, std::uint64_t n, std::uint64_t seed, std::uint64_t stream,
                        double proposal_measure, const SamplingOptions& opt, Fn&& fn) {
  if (n == 0) throw std::invalid_argument("sample count must be at least 1");
  const std::uint64_t shard_size = std::max<std::uint64_t>(1, opt.shard_size);
  const std::uint64_t shards = (n + shard_size - 1) / shard_size;
  std::vector<Shard> results(shards);

  auto work = [&](std::uint64_t first, std::uint64_t step) {
    for (std::uint64_t i = first; i < shards; i += step) {
      Rng rng(derive_seed(seed, stream, i));
      const std::uint64_t count = std::min(shard_size, n - i * shard_size);
      fn(rng, count, results[i]);
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, shards));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  SampleBatch batch{tag, {}, {}, n, proposal_measure, seed};
  std::size_t total = 0;
  for (const Shard& s : results) total += s.points.size();
  batch.points.reserve(total);
  batch.normals.reserve(total);
  for (Shard& s : results) {
    batch.points.insert(batch.points.end(), s.points.begin(), s.points.end());
    batch.normals.insert(batch.normals.end(), s.normals.begin(), s.normals.end());
  }
  if (batch.acceptance() < opt.min_acceptance) {
    std::ostringstream msg;
    msg << "acceptance ratio " << batch.acceptance() << " below " << opt.min_acceptance << " for "
        << to_string(tag) << " sampling; use a smaller shell or a vertex with a wider cone";
    throw SamplingError(msg.str());
  }
  return batch;
}

void check_radius(const Surface& s, int vertex, double radius) {
  const double rho = separation_radius(s, vertex);
  if (!(radius <= 0.9 * rho)) {
    std::ostringstream msg;
    msg << "radius " << radius << " exceeds 0.9 * separation radius " << rho << " at vertex "
        << vertex;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ConeRegion make_cone(const Surface& s, int vertex, double r) {
  if (vertex < 0 || vertex >= s.vertex_count()) throw std::invalid_argument("vertex out of range");
  if (!(r > 0)) throw std::invalid_argument("cone radius must be positive");
  check_radius(s, vertex, r);
  return {&s, vertex, r};
}

ArchRegion make_arch(const Surface& s, int vertex, double r, double R) {
  if (vertex < 0 || vertex >= s.vertex_count()) throw std::invalid_argument("vertex out of range");
  if (!(r > 0)) throw std::invalid_argument("arch inner radius must be positive");
  if (!(R > r)) throw std::invalid_argument("arch outer radius must exceed inner radius");
  check_radius(s, vertex, R);
  return {&s, vertex, r, R};
}

std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::ArchVolume: return "arch_volume";
    case RegionTag::BaseSphere: return "base_sphere";
    case RegionTag::Lateral: return "lateral";
  }
  return "unknown";
}

SampleBatch sample_arch(const ArchRegion& a, std::uint64_t n, std::uint64_t seed,
                        const SamplingOptions& opt) {
  const PointLocator locator(*a.surface);
  const Vec3 v = a.center();
  const double r3 = a.r * a.r * a.r, R3 = a.R * a.R * a.R;
  const double shell = 4.0 / 3.0 * kPi * (R3 - r3);
  return run_sharded(RegionTag::ArchVolume, n, seed, 1, shell, opt,
                     [&](Rng& rng, std::uint64_t count, Shard& out) {
                       for (std::uint64_t i = 0; i < count; ++i) {
                         const Vec3 dir = uniform_direction(rng);
                         const double rad = std::cbrt(r3 + rng.uniform() * (R3 - r3));
                         const Vec3 x = v + rad * dir;
                         if (locator.inside(x)) out.points.push_back(x);
                       }
                     });
}

SampleBatch sample_base(const Surface& s, int vertex, double r, std::uint64_t n,
                        std::uint64_t seed, const SamplingOptions& opt) {
  if (!(r > 0)) throw std::invalid_argument("base radius must be positive");
  const PointLocator locator(s);
  const Vec3 v = s.vertex(vertex);
  return run_sharded(RegionTag::BaseSphere, n, seed, 2, 4 * kPi * r * r, opt,
                     [&](Rng& rng, std::uint64_t count, Shard& out) {
                       for (std::uint64_t i = 0; i < count; ++i) {
                         const Vec3 dir = uniform_direction(rng);
                         const Vec3 x = v + r * dir;
                         if (locator.inside(x)) {
                           out.points.push_back(x);
                           out.normals.push_back(dir);
                         }
                       }
                     });
}

SampleBatch sample_base(const ConeRegion& c, std::uint64_t n, std::uint64_t seed,
                        const SamplingOptions& opt) {
  return sample_base(*c.surface, c.vertex, c.r, n, seed, opt);
}

SampleBatch sample_lateral(const ArchRegion& a, std::uint64_t n, std::uint64_t seed,
                           const SamplingOptions& opt) {
  const Surface& s = *a.surface;
  const Vec3 v = a.center();
  struct Tri {
    Vec3 p0, e1, e2, normal;
  };
  std::vector<Tri> tris;
  std::vector<double> cumulative;
  double total = 0;
  for (int f = 0; f < s.face_count(); ++f) {
    if (point_face_distance(s, f, v) > a.R) continue;
    const Vec3 normal = s.face_normal(f);
    for (const auto& t : triangulate_face(s, f)) {
      const Vec3 p0 = s.vertex(t[0]);
      Tri tri{p0, s.vertex(t[1]) - p0, s.vertex(t[2]) - p0, normal};
      total += 0.5 * tri.e1.cross(tri.e2).norm();
      tris.push_back(tri);
      cumulative.push_back(total);
    }
  }
  if (tris.empty()) throw SamplingError("no faces within the outer radius");

  return run_sharded(RegionTag::Lateral, n, seed, 3, total, opt,
                     [&](Rng& rng, std::uint64_t count, Shard& out) {
                       for (std::uint64_t i = 0; i < count; ++i) {
                         const double pick = rng.uniform() * total;
                         auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
                         const Tri& t = tris[std::min<std::size_t>(it - cumulative.begin(), tris.size() - 1)];
                         double u = rng.uniform(), w = rng.uniform();
                         if (u + w > 1) u = 1 - u, w = 1 - w;
                         const Vec3 x = t.p0 + u * t.e1 + w * t.e2;
                         const double d = (x - v).norm();
                         if (d >= a.r && d <= a.R) {
                           out.points.push_back(x);
                           out.normals.push_back(t.normal);
                         }
                       }
                     });
}

}  // namespace polymix

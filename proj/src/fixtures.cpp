#include "polymix/fixtures.hpp"

#include "polymix/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace polymix {

namespace {

// Flips faces of a convex polytope so they face away from its centroid.
std::vector<Face> orient_outward(const std::vector<Vec3>& v, std::vector<Face> faces) {
  Vec3 center = Vec3::Zero();
  for (const Vec3& p : v) center += p;
  center /= static_cast<double>(v.size());
  for (Face& f : faces) {
    Vec3 n = (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]);
    if (n.dot(v[f[0]] - center) < 0) std::reverse(f.begin(), f.end());
  }
  return faces;
}

}  // namespace

Surface make_cube() {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  std::vector<Face> f = {
      {0, 2, 3, 1},  // z = 0
      {4, 5, 7, 6},  // z = 1
      {0, 1, 5, 4},  // y = 0
      {2, 6, 7, 3},  // y = 1
      {0, 4, 6, 2},  // x = 0
      {1, 3, 7, 5},  // x = 1
  };
  return Surface(std::move(v), std::move(f));
}

Surface make_regular_tetrahedron() {
  const double s3 = std::sqrt(3.0);
  std::vector<Vec3> v = {{0, 0, 0},
                         {1, 0, 0},
                         {0.5, s3 / 2, 0},
                         {0.5, s3 / 6, std::sqrt(2.0 / 3.0)}};
  std::vector<Face> f = orient_outward(v, {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 3}});
  return Surface(std::move(v), std::move(f));
}

Surface make_square_pyramid() {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}};
  std::vector<Face> f = {{0, 2, 1}, {0, 3, 2}, {0, 4, 3}, {0, 1, 4}, {1, 2, 3, 4}};
  return Surface(std::move(v), std::move(f));
}

Surface extrude_polygon(const std::vector<Eigen::Vector2d>& polygon, double z0, double z1) {
  const int n = static_cast<int>(polygon.size());
  std::vector<Vec3> v;
  for (const auto& p : polygon) v.emplace_back(p.x(), p.y(), z0);
  for (const auto& p : polygon) v.emplace_back(p.x(), p.y(), z1);
  std::vector<Face> f;
  Face bottom, top;
  for (int i = n - 1; i >= 0; --i) bottom.push_back(i);
  for (int i = 0; i < n; ++i) top.push_back(n + i);
  f.push_back(std::move(bottom));
  f.push_back(std::move(top));
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    f.push_back({i, j, n + j, n + i});
  }
  return Surface(std::move(v), std::move(f));
}

Surface make_l_prism() {
  return extrude_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, 0, 1);
}

Surface make_notched_box(const NotchedBoxParams& p) {
  if (p.notches < 0 || p.width <= 0 || p.height <= 0 || p.thickness <= 0 ||
      p.notch_depth <= 0 || p.notch_depth >= 1)
    throw std::invalid_argument("bad notched box parameters");
  const double W = p.width, H = p.height, d = p.notch_depth * H;
  std::vector<Eigen::Vector2d> poly = {{0, 0}, {W, 0}};
  double right = W;
  if (p.corner_notch) {
    const double cw = W / (2.0 * p.notches + 3.0);
    poly.emplace_back(W, H - d);
    poly.emplace_back(W - cw, H - d);
    poly.emplace_back(W - cw, H);
    right = W - cw;
  } else {
    poly.emplace_back(W, H);
  }
  const double seg = right / (2.0 * p.notches + 1.0);
  for (int j = p.notches - 1; j >= 0; --j) {
    const double xr = (2 * j + 2) * seg, xl = (2 * j + 1) * seg;
    poly.emplace_back(xr, H);
    poly.emplace_back(xr, H - d);
    poly.emplace_back(xl, H - d);
    poly.emplace_back(xl, H);
  }
  poly.emplace_back(0, H);
  return extrude_polygon(poly, 0, p.thickness);
}

NotchedBoxParams random_notched_box_params(std::uint64_t seed, int notches, bool corner_notch) {
  Rng rng(mix_seed(seed));
  NotchedBoxParams p;
  p.width = rng.uniform(3, 6);
  p.height = rng.uniform(1, 3);
  p.thickness = rng.uniform(0.5, 2);
  p.notch_depth = rng.uniform(0.2, 0.8);
  p.notches = notches;
  p.corner_notch = corner_notch;
  return p;
}

// Incremental hull; O(n * faces), adequate for fixture generation.
Surface convex_hull(const std::vector<Vec3>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::invalid_argument("convex hull needs at least 4 points");
  Eigen::AlignedBox3d box;
  for (const Vec3& p : pts) box.extend(p);
  const double eps = 1e-12 * box.diagonal().norm();

  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0;
  for (int i = 0; i < n; ++i)
    if (double d = (pts[i] - pts[i0]).norm(); d > best) best = d, i1 = i;
  best = 0;
  for (int i = 0; i < n; ++i)
    if (double d = (pts[i] - pts[i0]).cross(pts[i1] - pts[i0]).norm(); d > best) best = d, i2 = i;
  best = 0;
  Vec3 n012 = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  for (int i = 0; i < n; ++i)
    if (double d = std::abs(n012.dot(pts[i] - pts[i0])); d > best) best = d, i3 = i;
  if (i1 < 0 || i2 < 0 || i3 < 0 || best <= eps * n012.norm())
    throw std::invalid_argument("convex hull input is degenerate");

  struct Tri {
    std::array<int, 3> v;
    Vec3 normal;
    bool alive;
  };
  std::vector<Tri> tris;
  auto add = [&](int a, int b, int c) {
    Vec3 nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    tris.push_back(Tri{{a, b, c}, nrm.normalized(), true});
  };
  if (n012.dot(pts[i3] - pts[i0]) > 0) {
    add(i0, i2, i1), add(i0, i1, i3), add(i1, i2, i3), add(i2, i0, i3);
  } else {
    add(i0, i1, i2), add(i0, i3, i1), add(i1, i3, i2), add(i2, i3, i0);
  }

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      if (tris[t].alive && tris[t].normal.dot(pts[p] - pts[tris[t].v[0]]) > eps)
        visible.push_back(t);
    if (visible.empty()) continue;
    std::set<std::pair<int, int>> directed;
    for (int t : visible)
      for (int k = 0; k < 3; ++k) directed.emplace(tris[t].v[k], tris[t].v[(k + 1) % 3]);
    for (int t : visible) tris[t].alive = false;
    for (auto [a, b] : directed)
      if (!directed.count({b, a})) add(a, b, p);
  }

  std::unordered_map<int, int> remap;
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  for (const Tri& t : tris) {
    if (!t.alive) continue;
    Face f;
    for (int v : t.v) {
      auto [it, inserted] = remap.try_emplace(v, static_cast<int>(verts.size()));
      if (inserted) verts.push_back(pts[v]);
      f.push_back(it->second);
    }
    faces.push_back(std::move(f));
  }
  return Surface(std::move(verts), std::move(faces));
}

Surface random_sphere_hull(int n, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = rng.uniform(-1, 1);
    const double phi = 2 * std::numbers::pi * rng.uniform();
    const double rho = std::sqrt(std::max(0.0, 1 - z * z));
    pts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return convex_hull(pts);
}

Surface random_star_sphere(int levels, double amplitude, std::uint64_t seed) {
  std::vector<Vec3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> tris = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                          {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      return mid[key] = static_cast<int>(v.size()) - 1;
    };
    std::vector<std::array<int, 3>> next;
    for (auto [a, b, c] : tris) {
      int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  Rng rng(mix_seed(seed));
  for (Vec3& p : v) p *= 1 + amplitude * rng.uniform(-1, 1);
  std::vector<Face> faces;
  for (auto [a, b, c] : tris) faces.push_back({a, b, c});
  return Surface(std::move(v), std::move(faces));
}

std::vector<std::string> builtin_fixture_names() {
  return {"cube", "tetrahedron", "square_pyramid", "l_prism",
          "notched_box_1", "notched_box_2", "notched_box_corner"};
}

std::optional<Surface> builtin_fixture(std::string_view name) {
  if (name == "cube") return make_cube();
  if (name == "tetrahedron") return make_regular_tetrahedron();
  if (name == "square_pyramid") return make_square_pyramid();
  if (name == "l_prism") return make_l_prism();
  if (name == "notched_box_1") return make_notched_box({4, 2, 1, 1, false, 0.5});
  if (name == "notched_box_2") return make_notched_box({5, 2, 1, 2, false, 0.5});
  if (name == "notched_box_corner") return make_notched_box({4, 2, 1, 1, true, 0.5});
  return std::nullopt;
}

}  // namespace polymix

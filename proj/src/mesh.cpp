#include "polymix/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace polymix {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Orthonormal in-plane basis for a face with unit normal n.
std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 u = n.cross(helper).normalized();
  Vec3 w = n.cross(u);
  return {u, w};
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool point_in_triangle_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  double d1 = cross2(b - a, p - a);
  double d2 = cross2(c - b, p - b);
  double d3 = cross2(a - c, p - c);
  return d1 >= 0 && d2 >= 0 && d3 >= 0;
}

std::vector<std::array<int, 3>> ear_clip(const Surface& s, int f) {
  const Face& poly = s.face(f);
  auto [u, w] = plane_basis(s.face_normal(f));
  std::vector<Eigen::Vector2d> p2;
  for (int v : poly) p2.emplace_back(s.vertex(v).dot(u), s.vertex(v).dot(w));

  std::vector<int> idx(poly.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<int, 3>> tris;
  std::size_t guard = 0;
  while (idx.size() > 3 && guard++ < 4 * poly.size() * poly.size()) {
    bool clipped = false;
    const std::size_t n = idx.size();
    for (std::size_t i = 0; i < n; ++i) {
      int ia = idx[(i + n - 1) % n], ib = idx[i], ic = idx[(i + 1) % n];
      if (cross2(p2[ib] - p2[ia], p2[ic] - p2[ib]) <= 0) continue;  // reflex
      bool empty = true;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (point_in_triangle_2d(p2[j], p2[ia], p2[ib], p2[ic])) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      tris.push_back({poly[ia], poly[ib], poly[ic]});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) break;
  }
  if (idx.size() == 3) tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
  return tris;
}

}  // namespace

Surface::Surface(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int nv = vertex_count();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& face = faces_[f];
    if (face.size() < 3)
      throw std::invalid_argument("face " + std::to_string(f) +
                                  " has fewer than 3 vertices");
    for (int v : face)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("face " + std::to_string(f) +
                                    " references vertex out of range");
    Face sorted = face;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("face " + std::to_string(f) +
                                  " repeats a vertex");
  }

  std::unordered_map<std::uint64_t, int> lookup;
  face_edges_.resize(faces_.size());
  vertex_faces_.resize(vertices_.size());
  for (int f = 0; f < face_count(); ++f) {
    const Face& face = faces_[f];
    const int n = static_cast<int>(face.size());
    face_edges_[f].reserve(n);
    for (int k = 0; k < n; ++k) {
      int a = face[k], b = face[(k + 1) % n];
      vertex_faces_[a].push_back(f);
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), edge_count());
      if (inserted) edges_.push_back(Edge{std::min(a, b), std::max(a, b), {}});
      Edge& e = edges_[it->second];
      e.uses.push_back(EdgeUse{f, a == e.v0});
      face_edges_[f].push_back(it->second);
    }
  }
}

std::optional<int> Surface::find_edge(int a, int b) const {
  for (int f : vertex_faces_[a])
    for (int e : face_edges_[f]) {
      const Edge& edge = edges_[e];
      if ((edge.v0 == a && edge.v1 == b) || (edge.v0 == b && edge.v1 == a))
        return e;
    }
  return std::nullopt;
}

std::vector<int> Surface::face_neighbors(int f) const {
  std::vector<int> out;
  for (int e : face_edges_[f]) {
    const Edge& edge = edges_[e];
    if (!edge.manifold()) continue;
    out.push_back(edge.uses[0].face == f ? edge.uses[1].face : edge.uses[0].face);
  }
  return out;
}

Vec3 Surface::vector_area(int f) const {
  const Face& face = faces_[f];
  Vec3 sum = Vec3::Zero();
  const std::size_t n = face.size();
  const Vec3& origin = vertices_[face[0]];
  for (std::size_t k = 1; k + 1 < n; ++k)
    sum += (vertices_[face[k]] - origin).cross(vertices_[face[k + 1]] - origin);
  return 0.5 * sum;
}

Vec3 Surface::face_normal(int f) const { return vector_area(f).normalized(); }

Vec3 Surface::face_centroid(int f) const {
  Vec3 c = Vec3::Zero();
  for (int v : faces_[f]) c += vertices_[v];
  return c / static_cast<double>(faces_[f].size());
}

double Surface::signed_volume() const {
  double vol = 0;
  for (const Face& face : faces_) {
    const Vec3& a = vertices_[face[0]];
    for (std::size_t k = 1; k + 1 < face.size(); ++k)
      vol += a.dot(vertices_[face[k]].cross(vertices_[face[k + 1]]));
  }
  return vol / 6.0;
}

double Surface::total_area() const {
  double a = 0;
  for (int f = 0; f < face_count(); ++f) a += face_area(f);
  return a;
}

Eigen::AlignedBox3d Surface::bounding_box() const {
  Eigen::AlignedBox3d box;
  for (const Vec3& p : vertices_) box.extend(p);
  return box;
}

double Surface::bbox_diagonal() const {
  if (vertices_.empty()) return 0;
  return bounding_box().diagonal().norm();
}

Surface Surface::translated(const Vec3& offset) const {
  std::vector<Vec3> v = vertices_;
  for (Vec3& p : v) p += offset;
  return Surface(std::move(v), faces_);
}

Surface Surface::scaled(double factor) const {
  std::vector<Vec3> v = vertices_;
  for (Vec3& p : v) p *= factor;
  return Surface(std::move(v), faces_);
}

Surface Surface::with_face_reversed(int f) const {
  std::vector<Face> faces = faces_;
  std::reverse(faces[f].begin(), faces[f].end());
  return Surface(vertices_, std::move(faces));
}

Surface Surface::with_faces_permuted(std::span<const int> perm) const {
  std::vector<Face> faces;
  faces.reserve(perm.size());
  for (int old : perm) faces.push_back(faces_.at(old));
  return Surface(vertices_, std::move(faces));
}

std::vector<std::array<int, 3>> triangulate_face(const Surface& s, int f,
                                                 int fan_rotation) {
  const Face& poly = s.face(f);
  const int n = static_cast<int>(poly.size());
  if (n == 3) return {{poly[0], poly[1], poly[2]}};

  int root = static_cast<int>(std::min_element(poly.begin(), poly.end()) - poly.begin());
  root = ((root + fan_rotation) % n + n) % n;

  const Vec3 normal = s.vector_area(f);
  std::vector<std::array<int, 3>> tris;
  bool folds = false;
  for (int k = 1; k + 1 < n; ++k) {
    int a = poly[root], b = poly[(root + k) % n], c = poly[(root + k + 1) % n];
    Vec3 area = (s.vertex(b) - s.vertex(a)).cross(s.vertex(c) - s.vertex(a));
    if (area.dot(normal) <= 0) folds = true;
    tris.push_back({a, b, c});
  }
  if (!folds) return tris;
  return ear_clip(s, f);
}

// ---------------------------------------------------------------------------

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::BoundaryEdge: return "boundary_edge";
    case ViolationKind::NonManifoldEdge: return "nonmanifold_edge";
    case ViolationKind::NonManifoldVertex: return "nonmanifold_vertex";
    case ViolationKind::IsolatedVertex: return "isolated_vertex";
    case ViolationKind::Disconnected: return "disconnected";
    case ViolationKind::NonPlanarFace: return "nonplanar_face";
    case ViolationKind::DegenerateFace: return "degenerate_face";
    case ViolationKind::InconsistentOrientation: return "inconsistent_orientation";
    case ViolationKind::NonPositiveVolume: return "nonpositive_volume";
  }
  return "unknown";
}

int MeshDiagnostics::count(ViolationKind kind) const {
  return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                        [kind](const Violation& v) { return v.kind == kind; }));
}

namespace {

std::string edge_location(const Edge& e) {
  return "edge " + std::to_string(e.v0) + "-" + std::to_string(e.v1);
}

// The link of v is the graph whose edges are (prev, next) around v in each
// incident face; a manifold vertex has a link that is one cycle.
bool link_is_single_cycle(const Surface& s, int v) {
  std::vector<std::pair<int, int>> link;
  for (int f : s.vertex_faces(v)) {
    const Face& face = s.face(f);
    const int n = static_cast<int>(face.size());
    int k = static_cast<int>(std::find(face.begin(), face.end(), v) - face.begin());
    link.emplace_back(face[(k + n - 1) % n], face[(k + 1) % n]);
  }
  std::unordered_map<int, std::vector<int>> adj;
  for (auto [a, b] : link) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  if (adj.size() != link.size()) return false;
  for (const auto& [node, nbrs] : adj)
    if (nbrs.size() != 2) return false;

  // Walk the cycle from any node; it must visit every node.
  int start = adj.begin()->first, prev = -1, cur = start;
  std::size_t visited = 0;
  do {
    const auto& nbrs = adj[cur];
    int next = nbrs[0] != prev ? nbrs[0] : nbrs[1];
    prev = cur;
    cur = next;
    ++visited;
  } while (cur != start && visited <= adj.size());
  return visited == adj.size();
}

}  // namespace

MeshDiagnostics validate_surface(const Surface& s, const ValidationTolerances& tol) {
  MeshDiagnostics d;
  d.vertex_count = s.vertex_count();
  d.edge_count = s.edge_count();
  d.face_count = s.face_count();
  d.euler_characteristic = d.vertex_count - d.edge_count + d.face_count;
  auto report = [&](ViolationKind k, std::string where) {
    d.violations.push_back(Violation{k, std::move(where)});
  };

  bool orientable = true;
  for (const Edge& e : s.edges()) {
    if (e.uses.size() == 1) {
      report(ViolationKind::BoundaryEdge, edge_location(e));
    } else if (e.uses.size() > 2) {
      report(ViolationKind::NonManifoldEdge, edge_location(e));
    } else if (e.uses[0].forward == e.uses[1].forward) {
      orientable = false;
      report(ViolationKind::InconsistentOrientation, edge_location(e));
    }
  }

  for (int v = 0; v < s.vertex_count(); ++v) {
    if (s.vertex_faces(v).empty())
      report(ViolationKind::IsolatedVertex, "vertex " + std::to_string(v));
    else if (!link_is_single_cycle(s, v))
      report(ViolationKind::NonManifoldVertex, "vertex " + std::to_string(v));
  }

  if (s.face_count() > 0) {
    std::vector<char> seen(s.face_count(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int g : s.face_neighbors(f))
        if (!seen[g]) {
          seen[g] = 1;
          ++reached;
          q.push(g);
        }
    }
    if (reached != s.face_count())
      report(ViolationKind::Disconnected,
             std::to_string(s.face_count() - reached) + " faces unreachable from face 0");
  }

  const double diag = s.bbox_diagonal();
  for (int f = 0; f < s.face_count(); ++f) {
    const double area = s.face_area(f);
    if (area <= tol.degenerate * diag * diag) {
      report(ViolationKind::DegenerateFace, "face " + std::to_string(f));
      continue;
    }
    const Face& face = s.face(f);
    if (face.size() == 3) continue;
    Vec3 centroid = s.face_centroid(f);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int v : face) {
      Vec3 q = s.vertex(v) - centroid;
      cov += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Vec3 normal = eig.eigenvectors().col(0);
    double worst = 0;
    for (int v : face) worst = std::max(worst, std::abs((s.vertex(v) - centroid).dot(normal)));
    if (worst > tol.planar * diag)
      report(ViolationKind::NonPlanarFace, "face " + std::to_string(f));
  }

  if (orientable && s.face_count() > 0 && s.signed_volume() <= 0)
    report(ViolationKind::NonPositiveVolume, "surface");

  return d;
}

}  // namespace polymix

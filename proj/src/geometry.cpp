#include "polymix/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace polymix {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::string join_edges(const std::vector<int>& edges) {
  std::string s;
  for (std::size_t i = 0; i < edges.size(); ++i) s += (i ? "," : "") + std::to_string(edges[i]);
  return s;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

}  // namespace

DegenerateEdgeError::DegenerateEdgeError(std::vector<int> edges)
    : std::runtime_error("numerically degenerate dihedral angle at edge(s) " + join_edges(edges)),
      edges_(std::move(edges)) {}

std::vector<DihedralAngle> dihedral_angles(const Surface& s, const DihedralOptions& opt) {
  std::vector<DihedralAngle> out;
  std::vector<int> degenerate;
  out.reserve(s.edge_count());
  std::optional<PointLocator> locator;
  if (opt.probe_check) locator.emplace(s);

  for (int e = 0; e < s.edge_count(); ++e) {
    const Edge& edge = s.edge(e);
    if (!edge.manifold()) throw std::invalid_argument("dihedral angles need a closed manifold surface");
    const EdgeUse& u0 = edge.uses[0].forward ? edge.uses[0] : edge.uses[1];
    const EdgeUse& u1 = edge.uses[0].forward ? edge.uses[1] : edge.uses[0];
    if (!u0.forward || u1.forward) throw std::invalid_argument("inconsistently oriented edge");

    const Vec3 a = s.vertex(edge.v0), b = s.vertex(edge.v1);
    const Vec3 dir = (b - a).normalized();
    const Vec3 n0 = s.face_normal(u0.face), n1 = s.face_normal(u1.face);
    // In-face directions perpendicular to the edge, pointing into each face.
    const Vec3 t0 = n0.cross(dir);
    const Vec3 t1 = dir.cross(n1);
    const double c = t1.dot(t0), sn = -t1.dot(n0);
    double angle = std::atan2(sn, c);
    if (angle < 0) angle += kTwoPi;

    bool bad = std::abs(sn) < 1e-12 && c > 0;
    if (!bad && locator) {
      const double half = 0.5 * angle;
      const Vec3 bisector = std::cos(half) * t0 - std::sin(half) * n0;
      const Vec3 probe = 0.5 * (a + b) + 1e-6 * (b - a).norm() * bisector;
      bad = !locator->inside(probe);
    }
    if (bad) degenerate.push_back(e);
    out.push_back(DihedralAngle{e, edge.v0, edge.v1, u0.face, u1.face, angle, kTwoPi - angle});
  }
  if (!degenerate.empty()) throw DegenerateEdgeError(std::move(degenerate));
  return out;
}

std::string angles_csv(const std::vector<DihedralAngle>& angles) {
  std::string out = "edge_id,v0,v1,face0,face1,interior_angle,exterior_angle\n";
  for (const DihedralAngle& d : angles) {
    out += std::to_string(d.edge) + ',' + std::to_string(d.v0) + ',' + std::to_string(d.v1) + ',' +
           std::to_string(d.face0) + ',' + std::to_string(d.face1) + ',';
    append_double(out, d.interior_angle);
    out += ',';
    append_double(out, d.exterior_angle);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double point_face_distance(const Surface& s, int f, const Vec3& p) {
  const Face& face = s.face(f);
  const Vec3 n = s.face_normal(f);
  const Vec3& origin = s.vertex(face[0]);
  const double height = (p - origin).dot(n);
  const Vec3 q = p - height * n;

  // Crossing-number test in the face plane.
  const Vec3 u = (std::abs(n.x()) < 0.9 ? n.cross(Vec3::UnitX()) : n.cross(Vec3::UnitY())).normalized();
  const Vec3 w = n.cross(u);
  const double qx = q.dot(u), qy = q.dot(w);
  bool inside = false;
  const std::size_t m = face.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const Vec3& pi = s.vertex(face[i]);
    const Vec3& pj = s.vertex(face[j]);
    const double xi = pi.dot(u), yi = pi.dot(w), xj = pj.dot(u), yj = pj.dot(w);
    if ((yi > qy) != (yj > qy) && qx < (xj - xi) * (qy - yi) / (yj - yi) + xi) inside = !inside;
  }
  if (inside) return std::abs(height);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    best = std::min(best, point_segment_distance(p, s.vertex(face[i]), s.vertex(face[(i + 1) % m])));
  return best;
}

double separation_radius(const Surface& s, int v) {
  const Vec3& p = s.vertex(v);
  double best = std::numeric_limits<double>::infinity();
  for (int w = 0; w < s.vertex_count(); ++w)
    if (w != v) best = std::min(best, (s.vertex(w) - p).norm());
  for (const Edge& e : s.edges())
    if (e.v0 != v && e.v1 != v)
      best = std::min(best, point_segment_distance(p, s.vertex(e.v0), s.vertex(e.v1)));
  for (int f = 0; f < s.face_count(); ++f) {
    const Face& face = s.face(f);
    if (std::find(face.begin(), face.end(), v) != face.end()) continue;
    best = std::min(best, point_face_distance(s, f, p));
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string_view to_string(PointLocation loc) {
  switch (loc) {
    case PointLocation::Inside: return "inside";
    case PointLocation::Outside: return "outside";
    case PointLocation::Boundary: return "boundary";
  }
  return "unknown";
}

PointLocator::PointLocator(const Surface& s) : surface_(&s), box_(s.bounding_box()) {
  for (int f = 0; f < s.face_count(); ++f) {
    const Face& face = s.face(f);
    Eigen::AlignedBox3d fb;
    for (int v : face) fb.extend(s.vertex(v));
    face_tolerance_.push_back(1e-12 * fb.diagonal().norm());
    for (std::size_t k = 1; k + 1 < face.size(); ++k)
      triangles_.push_back({s.vertex(face[0]), s.vertex(face[k]), s.vertex(face[k + 1])});
  }
}

// Van Oosterom-Strackee solid angle per triangle.
double PointLocator::winding_number(const Vec3& p) const {
  double total = 0;
  for (const auto& t : triangles_) {
    const Vec3 a = t[0] - p, b = t[1] - p, c = t[2] - p;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    total += 2 * std::atan2(num, den);
  }
  return total / (4 * std::numbers::pi);
}

bool PointLocator::inside(const Vec3& p) const {
  if (!box_.contains(p)) return false;
  return winding_number(p) > 0.5;
}

PointLocation PointLocator::classify(const Vec3& p) const {
  for (int f = 0; f < surface_->face_count(); ++f)
    if (point_face_distance(*surface_, f, p) <= face_tolerance_[f]) return PointLocation::Boundary;
  return inside(p) ? PointLocation::Inside : PointLocation::Outside;
}

PointLocation contains_point(const Surface& s, const Vec3& p) {
  return PointLocator(s).classify(p);
}

}  // namespace polymix

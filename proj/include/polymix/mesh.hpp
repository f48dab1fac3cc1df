#pragma once

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polymix {

using Vec3 = Eigen::Vector3d;
using Face = std::vector<int>;

/// One directed traversal of an undirected edge by a face.
struct EdgeUse {
  int face;
  bool forward;  // the face walks v0 -> v1
};

/// Undirected edge with v0 < v1 and every face that uses it.
struct Edge {
  int v0;
  int v1;
  std::vector<EdgeUse> uses;

  bool manifold() const { return uses.size() == 2; }
};

/**
 * Polygonal surface mesh: vertices, planar polygonal faces (counterclockwise
 * seen from outside) and the derived edge and face adjacency tables.
 *
 * Structural well-formedness (indices in range, >= 3 distinct vertices per
 * face) is enforced at construction. The geometric and topological
 * hypotheses (closed, manifold, connected, planar, outward oriented) are
 * checked separately by validate_surface() so that violations can be
 * reported rather than thrown.
 *
 * Immutable after construction.
 */
class Surface {
 public:
  Surface() = default;
  Surface(std::vector<Vec3> vertices, std::vector<Face> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Vec3& vertex(int v) const { return vertices_[v]; }
  const Face& face(int f) const { return faces_[f]; }
  const Edge& edge(int e) const { return edges_[e]; }

  // face_edges(f)[k] is the edge joining face(f)[k] and face(f)[k+1].
  std::span<const int> face_edges(int f) const { return face_edges_[f]; }
  std::span<const int> vertex_faces(int v) const { return vertex_faces_[v]; }

  std::optional<int> find_edge(int a, int b) const;
  // Faces sharing an edge with f, in face_edges order (manifold edges only).
  std::vector<int> face_neighbors(int f) const;

  Vec3 vector_area(int f) const;  // Newell's method, |.| = area
  Vec3 face_normal(int f) const;
  double face_area(int f) const { return vector_area(f).norm(); }
  Vec3 face_centroid(int f) const;
  double signed_volume() const;
  double total_area() const;

  Eigen::AlignedBox3d bounding_box() const;
  double bbox_diagonal() const;

  Surface translated(const Vec3& offset) const;
  Surface scaled(double factor) const;
  Surface with_face_reversed(int f) const;
  // Faces renumbered so that new face i is old face perm[i].
  Surface with_faces_permuted(std::span<const int> perm) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> face_edges_;
  std::vector<std::vector<int>> vertex_faces_;
};

/// Triangulation of one face. Fans from the lowest-index vertex (advanced by
/// `fan_rotation` positions); faces whose fan would fold over fall back to
/// ear clipping. Triangles keep the face orientation.
std::vector<std::array<int, 3>> triangulate_face(const Surface& s, int f,
                                                 int fan_rotation = 0);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  BoundaryEdge,
  NonManifoldEdge,
  NonManifoldVertex,
  IsolatedVertex,
  Disconnected,
  NonPlanarFace,
  DegenerateFace,
  InconsistentOrientation,
  NonPositiveVolume,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string location;
};

struct MeshDiagnostics {
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int euler_characteristic = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  int count(ViolationKind kind) const;
};

struct ValidationTolerances {
  double planar = 1e-9;      // relative to bounding-box diagonal
  double degenerate = 1e-12; // face area relative to diagonal^2
};

MeshDiagnostics validate_surface(const Surface& s,
                                 const ValidationTolerances& tol = {});

// ---------------------------------------------------------------------------
// OFF I/O

class OffParseError : public std::runtime_error {
 public:
  OffParseError(const std::string& what, int line);
  int line() const { return line_; }

 private:
  int line_;
};

Surface parse_off(std::string_view text);
Surface read_off(const std::string& path);

std::string serialize_off(const Surface& s);
// OFF with one extra scalar appended to every vertex line.
std::string serialize_off_with_scalars(const Surface& s,
                                       std::span<const double> values);
std::string serialize_off_with_scalars(std::span<const Vec3> vertices,
                                       std::span<const std::array<int, 3>> triangles,
                                       std::span<const double> values);

}  // namespace polymix

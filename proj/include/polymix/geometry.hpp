#pragma once

#include "polymix/mesh.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace polymix {

/// Dihedral angle at an edge. face0 walks the edge v0 -> v1, face1 walks it
/// back. interior_angle is measured inside the solid; exterior_angle is
/// 2*pi - interior_angle.
struct DihedralAngle {
  int edge;
  int v0, v1;
  int face0, face1;
  double interior_angle;
  double exterior_angle;
};

class DegenerateEdgeError : public std::runtime_error {
 public:
  explicit DegenerateEdgeError(std::vector<int> edges);
  const std::vector<int>& edges() const { return edges_; }

 private:
  std::vector<int> edges_;
};

struct DihedralOptions {
  // Cross-check every angle with a point-membership probe placed just inside
  // the wedge (midpoint of the edge, displaced 1e-6 edge lengths along the
  // interior bisector).
  bool probe_check = false;
};

/// One entry per edge, in edge order. Requires a valid surface; throws
/// DegenerateEdgeError for edges whose faces fold onto each other (angle
/// numerically 0 or 2*pi) or fail the probe check.
std::vector<DihedralAngle> dihedral_angles(const Surface& s, const DihedralOptions& opt = {});

/// CSV with header edge_id,v0,v1,face0,face1,interior_angle,exterior_angle.
std::string angles_csv(const std::vector<DihedralAngle>& angles);

// ---------------------------------------------------------------------------

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);
double point_face_distance(const Surface& s, int f, const Vec3& p);

/// Largest radius whose closed ball about vertex v meets no other vertex and
/// no edge or face that is not incident to v.
double separation_radius(const Surface& s, int v);

enum class PointLocation { Inside, Outside, Boundary };
std::string_view to_string(PointLocation loc);

/**
 * Point membership for a closed oriented surface by generalized winding
 * number (sum of signed solid angles of fan triangles).
 *
 * classify() reports Boundary when the point lies within 1e-12 times a
 * face's bounding-box diagonal of that face. inside() skips the boundary
 * test and is what the samplers use.
 */
class PointLocator {
 public:
  explicit PointLocator(const Surface& s);

  double winding_number(const Vec3& p) const;
  bool inside(const Vec3& p) const;
  PointLocation classify(const Vec3& p) const;

 private:
  const Surface* surface_;
  std::vector<std::array<Vec3, 3>> triangles_;
  std::vector<double> face_tolerance_;
  Eigen::AlignedBox3d box_;
};

PointLocation contains_point(const Surface& s, const Vec3& p);

}  // namespace polymix

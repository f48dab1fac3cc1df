#pragma once

#include "polymix/mesh.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polymix {

/// Unit cube [0,1]^3. Faces: z=0, z=1, y=0, y=1, x=0, x=1.
Surface make_cube();
/// Regular tetrahedron with unit edge length, one face on z=0.
Surface make_regular_tetrahedron();
/// |x| + |y| <= z <= 1: apex at the origin (vertex 0), four lateral
/// triangles (faces 0..3, counterclockwise around +z) and the square cap
/// z = 1 (face 4).
Surface make_square_pyramid();
/// L-shaped prism: [0,2]^2 minus [1,2]^2 in the xy-plane, extruded over
/// z in [0,1]. The reflex edge is the vertical edge through (1,1).
Surface make_l_prism();

/// Prism over a counterclockwise simple polygon in the xy-plane.
/// Faces: bottom, top, then one side quad per polygon edge.
Surface extrude_polygon(const std::vector<Eigen::Vector2d>& polygon, double z0, double z1);

struct NotchedBoxParams {
  double width = 4;
  double height = 2;
  double thickness = 1;
  int notches = 1;           // rectangular notches cut into the top side
  bool corner_notch = false; // additionally notch the top-right corner
  double notch_depth = 0.5;  // fraction of height
};

/// Rectangle with rectangular notches along its top edge, extruded in z.
/// Face count is 6 + 4 * notches (+ 2 with a corner notch).
Surface make_notched_box(const NotchedBoxParams& p);
NotchedBoxParams random_notched_box_params(std::uint64_t seed, int notches, bool corner_notch);

/// Convex hull of points in general position, triangulated and outward
/// oriented. Only hull points are kept as vertices.
Surface convex_hull(const std::vector<Vec3>& points);
/// Hull of `n` uniform points on the unit sphere.
Surface random_sphere_hull(int n, std::uint64_t seed);
/// Octahedron subdivided `levels` times, projected to the unit sphere, with
/// every vertex radius scaled by an independent factor in [1-amp, 1+amp].
Surface random_star_sphere(int levels, double amplitude, std::uint64_t seed);

/// Names accepted by builtin_fixture(), in a stable order.
std::vector<std::string> builtin_fixture_names();
std::optional<Surface> builtin_fixture(std::string_view name);

}  // namespace polymix

#include "polymix/fixtures.hpp"
#include "polymix/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace polymix;

namespace {

const char* kCubeOff = R"(OFF
# unit cube
8 6 12
0 0 0
1 0 0
0 1 0
1 1 0
0 0 1
1 0 1
0 1 1
1 1 1
4 0 2 3 1
4 4 5 7 6
4 0 1 5 4
4 2 6 7 3
4 0 4 6 2
4 1 3 7 5
)";

std::vector<std::vector<int>> faces_of(const Surface& s) { return s.faces(); }

}  // namespace

TEST(OffParse, CubeCounts) {
  const Surface s = parse_off(kCubeOff);
  const MeshDiagnostics d = validate_surface(s);
  EXPECT_EQ(d.vertex_count, 8);
  EXPECT_EQ(d.edge_count, 12);
  EXPECT_EQ(d.face_count, 6);
  EXPECT_EQ(d.euler_characteristic, 2);
  EXPECT_TRUE(d.ok());
}

TEST(OffParse, PyramidCounts) {
  const Surface s = parse_off(serialize_off(make_square_pyramid()));
  const MeshDiagnostics d = validate_surface(s);
  EXPECT_EQ(d.vertex_count, 5);
  EXPECT_EQ(d.edge_count, 8);
  EXPECT_EQ(d.face_count, 5);
  EXPECT_EQ(d.euler_characteristic, 2);
  EXPECT_TRUE(d.ok());
}

TEST(OffParse, IndexOutOfRangeReportsLine) {
  std::string text = kCubeOff;
  text.replace(text.find("4 1 3 7 5"), 9, "4 1 3 7 99");
  try {
    parse_off(text);
    FAIL() << "expected a parse error";
  } catch (const OffParseError& e) {
    EXPECT_EQ(e.line(), 17);
    EXPECT_NE(std::string(e.what()).find("index out of range, line 17"), std::string::npos);
  }
}

TEST(OffParse, Errors) {
  EXPECT_THROW(parse_off(""), OffParseError);
  EXPECT_THROW(parse_off("PLY\n3 1 0\n"), OffParseError);
  EXPECT_THROW(parse_off("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n2 0 1\n"), OffParseError);
  EXPECT_THROW(parse_off("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n"), OffParseError);
  EXPECT_THROW(parse_off("OFF\n3 1\n0 0 0\n1 0 0\n"), OffParseError);
  EXPECT_THROW(parse_off("OFF\n3 1\n0 0 x\n1 0 0\n0 1 0\n3 0 1 2\n"), OffParseError);
  try {
    parse_off("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n3 0 2 2\n");
  } catch (const OffParseError& e) {
    EXPECT_EQ(e.line(), 6);
    EXPECT_NE(std::string(e.what()).find("duplicate vertex index"), std::string::npos);
  }
  try {
    parse_off("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n2 0 1\n");
  } catch (const OffParseError& e) {
    EXPECT_EQ(e.line(), 6);
    EXPECT_NE(std::string(e.what()).find("fewer than 3"), std::string::npos);
  }
}

TEST(OffParse, CountsOnHeaderLineAndComments) {
  const Surface s = parse_off("OFF 4 4 6   # inline\n# comment\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
                              "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  EXPECT_EQ(s.vertex_count(), 4);
  EXPECT_EQ(s.face_count(), 4);
  EXPECT_TRUE(validate_surface(s).ok());
}

TEST(OffRoundTrip, Fixtures) {
  for (const auto& name : builtin_fixture_names()) {
    const Surface s = *builtin_fixture(name);
    const Surface t = parse_off(serialize_off(s));
    EXPECT_EQ(faces_of(s), faces_of(t)) << name;
    ASSERT_EQ(s.vertex_count(), t.vertex_count());
    for (int v = 0; v < s.vertex_count(); ++v) EXPECT_EQ(s.vertex(v), t.vertex(v)) << name;
    EXPECT_EQ(serialize_off(s), serialize_off(t));
  }
}

TEST(OffRoundTrip, GeneratedHulls) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Surface s = random_sphere_hull(8 + static_cast<int>(seed), seed);
    const Surface t = parse_off(serialize_off(s));
    EXPECT_EQ(faces_of(s), faces_of(t));
    for (int v = 0; v < s.vertex_count(); ++v) EXPECT_EQ(s.vertex(v), t.vertex(v));
  }
}

TEST(OffRoundTrip, LargeHull) {
  const Surface s = random_sphere_hull(5002, 42);  // 2n - 4 = 10^4 faces
  EXPECT_EQ(s.face_count(), 10000);
  const Surface t = parse_off(serialize_off(s));
  EXPECT_EQ(faces_of(s), faces_of(t));
  for (int v = 0; v < s.vertex_count(); ++v) ASSERT_EQ(s.vertex(v), t.vertex(v));
}

TEST(Validate, ShippedFixturesAreGenusZero) {
  for (const auto& name : builtin_fixture_names()) {
    const MeshDiagnostics d = validate_surface(*builtin_fixture(name));
    EXPECT_TRUE(d.ok()) << name;
    EXPECT_EQ(d.euler_characteristic, 2) << name;
    EXPECT_EQ(d.vertex_count - d.edge_count + d.face_count, d.euler_characteristic);
  }
}

TEST(Validate, TetrahedraSharingAVertex) {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                         {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  // Two tetrahedra meeting only at vertex 0.
  std::vector<Face> f = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3},
                         {0, 5, 4}, {0, 4, 6}, {0, 6, 5}, {4, 5, 6}};
  const MeshDiagnostics d = validate_surface(Surface(v, f));
  EXPECT_FALSE(d.ok());
  EXPECT_GE(d.count(ViolationKind::NonManifoldVertex), 1);
  bool at_zero = false;
  for (const auto& x : d.violations)
    if (x.kind == ViolationKind::NonManifoldVertex && x.location == "vertex 0") at_zero = true;
  EXPECT_TRUE(at_zero);
}

TEST(Validate, OpenBox) {
  const Surface cube = make_cube();
  std::vector<Face> f = cube.faces();
  f.erase(f.begin() + 1);  // drop the top
  const MeshDiagnostics d = validate_surface(Surface(cube.vertices(), f));
  EXPECT_FALSE(d.ok());
  // The missing square leaves its four sides with a single incident face.
  EXPECT_EQ(d.count(ViolationKind::BoundaryEdge), 4);
}

TEST(Validate, ReversingOneFaceIsInconsistent) {
  for (const auto& name : builtin_fixture_names()) {
    const Surface s = *builtin_fixture(name);
    for (int f = 0; f < s.face_count(); ++f) {
      const MeshDiagnostics d = validate_surface(s.with_face_reversed(f));
      EXPECT_GE(d.count(ViolationKind::InconsistentOrientation), 1) << name << " face " << f;
    }
  }
}

TEST(Validate, InwardOrientation) {
  const Surface cube = make_cube();
  Surface s = cube;
  for (int f = 0; f < cube.face_count(); ++f) s = s.with_face_reversed(f);
  const MeshDiagnostics d = validate_surface(s);
  EXPECT_EQ(d.count(ViolationKind::InconsistentOrientation), 0);
  EXPECT_EQ(d.count(ViolationKind::NonPositiveVolume), 1);
}

TEST(Validate, NonPlanarFace) {
  Surface cube = make_cube();
  std::vector<Vec3> v = cube.vertices();
  v[7].z() += 1e-3;
  const MeshDiagnostics d = validate_surface(Surface(v, cube.faces()));
  EXPECT_GE(d.count(ViolationKind::NonPlanarFace), 1);
}

TEST(Validate, PlanarityToleranceIsRelative) {
  std::vector<Vec3> v = make_cube().vertices();
  v[7].z() += 1e-12;  // far below 1e-9 of the diagonal
  EXPECT_TRUE(validate_surface(Surface(v, make_cube().faces())).ok());
  const Surface big = make_cube().scaled(1e6);
  EXPECT_TRUE(validate_surface(big).ok());
}

TEST(Validate, DegenerateFace) {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Face> f = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {1, 4, 2}, {2, 4, 3}};
  const MeshDiagnostics d = validate_surface(Surface(v, f));
  EXPECT_GE(d.count(ViolationKind::DegenerateFace), 1);
}

TEST(Validate, DisconnectedAndIsolated) {
  const Surface a = make_regular_tetrahedron();
  std::vector<Vec3> v = a.vertices();
  std::vector<Face> f = a.faces();
  for (const Vec3& p : a.vertices()) v.push_back(p + Vec3(5, 0, 0));
  for (Face face : a.faces()) {
    for (int& i : face) i += 4;
    f.push_back(face);
  }
  v.push_back({9, 9, 9});
  const MeshDiagnostics d = validate_surface(Surface(v, f));
  EXPECT_EQ(d.count(ViolationKind::Disconnected), 1);
  EXPECT_EQ(d.count(ViolationKind::IsolatedVertex), 1);
}

TEST(Validate, NonManifoldEdge) {
  // Three triangles on one edge.
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
  std::vector<Face> f = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
  const MeshDiagnostics d = validate_surface(Surface(v, f));
  EXPECT_GE(d.count(ViolationKind::NonManifoldEdge), 1);
}

TEST(Surface, StructuralErrorsThrow) {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  EXPECT_THROW(Surface(v, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(Surface(v, {{0, 1, 5}}), std::invalid_argument);
  EXPECT_THROW(Surface(v, {{0, 1, 1}}), std::invalid_argument);
}

TEST(Surface, Measures) {
  const Surface cube = make_cube();
  EXPECT_NEAR(cube.signed_volume(), 1.0, 1e-15);
  EXPECT_NEAR(cube.total_area(), 6.0, 1e-15);
  EXPECT_NEAR(cube.bbox_diagonal(), std::sqrt(3.0), 1e-15);
  const Surface pyr = make_square_pyramid();
  EXPECT_NEAR(pyr.signed_volume(), 2.0 / 3.0, 1e-15);  // base area 2, height 1
  const Surface tet = make_regular_tetrahedron();
  EXPECT_NEAR(tet.signed_volume(), 1.0 / (6 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(make_l_prism().signed_volume(), 3.0, 1e-14);
}

TEST(Surface, NotchedBoxFaceCounts) {
  for (int k = 0; k <= 4; ++k) {
    NotchedBoxParams p;
    p.notches = k;
    const Surface s = make_notched_box(p);
    EXPECT_EQ(s.face_count(), 6 + 4 * k);
    EXPECT_TRUE(validate_surface(s).ok());
    p.corner_notch = true;
    const Surface c = make_notched_box(p);
    EXPECT_EQ(c.face_count(), 8 + 4 * k);
    EXPECT_TRUE(validate_surface(c).ok());
  }
}

TEST(Surface, GeneratedFamiliesAreValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_TRUE(validate_surface(random_sphere_hull(12, seed)).ok());
    EXPECT_TRUE(validate_surface(random_star_sphere(1, 0.3, seed)).ok());
    EXPECT_TRUE(validate_surface(make_notched_box(random_notched_box_params(seed, 2, seed % 2))).ok());
  }
}

TEST(Surface, FacePermutationKeepsValidity) {
  const Surface s = make_l_prism();
  std::vector<int> perm(s.face_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  const Surface t = s.with_faces_permuted(perm);
  EXPECT_TRUE(validate_surface(t).ok());
  EXPECT_EQ(t.face(0), s.face(s.face_count() - 1));
}

TEST(Triangulate, FanAndEarClipping) {
  const Surface s = make_l_prism();
  for (int f = 0; f < s.face_count(); ++f)
    for (int rot = 0; rot < 3; ++rot) {
      const auto tris = triangulate_face(s, f, rot);
      EXPECT_EQ(tris.size(), s.face(f).size() - 2);
      Vec3 area = Vec3::Zero();
      for (const auto& t : tris) {
        const Vec3 tri = 0.5 * (s.vertex(t[1]) - s.vertex(t[0])).cross(s.vertex(t[2]) - s.vertex(t[0]));
        EXPECT_GT(tri.dot(s.face_normal(f)), 0) << "folded triangle in face " << f;
        area += tri;
      }
      EXPECT_NEAR((area - s.vector_area(f)).norm(), 0, 1e-14);
    }
}

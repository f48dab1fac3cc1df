#include "polymix/fixtures.hpp"
#include "polymix/trace_energy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace polymix;

namespace {

// Exact integral of |grad u|^2 of the piecewise-linear interpolant, computed
// triangle by triangle from the barycentric gradients.
double pl_energy(const TriMesh& m, const Eigen::VectorXd& u) {
  double total = 0;
  for (const auto& t : m.triangles) {
    const Vec3 p0 = m.vertices[t[0]], p1 = m.vertices[t[1]], p2 = m.vertices[t[2]];
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    const double area2 = n.norm();
    const Vec3 nh = n / area2;
    // grad phi_i = nh x (opposite edge) / (2 area)
    const Vec3 g0 = nh.cross(p2 - p1) / area2, g1 = nh.cross(p0 - p2) / area2, g2 = nh.cross(p1 - p0) / area2;
    const Vec3 g = u[t[0]] * g0 + u[t[1]] * g1 + u[t[2]] * g2;
    total += 0.5 * area2 * g.squaredNorm();
  }
  return total;
}

// Unit square [0,1]^2 split into an n x n grid of triangle pairs.
TriMesh square_grid(int n) {
  TriMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(double(i) / n, double(j) / n, 0);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

Partition labels(const std::string& l) {
  Partition p;
  for (char c : l) p.labels.push_back(c == 'D' ? Label::D : Label::N);
  return p;
}

}  // namespace

TEST(Stiffness, MatchesTriangleGradients) {
  const RefinedSurface rs = refine_surface(make_l_prism(), 2);
  const auto K = cotangent_stiffness(rs.mesh);
  Eigen::VectorXd u(rs.mesh.vertices.size());
  for (std::size_t v = 0; v < rs.mesh.vertices.size(); ++v) {
    const Vec3& p = rs.mesh.vertices[v];
    u[v] = std::sin(3 * p.x()) + p.y() * p.z();
  }
  const double e = u.dot(K * u), ref = pl_energy(rs.mesh, u);
  EXPECT_NEAR(e, ref, 1e-12 * ref);
  // Constants are in the kernel.
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(u.size());
  EXPECT_NEAR((K * one).norm(), 0, 1e-12);
  EXPECT_NEAR(lumped_mass(rs.mesh).sum(), make_l_prism().total_area(), 1e-12);
}

TEST(Refine, CountsAndProvenance) {
  const Surface cube = make_cube();
  for (int L = 0; L <= 3; ++L) {
    const RefinedSurface rs = refine_surface(cube, L);
    EXPECT_EQ(rs.mesh.triangles.size(), 12u << (2 * L));
    // Closed triangulated sphere: V = T / 2 + 2.
    EXPECT_EQ(rs.mesh.vertices.size(), rs.mesh.triangles.size() / 2 + 2);
    for (std::size_t v = 0; v < rs.mesh.vertices.size(); ++v) {
      ASSERT_FALSE(rs.provenance[v].empty());
      for (int f : rs.provenance[v]) {
        const double h = cube.face_normal(f).dot(rs.mesh.vertices[v] - cube.vertex(cube.face(f)[0]));
        EXPECT_NEAR(h, 0, 1e-14);
      }
    }
  }
  const RefinedSurface rs = refine_surface(cube, 2);
  int corners = 0, edge_points = 0;
  for (const auto& p : rs.provenance) {
    if (p.size() == 3) ++corners;
    if (p.size() == 2) ++edge_points;
  }
  EXPECT_EQ(corners, 8);
  EXPECT_EQ(edge_points, 12 * 3);
  EXPECT_THROW(refine_surface(cube, -1), std::invalid_argument);
}

TraceData open_boundary(TraceData f) {
  f.boundary = DBoundary::Open;
  return f;
}

TEST(Constraints, OpenBoundaryLeavesSharedEdgesFree) {
  const Surface cube = make_cube();
  const RefinedSurface rs = refine_surface(cube, 2);
  const Constraints c = constrain(rs, labels("DNNNNN"), open_boundary(TraceData::uniform(2.0)));
  int count = 0;
  for (std::size_t v = 0; v < c.constrained.size(); ++v)
    if (c.constrained[v]) {
      ++count;
      EXPECT_EQ(rs.provenance[v], std::vector<int>{0});
      EXPECT_EQ(c.values[v], 2.0);
    }
  EXPECT_EQ(count, 9);  // interior of the 5 x 5 vertex grid on the bottom face
  // Two D faces: vertices on their shared edge are constrained too.
  const Constraints d = constrain(rs, labels("DNDNNN"), open_boundary(TraceData::uniform(1.0)));
  EXPECT_EQ(std::count(d.constrained.begin(), d.constrained.end(), 1), 9 + 9 + 3);
}

TEST(Constraints, ClosureBoundaryTakesTheFaceValue) {
  const RefinedSurface rs = refine_surface(make_cube(), 2);
  const Constraints c = constrain(rs, labels("DNNNNN"), TraceData::coordinate(0));
  int count = 0;
  for (std::size_t v = 0; v < c.constrained.size(); ++v) {
    const bool on_bottom = rs.mesh.vertices[v].z() == 0;
    EXPECT_EQ(c.constrained[v] != 0, on_bottom);
    if (c.constrained[v]) EXPECT_EQ(c.values[v], rs.mesh.vertices[v].x());
    count += on_bottom;
  }
  EXPECT_EQ(count, 25);
  const Constraints d = constrain(rs, labels("DNDNNN"), TraceData::uniform(1.0));
  EXPECT_EQ(std::count(d.constrained.begin(), d.constrained.end(), 1), 25 + 25 - 5);
}

TEST(Constraints, ClosureLeavesJumpsFree) {
  // The two D faces of the pyramid meet only at the apex, with values 1 and 0.
  const RefinedSurface rs = refine_surface(make_square_pyramid(), 1);
  const Constraints c = constrain(rs, labels("DNDNN"), TraceData::per_face({{0, 1.0}, {2, 0.0}}));
  for (std::size_t v = 0; v < c.constrained.size(); ++v) {
    const auto& pf = rs.provenance[v];
    const bool in0 = std::find(pf.begin(), pf.end(), 0) != pf.end();
    const bool in2 = std::find(pf.begin(), pf.end(), 2) != pf.end();
    EXPECT_EQ(c.constrained[v] != 0, in0 != in2) << "vertex " << v;
    if (c.constrained[v]) EXPECT_EQ(c.values[v], in0 ? 1.0 : 0.0);
  }
  EXPECT_FALSE(c.constrained[0]);
}

TEST(Constraints, BoundaryModeNames) {
  EXPECT_EQ(parse_d_boundary("open"), DBoundary::Open);
  EXPECT_EQ(parse_d_boundary("closure"), DBoundary::Closure);
  EXPECT_FALSE(parse_d_boundary("closed"));
  EXPECT_EQ(to_string(DBoundary::Open), "open");
}

TEST(Constraints, ConflictingFaceValues) {
  const RefinedSurface rs = refine_surface(make_cube(), 1);
  EXPECT_THROW(constrain(rs, labels("DNDNNN"), TraceData::per_face({{0, 1.0}, {2, 0.0}})), std::invalid_argument);
  EXPECT_NO_THROW(constrain(rs, labels("DNDNNN"), TraceData::per_face({{0, 1.0}, {2, 1.0}})));
  EXPECT_THROW(constrain(rs, labels("DNDNNN"), TraceData::per_face({{0, 1.0}})), std::invalid_argument);
}

TEST(Extension, ConstantData) {
  for (const auto& name : {"cube", "square_pyramid", "l_prism"}) {
    const Surface s = *builtin_fixture(name);
    Partition p = labels(std::string(s.face_count(), 'N'));
    p.labels[0] = Label::D;
    const ExtensionResult r = minimal_extension_energy(refine_surface(s, 2), p, TraceData::uniform(1.5));
    EXPECT_NEAR(r.energy, 0, 1e-20) << name;
    for (int v = 0; v < r.values.size(); ++v) EXPECT_NEAR(r.values[v], 1.5, 1e-9) << name;
    EXPECT_EQ(r.floating_components, 0);
  }
}

TEST(Extension, FlatPatchReproducesLinearData) {
  const TriMesh m = square_grid(12);
  std::vector<char> constrained(m.vertices.size(), 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(m.vertices.size());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const Vec3& p = m.vertices[v];
    if (p.x() == 0 || p.x() == 1 || p.y() == 0 || p.y() == 1) {
      constrained[v] = 1;
      values[v] = 2 * p.x() + 3 * p.y();
    }
  }
  const ExtensionResult r = minimize_extension(m, constrained, values, 0.0);
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    EXPECT_NEAR(r.values[v], 2 * m.vertices[v].x() + 3 * m.vertices[v].y(), 1e-9);
  EXPECT_NEAR(r.energy, 13.0, 13.0 * 1e-10);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(Extension, FloatingComponentIsPinned) {
  const Surface cube = make_cube();
  // At L = 0 no vertex is interior to a single face, so the open rule
  // constrains nothing.
  const ExtensionResult r =
      minimal_extension_energy(refine_surface(cube, 0), labels("DNNNNN"), open_boundary(TraceData::coordinate(0)));
  EXPECT_EQ(r.constrained_count, 0);
  EXPECT_EQ(r.floating_components, 1);
  EXPECT_EQ(r.energy, 0.0);
}

TEST(Extension, FullyConstrained) {
  const Surface cube = make_cube();
  std::vector<double> energies;
  for (int L = 1; L <= 3; ++L) {
    const RefinedSurface rs = refine_surface(cube, L);
    const ExtensionResult r = minimal_extension_energy(rs, labels("DDDDDD"), TraceData::coordinate(2));
    EXPECT_EQ(r.free_count, 0);
    EXPECT_NEAR(r.energy, 4.0, 1e-12);  // |grad_t z|^2 = 1 on the four sides
    energies.push_back(r.energy);
  }
  EXPECT_EQ(classify_energies(energies), Classification::Convergent);
}

TEST(Extension, MoreConstraintsNeverLowerEnergy) {
  const Surface s = make_l_prism();
  const RefinedSurface rs = refine_surface(s, 2);
  const double small = minimal_extension_energy(rs, labels("DNNNNNNN"), TraceData::coordinate(0)).energy;
  const double mid = minimal_extension_energy(rs, labels("DNDNNNNN"), TraceData::coordinate(0)).energy;
  const double big = minimal_extension_energy(rs, labels("DNDDNNDN"), TraceData::coordinate(0)).energy;
  EXPECT_LE(small, mid * (1 + 1e-9));
  EXPECT_LE(mid, big * (1 + 1e-9));
}

TEST(Extension, ScaleInvariant) {
  const Surface s = make_square_pyramid();
  const Partition p = labels("DNDNN");
  const TraceData f = TraceData::per_face({{0, 1.0}, {2, 0.0}});
  const double a = minimal_extension_energy(refine_surface(s, 3), p, f).energy;
  const double b = minimal_extension_energy(refine_surface(s.scaled(7.5), 3), p, f).energy;
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(Norm, Examples) {
  const Surface cube = make_cube();
  const RefinedSurface rs = refine_surface(cube, 3);
  const ExtensionResult zero = full_restriction_norm(rs, labels("DNNNNN"), TraceData::uniform(0.0));
  EXPECT_EQ(zero.energy, 0.0);
  const ExtensionResult one = full_restriction_norm(rs, labels("DNNNNN"), TraceData::uniform(1.0));
  EXPECT_LE(one.energy, cube.total_area() + 1e-12);
  EXPECT_GT(one.energy, 0.0);
  const ExtensionResult x = full_restriction_norm(rs, labels("DNNNNN"), TraceData::coordinate(0));
  const ExtensionResult semi = minimal_extension_energy(rs, labels("DNNNNN"), TraceData::coordinate(0));
  EXPECT_GE(x.energy, x.gradient_energy);
  EXPECT_NEAR(x.energy, x.gradient_energy + x.mass_energy, 1e-12);
  EXPECT_GE(x.energy, semi.energy * (1 - 1e-9));
}

TEST(Classify, Rules) {
  EXPECT_EQ(classify_energies(std::vector<double>{1.0, 1.5, 1.505}), Classification::Convergent);
  EXPECT_EQ(classify_energies(std::vector<double>{0.0, 0.0}), Classification::Convergent);
  EXPECT_EQ(classify_energies(std::vector<double>{1.0, 2.0, 3.0, 4.0}), Classification::Divergent);
  EXPECT_EQ(classify_energies(std::vector<double>{1.0, 2.0, 3.0, 3.2}), Classification::Undetermined);
  EXPECT_EQ(classify_energies(std::vector<double>{1.0, 3.0, 2.0, 4.0}), Classification::Undetermined);
  EXPECT_EQ(classify_energies(std::vector<double>{1.0}), Classification::Undetermined);
}

TEST(Study, PyramidStepDiverges) {
  const Surface s = make_square_pyramid();
  const Partition p = labels("DNDNN");
  const TraceData f = TraceData::per_face({{0, 1.0}, {2, 0.0}});
  for (int rot = 0; rot < 3; ++rot) {
    const EnergyReport rep = refinement_study(s, p, f, 1, 5, rot);
    EXPECT_EQ(rep.classification, Classification::Divergent) << "fan rotation " << rot;
    for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) EXPECT_GT(rep.levels[i + 1].energy, rep.levels[i].energy);
  }
}

TEST(Study, CubeSmoothConverges) {
  const EnergyReport rep = refinement_study(make_cube(), labels("DNNNNN"), TraceData::coordinate(0), 0, 4);
  EXPECT_EQ(rep.classification, Classification::Convergent);
  const double e3 = rep.levels[3].energy, e4 = rep.levels[4].energy;
  EXPECT_LT(std::abs(e4 - e3) / e4, 0.01);
  for (const auto& l : rep.levels) EXPECT_GE(l.energy, 0.0);
  const std::string csv = energy_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "level,vertices,energy,classification");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(Study, OpenBoundaryApproachesTheSameLimitFromBelow) {
  const Surface cube = make_cube();
  const Partition p = labels("DNNNNN");
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int L = 2; L <= 5; ++L) {
    const RefinedSurface rs = refine_surface(cube, L);
    const double closure = minimal_extension_energy(rs, p, TraceData::coordinate(0)).energy;
    const double open = minimal_extension_energy(rs, p, open_boundary(TraceData::coordinate(0))).energy;
    EXPECT_LT(open, closure);
    const double gap = closure - open;
    EXPECT_LT(gap, 0.6 * prev_gap) << "level " << L;  // first-order: roughly halves per level
    prev_gap = gap;
  }
}

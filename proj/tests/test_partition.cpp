#include "polymix/fixtures.hpp"
#include "polymix/partition.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <numeric>
#include <set>

using namespace polymix;

namespace {

constexpr double kPi = std::numbers::pi;

using LabelSet = std::set<std::vector<Label>>;

// Every labeling of the faces that passes validate_partition.
LabelSet brute_force(const Surface& s, Side side) {
  const auto angles = dihedral_angles(s);
  LabelSet out;
  const int F = s.face_count();
  for (std::uint64_t mask = 0; mask < (1ull << F); ++mask) {
    Partition p;
    p.side = side;
    for (int f = 0; f < F; ++f) p.labels.push_back(mask >> f & 1 ? Label::N : Label::D);
    if (validate_partition(angles, p).admissible) out.insert(p.labels);
  }
  return out;
}

LabelSet enumerated(const Surface& s, Side side) {
  LabelSet out;
  for (const Partition& p : enumerate_admissible(s, side)) {
    EXPECT_EQ(p.side, side);
    EXPECT_TRUE(out.insert(p.labels).second) << "duplicate partition";
  }
  return out;
}

std::vector<Surface> small_fixtures() {
  std::vector<Surface> out = {make_cube(), make_regular_tetrahedron(), make_square_pyramid(), make_l_prism(),
                              *builtin_fixture("notched_box_1"), *builtin_fixture("notched_box_corner")};
  for (std::uint64_t seed = 0; seed < 6; ++seed) out.push_back(random_sphere_hull(5 + static_cast<int>(seed % 4), seed));
  return out;
}

Partition labels(std::initializer_list<char> l, Side side = Side::Interior) {
  Partition p;
  p.side = side;
  for (char c : l) p.labels.push_back(c == 'D' ? Label::D : Label::N);
  return p;
}

}  // namespace

TEST(ValidatePartition, CubeTopNeumann) {
  const auto r = validate_partition(make_cube(), labels({'D', 'N', 'D', 'D', 'D', 'D'}));
  EXPECT_TRUE(r.admissible);
  EXPECT_TRUE(r.dirichlet_nonempty);
  EXPECT_TRUE(r.violating_edges.empty());
}

TEST(ValidatePartition, LPrismNotchFaces) {
  const Surface s = make_l_prism();
  // Side faces 4 and 5 meet along the reflex edge through (1,1).
  Partition p = labels({'D', 'D', 'D', 'D', 'D', 'N', 'D', 'D'});
  const auto r = validate_partition(s, p);
  EXPECT_FALSE(r.admissible);
  ASSERT_EQ(r.violating_edges.size(), 1u);
  EXPECT_NEAR(r.violating_edges[0].angle, 3 * kPi / 2, 1e-9);
  const Edge& e = s.edge(r.violating_edges[0].edge);
  EXPECT_NEAR(s.vertex(e.v0).x(), 1, 1e-15);
  EXPECT_NEAR(s.vertex(e.v0).y(), 1, 1e-15);
  // The same labels are fine for the exterior problem at that edge (pi/2),
  // but the top and bottom faces then block.
  p.side = Side::Exterior;
  EXPECT_FALSE(validate_partition(s, p).admissible);
}

TEST(ValidatePartition, AllNeumann) {
  const auto r = validate_partition(make_cube(), labels({'N', 'N', 'N', 'N', 'N', 'N'}));
  EXPECT_FALSE(r.admissible);
  EXPECT_FALSE(r.dirichlet_nonempty);
  EXPECT_TRUE(r.violating_edges.empty());
}

TEST(ValidatePartition, AlternatingPyramid) {
  const auto r = validate_partition(make_square_pyramid(), labels({'D', 'N', 'D', 'N', 'N'}));
  EXPECT_TRUE(r.admissible);
}

TEST(ValidatePartition, LabelCountMismatch) {
  EXPECT_THROW(validate_partition(make_cube(), labels({'D'})), std::invalid_argument);
}

TEST(SideAngle, Duality) {
  DihedralAngle a{0, 0, 1, 0, 1, 0, 0};
  for (double theta : {0.3, kPi / 2, 2.0, 4.0, 5.5}) {
    a.interior_angle = theta;
    a.exterior_angle = 2 * kPi - theta;
    EXPECT_EQ(blocks_color_change(a, Side::Interior), theta >= kPi - kAngleTolerance);
    EXPECT_EQ(blocks_color_change(a, Side::Exterior), theta <= kPi + kAngleTolerance);
    EXPECT_NE(blocks_color_change(a, Side::Interior), blocks_color_change(a, Side::Exterior));
  }
  for (double theta : {kPi, kPi - 0.5e-9, kPi + 0.5e-9}) {
    a.interior_angle = theta;
    a.exterior_angle = 2 * kPi - theta;
    EXPECT_TRUE(blocks_color_change(a, Side::Interior));
    EXPECT_TRUE(blocks_color_change(a, Side::Exterior));
  }
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_admissible(make_cube(), Side::Interior).count(), 63u);
  EXPECT_EQ(enumerate_admissible(make_l_prism(), Side::Interior).count(), 127u);
  EXPECT_EQ(enumerate_admissible(make_regular_tetrahedron(), Side::Exterior).count(), 1u);
  EXPECT_EQ(enumerate_admissible(make_cube(), Side::Exterior).count(), 1u);
  EXPECT_EQ(brute_force(make_cube(), Side::Interior).size(), 63u);
  EXPECT_EQ(brute_force(make_l_prism(), Side::Interior).size(), 127u);
  EXPECT_EQ(brute_force(make_regular_tetrahedron(), Side::Exterior).size(), 1u);
  EXPECT_EQ(brute_force(make_cube(), Side::Exterior).size(), 1u);
}

TEST(Enumerate, OracleEquivalence) {
  for (const Surface& s : small_fixtures()) {
    ASSERT_LE(s.face_count(), 12);
    for (Side side : {Side::Interior, Side::Exterior}) EXPECT_EQ(enumerated(s, side), brute_force(s, side));
  }
}

TEST(Enumerate, OrderAndIndexing) {
  const AdmissibleSet set = enumerate_admissible(make_l_prism(), Side::Interior);
  const QuotientGraph& q = set.quotient();
  ASSERT_EQ(q.size(), 7);
  for (int j = 0; j + 1 < q.size(); ++j) EXPECT_LT(q.classes[j].front(), q.classes[j + 1].front());
  EXPECT_EQ(set.at(0).dirichlet_count(), 8);
  // Partition i sets class j to N when bit j is set.
  const Partition p = set.at(0b101);
  for (int f = 0; f < 8; ++f) {
    const int cls = q.class_of[f];
    EXPECT_EQ(p.labels[f] == Label::N, cls == 0 || cls == 2);
  }
  EXPECT_THROW(set.at(set.count()), std::out_of_range);
  // The merged class holds the two faces of the reflex edge.
  int merged = 0;
  for (const auto& c : q.classes)
    if (c.size() == 2) {
      ++merged;
      EXPECT_EQ(c, (std::vector<int>{4, 5}));
    }
  EXPECT_EQ(merged, 1);
}

TEST(Enumerate, RefusesLargeQuotients) {
  const Surface s = random_sphere_hull(40, 1);  // 76 triangular faces, each its own class
  const AdmissibleSet set = enumerate_admissible(s, Side::Interior);
  EXPECT_EQ(set.class_count(), 76);
  EXPECT_FALSE(set.enumerable());
  EXPECT_EQ(set.count(), std::numeric_limits<std::uint64_t>::max());
  EXPECT_THROW(set.at(0), std::length_error);
  const AdmissibleSet mid = enumerate_admissible(random_sphere_hull(18, 1), Side::Interior);
  EXPECT_EQ(mid.class_count(), 32);
  EXPECT_EQ(mid.count(), (1ull << 32) - 1);
}

TEST(Enumerate, FacePermutationPreservesCount) {
  for (const Surface& s : small_fixtures()) {
    std::vector<int> perm(s.face_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + 1, perm.end());
    std::swap(perm.front(), perm.back());
    const Surface t = s.with_faces_permuted(perm);
    for (Side side : {Side::Interior, Side::Exterior}) {
      const LabelSet a = enumerated(s, side), b = enumerated(t, side);
      EXPECT_EQ(a.size(), b.size());
      LabelSet mapped;
      for (const auto& l : b) {
        std::vector<Label> back(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) back[perm[i]] = l[i];
        mapped.insert(back);
      }
      EXPECT_EQ(mapped, a);
    }
  }
}

TEST(Monochromatic, Examples) {
  EXPECT_TRUE(is_monochromatic(make_cube(), Side::Exterior).monochromatic);
  const auto cube_in = is_monochromatic(make_cube(), Side::Interior);
  EXPECT_FALSE(cube_in.monochromatic);
  ASSERT_TRUE(cube_in.witness);
  EXPECT_EQ(cube_in.witness->labels[0], Label::N);
  for (int f = 1; f < 6; ++f) EXPECT_EQ(cube_in.witness->labels[f], Label::D);
  EXPECT_TRUE(validate_partition(make_cube(), *cube_in.witness).admissible);
  EXPECT_TRUE(is_monochromatic(make_l_prism(), Side::Exterior).monochromatic);
  EXPECT_FALSE(is_monochromatic(make_l_prism(), Side::Exterior).witness);
}

TEST(Monochromatic, AgreesWithCount) {
  for (const Surface& s : small_fixtures())
    for (Side side : {Side::Interior, Side::Exterior})
      EXPECT_EQ(is_monochromatic(s, side).monochromatic, enumerate_admissible(s, side).count() == 1);
}

TEST(Search, ConvexHullsNeverBoth) {
  const SearchReport r = search_both_monochromatic({GeneratorFamily::ConvexHulls, 3, 5, 10}, 100);
  EXPECT_EQ(r.meshes_examined, 100);
  EXPECT_TRUE(r.both_monochromatic_found.empty());
  for (const auto& e : r.entries) {
    if (!e.valid) continue;
    EXPECT_FALSE(e.interior_monochromatic);
    EXPECT_TRUE(e.exterior_monochromatic);
    EXPECT_EQ(e.interior_classes, e.faces);
  }
}

TEST(Search, DeterministicAcrossRunsAndThreads) {
  const GeneratorSpec spec{GeneratorFamily::NotchedBoxes, 17, 1, 3};
  const SearchReport a = search_both_monochromatic(spec, 10, 1);
  const SearchReport b = search_both_monochromatic(spec, 10, 4);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].id, b.entries[i].id);
    EXPECT_EQ(a.entries[i].interior_classes, b.entries[i].interior_classes);
    EXPECT_EQ(a.entries[i].exterior_classes, b.entries[i].exterior_classes);
  }
  EXPECT_EQ(a.both_monochromatic_found, b.both_monochromatic_found);
}

TEST(Search, EmptyBudget) {
  const SearchReport r = search_both_monochromatic({}, 0);
  EXPECT_EQ(r.meshes_examined, 0);
  EXPECT_TRUE(r.entries.empty());
  EXPECT_TRUE(r.both_monochromatic_found.empty());
}

TEST(Search, FlagsRequireSingleClassOnBothSides) {
  for (auto family : {GeneratorFamily::StarSpheres, GeneratorFamily::NotchedBoxes}) {
    const SearchReport r = search_both_monochromatic({family, 5, 1, 2}, 8);
    std::set<std::string> flagged(r.both_monochromatic_found.begin(), r.both_monochromatic_found.end());
    for (const auto& e : r.entries) {
      const bool both = e.valid && e.interior_classes == 1 && e.exterior_classes == 1;
      EXPECT_EQ(flagged.count(e.id) == 1, both);
    }
  }
}

TEST(Labels, ParseSide) {
  EXPECT_EQ(parse_side("interior"), Side::Interior);
  EXPECT_EQ(parse_side("exterior"), Side::Exterior);
  EXPECT_FALSE(parse_side("inside"));
  EXPECT_EQ(parse_family("hulls"), GeneratorFamily::ConvexHulls);
  EXPECT_EQ(parse_family("star"), GeneratorFamily::StarSpheres);
  EXPECT_EQ(parse_family("notched"), GeneratorFamily::NotchedBoxes);
  EXPECT_FALSE(parse_family("boxes"));
}

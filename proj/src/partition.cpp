#include "polymix/partition.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace polymix {

std::string_view to_string(Label l) { return l == Label::D ? "D" : "N"; }
std::string_view to_string(Side s) { return s == Side::Interior ? "interior" : "exterior"; }

std::optional<Side> parse_side(std::string_view s) {
  if (s == "interior") return Side::Interior;
  if (s == "exterior") return Side::Exterior;
  return std::nullopt;
}

int Partition::dirichlet_count() const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), Label::D));
}

double side_angle(const DihedralAngle& a, Side side) {
  return side == Side::Interior ? a.interior_angle : a.exterior_angle;
}

bool blocks_color_change(const DihedralAngle& a, Side side, double tol) {
  return side_angle(a, side) >= std::numbers::pi - tol;
}

AdmissibilityReport validate_partition(std::span<const DihedralAngle> angles, const Partition& p,
                                       double tol) {
  AdmissibilityReport r;
  r.side = p.side;
  r.dirichlet_nonempty = p.dirichlet_count() > 0;
  for (const DihedralAngle& a : angles) {
    if (a.face0 >= static_cast<int>(p.labels.size()) || a.face1 >= static_cast<int>(p.labels.size()))
      throw std::invalid_argument("partition does not label every face");
    if (p.labels[a.face0] == p.labels[a.face1]) continue;
    if (blocks_color_change(a, p.side, tol)) r.violating_edges.push_back({a.edge, side_angle(a, p.side)});
  }
  r.admissible = r.dirichlet_nonempty && r.violating_edges.empty();
  return r;
}

AdmissibilityReport validate_partition(const Surface& s, const Partition& p, double tol) {
  if (static_cast<int>(p.labels.size()) != s.face_count())
    throw std::invalid_argument("partition has " + std::to_string(p.labels.size()) +
                                " labels for " + std::to_string(s.face_count()) + " faces");
  return validate_partition(dihedral_angles(s), p, tol);
}

namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

QuotientGraph build_quotient(std::span<const DihedralAngle> angles, int face_count, Side side,
                             double tol) {
  std::vector<int> parent(face_count);
  std::iota(parent.begin(), parent.end(), 0);
  for (const DihedralAngle& a : angles) {
    if (!blocks_color_change(a, side, tol)) continue;
    int ra = find_root(parent, a.face0), rb = find_root(parent, a.face1);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  QuotientGraph q;
  q.side = side;
  q.class_of.assign(face_count, -1);
  std::vector<int> root_class(face_count, -1);
  // Faces visited in increasing order, so classes come out sorted by least face.
  for (int f = 0; f < face_count; ++f) {
    int root = find_root(parent, f);
    if (root_class[root] < 0) {
      root_class[root] = q.size();
      q.classes.emplace_back();
    }
    q.class_of[f] = root_class[root];
    q.classes[root_class[root]].push_back(f);
  }
  for (const DihedralAngle& a : angles) {
    int ca = q.class_of[a.face0], cb = q.class_of[a.face1];
    if (ca != cb) q.class_adjacency.emplace_back(std::min(ca, cb), std::max(ca, cb));
  }
  std::sort(q.class_adjacency.begin(), q.class_adjacency.end());
  q.class_adjacency.erase(std::unique(q.class_adjacency.begin(), q.class_adjacency.end()),
                          q.class_adjacency.end());
  return q;
}

QuotientGraph build_quotient(const Surface& s, Side side, double tol) {
  return build_quotient(dihedral_angles(s), s.face_count(), side, tol);
}

std::uint64_t AdmissibleSet::count() const {
  const int k = class_count();
  if (k >= 64) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << k) - 1;
}

Partition AdmissibleSet::at(std::uint64_t index) const {
  if (!enumerable())
    throw std::length_error("refusing to enumerate " + std::to_string(class_count()) +
                            " classes (limit " + std::to_string(kMaxEnumerableClasses) + ")");
  if (index >= count()) throw std::out_of_range("partition index out of range");
  Partition p;
  p.side = quotient_.side;
  p.labels.assign(quotient_.class_of.size(), Label::D);
  for (std::size_t f = 0; f < p.labels.size(); ++f)
    if ((index >> quotient_.class_of[f]) & 1) p.labels[f] = Label::N;
  return p;
}

AdmissibleSet::iterator AdmissibleSet::begin() const {
  if (!enumerable()) throw std::length_error("admissible set too large to enumerate");
  return iterator(this, 0);
}

AdmissibleSet::iterator AdmissibleSet::end() const {
  return iterator(this, enumerable() ? count() : 0);
}

AdmissibleSet enumerate_admissible(const Surface& s, Side side, double tol) {
  return AdmissibleSet(build_quotient(s, side, tol));
}

MonochromaticResult is_monochromatic(const Surface& s, Side side, double tol) {
  QuotientGraph q = build_quotient(s, side, tol);
  MonochromaticResult r;
  r.class_count = q.size();
  r.monochromatic = q.size() == 1;
  if (!r.monochromatic) {
    Partition w;
    w.side = side;
    w.labels.assign(s.face_count(), Label::D);
    for (int f : q.classes[0]) w.labels[f] = Label::N;
    r.witness = std::move(w);
  }
  return r;
}

}  // namespace polymix

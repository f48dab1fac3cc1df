#pragma once

#include "polymix/geometry.hpp"

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polymix {

enum class Label : char { D, N };
enum class Side { Interior, Exterior };

std::string_view to_string(Label l);
std::string_view to_string(Side s);
std::optional<Side> parse_side(std::string_view s);

/// Dihedral angles within this distance of pi count as >= pi, so a color
/// change across a flat or nearly flat edge is always rejected.
inline constexpr double kAngleTolerance = 1e-9;

/// Dirichlet/Neumann label per face (OFF face order). N is a union of whole
/// closed faces by construction.
struct Partition {
  std::vector<Label> labels;
  Side side = Side::Interior;

  int dirichlet_count() const;
  bool operator==(const Partition&) const = default;
};

struct EdgeViolation {
  int edge;
  double angle;  // the side-relevant angle
};

struct AdmissibilityReport {
  bool admissible = false;
  bool dirichlet_nonempty = false;
  std::vector<EdgeViolation> violating_edges;
  Side side = Side::Interior;
};

double side_angle(const DihedralAngle& a, Side side);
/// True when the side-relevant angle is >= pi - tol, i.e. the two faces must
/// carry the same label.
bool blocks_color_change(const DihedralAngle& a, Side side, double tol = kAngleTolerance);

AdmissibilityReport validate_partition(std::span<const DihedralAngle> angles, const Partition& p,
                                       double tol = kAngleTolerance);
AdmissibilityReport validate_partition(const Surface& s, const Partition& p,
                                       double tol = kAngleTolerance);

/// Faces merged across every blocking edge. Classes are ordered by their
/// least face index and list faces in increasing order.
struct QuotientGraph {
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;
  std::vector<std::pair<int, int>> class_adjacency;  // a < b, sorted, unique
  Side side = Side::Interior;

  int size() const { return static_cast<int>(classes.size()); }
};

QuotientGraph build_quotient(std::span<const DihedralAngle> angles, int face_count, Side side,
                             double tol = kAngleTolerance);
QuotientGraph build_quotient(const Surface& s, Side side, double tol = kAngleTolerance);

/**
 * All admissible partitions: the labelings constant on every quotient class
 * with at least one Dirichlet class. Partition i sets class j to N exactly
 * when bit j of i is set, for i = 0 .. 2^k - 2; partition 0 is the all-D
 * labeling.
 */
class AdmissibleSet {
 public:
  static constexpr int kMaxEnumerableClasses = 30;

  explicit AdmissibleSet(QuotientGraph q) : quotient_(std::move(q)) {}

  const QuotientGraph& quotient() const { return quotient_; }
  int class_count() const { return quotient_.size(); }
  /// 2^k - 1; saturates at UINT64_MAX for k >= 64.
  std::uint64_t count() const;
  bool enumerable() const { return class_count() <= kMaxEnumerableClasses; }
  /// Throws std::length_error when not enumerable.
  Partition at(std::uint64_t index) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Partition;
    using difference_type = std::ptrdiff_t;

    iterator(const AdmissibleSet* set, std::uint64_t index) : set_(set), index_(index) {}
    Partition operator*() const { return set_->at(index_); }
    iterator& operator++() { ++index_; return *this; }
    iterator operator++(int) { iterator tmp = *this; ++index_; return tmp; }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const AdmissibleSet* set_;
    std::uint64_t index_;
  };

  iterator begin() const;
  iterator end() const;

 private:
  QuotientGraph quotient_;
};

AdmissibleSet enumerate_admissible(const Surface& s, Side side, double tol = kAngleTolerance);

struct MonochromaticResult {
  bool monochromatic = false;
  int class_count = 0;
  std::optional<Partition> witness;  // a nontrivial admissible partition
};

/// Monochromatic: the only admissible partition is N = {} (one class).
MonochromaticResult is_monochromatic(const Surface& s, Side side, double tol = kAngleTolerance);

// ---------------------------------------------------------------------------
// Exploration harness for surfaces monochromatic on both sides.

enum class GeneratorFamily { ConvexHulls, StarSpheres, NotchedBoxes };
std::string_view to_string(GeneratorFamily f);
std::optional<GeneratorFamily> parse_family(std::string_view s);

/// Built-in mesh families. The size range means: hull point count,
/// subdivision levels of the octahedron, or notch count.
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::ConvexHulls;
  std::uint64_t seed = 0;
  int min_size = 4;
  int max_size = 8;
  double amplitude = 0.3;  // radial perturbation for star spheres
};

/// The index-th mesh of the family, with a stable identifier.
Surface generate_mesh(const GeneratorSpec& spec, int index, std::string* id = nullptr);

struct SearchEntry {
  std::string id;
  int faces = 0;
  bool valid = false;
  bool interior_monochromatic = false;
  bool exterior_monochromatic = false;
  int interior_classes = 0;
  int exterior_classes = 0;
};

struct SearchReport {
  int meshes_examined = 0;
  int skipped_invalid = 0;
  std::vector<std::string> both_monochromatic_found;
  std::vector<SearchEntry> entries;  // generation order
};

/// Examines up to `budget` generated meshes. Never claims nonexistence.
SearchReport search_both_monochromatic(const GeneratorSpec& spec, int budget, unsigned threads = 1);

}  // namespace polymix

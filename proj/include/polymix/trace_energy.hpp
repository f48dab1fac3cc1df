#pragma once

#include "polymix/mesh.hpp"
#include "polymix/partition.hpp"

#include <Eigen/Sparse>

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polymix {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Piecewise-linear stiffness matrix with cotangent weights:
/// u^T K u = integral of |grad u|^2 over the mesh. Obtuse triangles keep
/// their negative weights.
Eigen::SparseMatrix<double> cotangent_stiffness(const TriMesh& mesh);
/// Lumped mass: one third of each incident triangle area per vertex.
Eigen::VectorXd lumped_mass(const TriMesh& mesh);

/// Surface faces fan-triangulated and then uniformly subdivided `level`
/// times (every triangle into four). provenance[v] lists the original faces
/// whose closure contains refined vertex v.
struct RefinedSurface {
  int level = 0;
  TriMesh mesh;
  std::vector<int> triangle_face;
  std::vector<std::vector<int>> provenance;
};

RefinedSurface refine_surface(const Surface& s, int level, int fan_rotation = 0);

/// Which refined vertices on the D/N interface carry data.
///  Closure: a vertex touching both D and N is fixed to the common value of
///           its D faces, and left free when those values differ (a jump
///           inside N's closure, e.g. the pyramid apex).
///  Open:    every vertex touching N is free.
/// Both discretize the same continuous problem for data that is continuous
/// on the closure of D. Open converges only at first order in the mesh size.
enum class DBoundary { Closure, Open };

std::string_view to_string(DBoundary b);
std::optional<DBoundary> parse_d_boundary(std::string_view s);

/// Boundary data on D: one constant per Dirichlet face, a single constant,
/// or a coordinate function.
struct TraceData {
  enum class Kind { FaceConstants, Constant, Coordinate };
  Kind kind = Kind::Constant;
  std::map<int, double> face_values;
  double constant = 0;
  int axis = 0;
  DBoundary boundary = DBoundary::Closure;

  static TraceData per_face(std::map<int, double> values);
  static TraceData uniform(double c);
  static TraceData coordinate(int axis);
};

/// Vertices whose every incident original face is labeled D are constrained;
/// vertices touching N follow f.boundary. Throws std::invalid_argument when
/// per-face constants disagree at a vertex with only D faces, or a D face
/// has no value.
struct Constraints {
  std::vector<char> constrained;
  Eigen::VectorXd values;  // meaningful at constrained vertices
};

Constraints constrain(const RefinedSurface& rs, const Partition& p, const TraceData& f);

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 200000;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct ExtensionResult {
  double energy = 0;           // minimized value of the quadratic form
  double gradient_energy = 0;  // integral of |grad f|^2 at the minimizer
  double mass_energy = 0;      // integral of f^2 at the minimizer
  Eigen::VectorXd values;
  int constrained_count = 0;
  int free_count = 0;
  int floating_components = 0;  // free components with no constrained vertex
  int iterations = 0;
  double residual = 0;
};

/// Minimizes integral(mass_weight f^2 + |grad f|^2) over piecewise-linear f
/// equal to `values` at constrained vertices. Free components without any
/// constrained vertex are pinned to the mean constrained value (zero if
/// there is none) when mass_weight is zero.
ExtensionResult minimize_extension(const TriMesh& mesh, const std::vector<char>& constrained,
                                   const Eigen::VectorXd& values, double mass_weight,
                                   const SolverOptions& opt = {});

/// Discrete homogeneous extension seminorm (squared).
ExtensionResult minimal_extension_energy(const RefinedSurface& rs, const Partition& p,
                                         const TraceData& f, const SolverOptions& opt = {});
/// Discrete restriction norm (squared), with the lumped mass term.
ExtensionResult full_restriction_norm(const RefinedSurface& rs, const Partition& p,
                                      const TraceData& f, const SolverOptions& opt = {});

enum class Classification { Convergent, Divergent, Undetermined };
std::string_view to_string(Classification c);

/// CONVERGENT: relative change of the last level below 1%.
/// DIVERGENT: strictly increasing, with the last increment at least half the
/// median increment. Otherwise UNDETERMINED.
Classification classify_energies(std::span<const double> energies);

struct EnergyLevel {
  int level = 0;
  int vertices = 0;
  double energy = 0;
  int iterations = 0;
  double residual = 0;
};

struct EnergyReport {
  std::vector<EnergyLevel> levels;
  Classification classification = Classification::Undetermined;
};

EnergyReport refinement_study(const Surface& s, const Partition& p, const TraceData& f,
                              int min_level, int max_level, int fan_rotation = 0,
                              const SolverOptions& opt = {});

/// CSV: level,vertices,energy,classification
std::string energy_csv(const EnergyReport& report);

}  // namespace polymix

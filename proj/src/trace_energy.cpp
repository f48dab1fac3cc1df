#include "polymix/trace_energy.hpp"

#include "polymix/cg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace polymix {

Eigen::SparseMatrix<double> cotangent_stiffness(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangles.size() * 12);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int i = t[(k + 1) % 3], j = t[(k + 2) % 3], o = t[k];
      const Vec3 a = mesh.vertices[i] - mesh.vertices[o];
      const Vec3 b = mesh.vertices[j] - mesh.vertices[o];
      const double cross = a.cross(b).norm();
      if (cross == 0) throw std::invalid_argument("degenerate triangle in mesh");
      const double w = 0.5 * a.dot(b) / cross;  // half the cotangent at o
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
    }
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.vertices.size()));
  for (const auto& t : mesh.triangles) {
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    const double third = e1.cross(e2).norm() / 6;
    for (int v : t) m[v] += third;
  }
  return m;
}

RefinedSurface refine_surface(const Surface& s, int level, int fan_rotation) {
  if (level < 0) throw std::invalid_argument("refinement level must be non-negative");
  RefinedSurface out;
  out.level = level;
  out.mesh.vertices = s.vertices();
  for (int f = 0; f < s.face_count(); ++f)
    for (const auto& t : triangulate_face(s, f, fan_rotation)) {
      out.mesh.triangles.push_back(t);
      out.triangle_face.push_back(f);
    }

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto [it, fresh] = midpoint.try_emplace({key.first, key.second}, 0);
      if (fresh) {
        it->second = static_cast<int>(out.mesh.vertices.size());
        out.mesh.vertices.push_back(0.5 * (out.mesh.vertices[a] + out.mesh.vertices[b]));
      }
      return it->second;
    };
    std::vector<std::array<int, 3>> tris;
    std::vector<int> faces;
    tris.reserve(out.mesh.triangles.size() * 4);
    for (std::size_t i = 0; i < out.mesh.triangles.size(); ++i) {
      const auto [a, b, c] = out.mesh.triangles[i];
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      for (const auto& t : {std::array{a, ab, ca}, std::array{ab, b, bc}, std::array{ca, bc, c},
                            std::array{ab, bc, ca}}) {
        tris.push_back(t);
        faces.push_back(out.triangle_face[i]);
      }
    }
    out.mesh.triangles = std::move(tris);
    out.triangle_face = std::move(faces);
  }

  out.provenance.assign(out.mesh.vertices.size(), {});
  for (std::size_t i = 0; i < out.mesh.triangles.size(); ++i)
    for (int v : out.mesh.triangles[i]) out.provenance[v].push_back(out.triangle_face[i]);
  for (auto& p : out.provenance) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return out;
}

TraceData TraceData::per_face(std::map<int, double> values) {
  TraceData t;
  t.kind = Kind::FaceConstants;
  t.face_values = std::move(values);
  return t;
}

TraceData TraceData::uniform(double c) {
  TraceData t;
  t.kind = Kind::Constant;
  t.constant = c;
  return t;
}

TraceData TraceData::coordinate(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("coordinate axis must be 0, 1 or 2");
  TraceData t;
  t.kind = Kind::Coordinate;
  t.axis = axis;
  return t;
}

std::string_view to_string(DBoundary b) { return b == DBoundary::Open ? "open" : "closure"; }

std::optional<DBoundary> parse_d_boundary(std::string_view s) {
  if (s == "closure") return DBoundary::Closure;
  if (s == "open") return DBoundary::Open;
  return std::nullopt;
}

Constraints constrain(const RefinedSurface& rs, const Partition& p, const TraceData& f) {
  const std::size_t n = rs.mesh.vertices.size();
  Constraints c{std::vector<char>(n, 0), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  for (std::size_t v = 0; v < n; ++v) {
    const auto& faces = rs.provenance[v];
    std::vector<int> d_faces;
    for (int face : faces) {
      if (face >= static_cast<int>(p.labels.size()))
        throw std::invalid_argument("partition has fewer labels than the surface has faces");
      if (p.labels[face] == Label::D) d_faces.push_back(face);
    }
    if (d_faces.empty()) continue;
    const bool interior = d_faces.size() == faces.size();
    if (!interior && f.boundary == DBoundary::Open) continue;

    double value = 0;
    switch (f.kind) {
      case TraceData::Kind::Constant: value = f.constant; break;
      case TraceData::Kind::Coordinate: value = rs.mesh.vertices[v][f.axis]; break;
      case TraceData::Kind::FaceConstants: {
        bool agree = true;
        for (std::size_t k = 0; k < d_faces.size(); ++k) {
          auto it = f.face_values.find(d_faces[k]);
          if (it == f.face_values.end())
            throw std::invalid_argument("no boundary value for Dirichlet face " + std::to_string(d_faces[k]));
          if (k > 0 && it->second != value) {
            if (interior)
              throw std::invalid_argument("conflicting boundary values at a vertex shared by faces " +
                                          std::to_string(d_faces[0]) + " and " + std::to_string(d_faces[k]));
            agree = false;
          }
          value = it->second;
        }
        if (!agree) continue;
        break;
      }
    }
    c.constrained[v] = 1;
    c.values[v] = value;
  }
  return c;
}

ExtensionResult minimize_extension(const TriMesh& mesh, const std::vector<char>& constrained,
                                   const Eigen::VectorXd& values, double mass_weight,
                                   const SolverOptions& opt) {
  const int n = static_cast<int>(mesh.vertices.size());
  if (static_cast<int>(constrained.size()) != n || values.size() != n)
    throw std::invalid_argument("constraint vectors do not match the mesh");
  const Eigen::SparseMatrix<double> K = cotangent_stiffness(mesh);
  const Eigen::VectorXd M = lumped_mass(mesh);

  ExtensionResult res;
  std::vector<int> free_index(n, -1);
  std::vector<int> free_vertices;
  for (int v = 0; v < n; ++v) {
    if (constrained[v]) {
      ++res.constrained_count;
    } else {
      free_index[v] = static_cast<int>(free_vertices.size());
      free_vertices.push_back(v);
    }
  }
  res.free_count = static_cast<int>(free_vertices.size());
  res.values = Eigen::VectorXd::Zero(n);
  double constrained_mean = 0;
  for (int v = 0; v < n; ++v)
    if (constrained[v]) {
      res.values[v] = values[v];
      constrained_mean += values[v];
    }
  if (res.constrained_count) constrained_mean /= res.constrained_count;

  // Free components that touch no constrained vertex make K singular; pin
  // them when there is no mass term.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> anchored(n, 0);
  for (int col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      if (i == j) continue;
      if (!constrained[i] && !constrained[j]) parent[find(i)] = find(j);
    }
  for (int col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      if (!constrained[i] && constrained[j]) anchored[find(i)] = 1;
    }
  std::vector<char> pinned(n, 0);
  for (int v : free_vertices) {
    const int root = find(v);
    if (anchored[root]) continue;
    if (root == v) ++res.floating_components;
    if (mass_weight == 0) pinned[v] = 1;
  }

  std::vector<int> solve_index(n, -1);
  int m = 0;
  for (int v : free_vertices) {
    if (pinned[v]) {
      res.values[v] = constrained_mean;
    } else {
      solve_index[v] = m++;
    }
  }

  if (m > 0) {
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int col = 0; col < K.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
        const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
        if (solve_index[i] < 0) continue;
        if (solve_index[j] >= 0) {
          trip.emplace_back(solve_index[i], solve_index[j], it.value());
        } else {
          rhs[solve_index[i]] -= it.value() * res.values[j];
        }
      }
    if (mass_weight != 0)
      for (int v = 0; v < n; ++v)
        if (solve_index[v] >= 0) trip.emplace_back(solve_index[v], solve_index[v], mass_weight * M[v]);
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, constrained_mean);
    const CgResult<double> cg = conjugate_gradient(A, rhs, x, opt.tolerance, opt.max_iterations);
    res.iterations = cg.iterations;
    res.residual = cg.relative_residual;
    if (!cg.converged) {
      std::ostringstream msg;
      msg << "conjugate gradients did not converge: relative residual " << cg.relative_residual
          << " after " << cg.iterations << " iterations";
      throw SolverError(msg.str(), cg.relative_residual);
    }
    for (int v = 0; v < n; ++v)
      if (solve_index[v] >= 0) res.values[v] = x[solve_index[v]];
  }

  // Edge form of u^T K u (rows of K sum to zero); exact for constant data.
  for (int col = 0; col < K.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it)
      if (it.row() < it.col()) {
        const double d = res.values[it.row()] - res.values[it.col()];
        res.gradient_energy -= it.value() * d * d;
      }
  res.gradient_energy = std::max(0.0, res.gradient_energy);
  res.mass_energy = res.values.dot(M.cwiseProduct(res.values));
  res.energy = res.gradient_energy + mass_weight * res.mass_energy;
  return res;
}

ExtensionResult minimal_extension_energy(const RefinedSurface& rs, const Partition& p,
                                         const TraceData& f, const SolverOptions& opt) {
  const Constraints c = constrain(rs, p, f);
  return minimize_extension(rs.mesh, c.constrained, c.values, 0.0, opt);
}

ExtensionResult full_restriction_norm(const RefinedSurface& rs, const Partition& p,
                                      const TraceData& f, const SolverOptions& opt) {
  const Constraints c = constrain(rs, p, f);
  return minimize_extension(rs.mesh, c.constrained, c.values, 1.0, opt);
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Convergent: return "CONVERGENT";
    case Classification::Divergent: return "DIVERGENT";
    case Classification::Undetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

Classification classify_energies(std::span<const double> e) {
  const std::size_t n = e.size();
  if (n < 2) return Classification::Undetermined;
  const double last = e[n - 1], prev = e[n - 2];
  if (last == 0 && prev == 0) return Classification::Convergent;
  if (std::abs(last - prev) < 0.01 * std::abs(last)) return Classification::Convergent;
  if (n < 3) return Classification::Undetermined;

  std::vector<double> inc;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(e[i + 1] > e[i])) return Classification::Undetermined;
    inc.push_back(e[i + 1] - e[i]);
  }
  const double last_inc = inc.back();
  std::sort(inc.begin(), inc.end());
  const std::size_t k = inc.size();
  const double median = k % 2 ? inc[k / 2] : 0.5 * (inc[k / 2 - 1] + inc[k / 2]);
  return last_inc >= 0.5 * median ? Classification::Divergent : Classification::Undetermined;
}

EnergyReport refinement_study(const Surface& s, const Partition& p, const TraceData& f,
                              int min_level, int max_level, int fan_rotation,
                              const SolverOptions& opt) {
  if (min_level < 0 || max_level < min_level) throw std::invalid_argument("bad refinement range");
  if (static_cast<int>(p.labels.size()) != s.face_count())
    throw std::invalid_argument("partition label count does not match the face count");
  EnergyReport rep;
  std::vector<double> energies;
  for (int l = min_level; l <= max_level; ++l) {
    const RefinedSurface rs = refine_surface(s, l, fan_rotation);
    const ExtensionResult r = minimal_extension_energy(rs, p, f, opt);
    rep.levels.push_back({l, static_cast<int>(rs.mesh.vertices.size()), r.energy, r.iterations, r.residual});
    energies.push_back(r.energy);
  }
  rep.classification = classify_energies(energies);
  return rep;
}

std::string energy_csv(const EnergyReport& report) {
  std::string out = "level,vertices,energy,classification\n";
  for (const EnergyLevel& l : report.levels) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), l.energy, std::chars_format::general, 17);
    out += std::to_string(l.level) + ',' + std::to_string(l.vertices) + ',' + std::string(buf, ptr) +
           ',' + std::string(to_string(report.classification)) + '\n';
  }
  return out;
}

}  // namespace polymix

// polymix: command-line front end for the mesh, partition, sector, Rellich
// and trace-energy pipelines.

#include "polymix/fixtures.hpp"
#include "polymix/geometry.hpp"
#include "polymix/mesh.hpp"
#include "polymix/partition.hpp"
#include "polymix/rellich.hpp"
#include "polymix/report.hpp"
#include "polymix/sector.hpp"
#include "polymix/trace_energy.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace polymix;

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
  unsigned threads = 0;
  std::string output;
  std::string format = "json";
  bool strict = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Root seed for random streams")->capture_default_str();
  app->add_option("--samples", c.samples, "Monte Carlo sample count")->capture_default_str();
  app->add_option("--threads", c.threads, "Worker thread cap (0 = hardware concurrency)")
      ->capture_default_str();
  app->add_option("--output,-o", c.output, "Report file (default: standard output)");
  app->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_flag("--strict", c.strict, "Exit with status 1 when validation fails");
}

Json common_config(const Common& c) {
  return {{"seed", c.seed}, {"samples", c.samples}, {"threads", c.threads}, {"format", c.format},
          {"strict", c.strict}};
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw InputError("cannot write " + c.output);
  out << text;
}

std::string wrap(const std::string& command, Json config, Json result) {
  return dump_json({{"tool", "polymix"},
                    {"version", kVersion},
                    {"command", command},
                    {"config", std::move(config)},
                    {"result", std::move(result)}});
}

// A path to an OFF file, or the name of a built-in fixture.
Surface load_mesh(const std::string& spec, bool require_valid = true) {
  Surface s;
  if (std::filesystem::exists(spec)) {
    try {
      s = read_off(spec);
    } catch (const OffParseError& e) {
      throw InputError(spec + ": " + e.what());
    } catch (const std::exception& e) {
      throw InputError(spec + ": " + e.what());
    }
  } else if (auto f = builtin_fixture(spec)) {
    s = std::move(*f);
  } else {
    throw InputError("no such mesh file or fixture: " + spec);
  }
  if (require_valid) {
    const MeshDiagnostics d = validate_surface(s);
    if (!d.ok()) {
      std::string msg = spec + ": invalid surface (";
      msg += std::string(to_string(d.violations.front().kind)) + " at " + d.violations.front().location;
      if (d.violations.size() > 1) msg += ", and " + std::to_string(d.violations.size() - 1) + " more";
      throw InputError(msg + "); run 'polymix validate' for details");
    }
  }
  return s;
}

Partition load_partition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_partition_json(ss.str());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

Side side_from(const std::string& text) {
  auto s = parse_side(text);
  if (!s) throw InputError("side must be interior or exterior");
  return *s;
}

std::string labels_string(const Partition& p) {
  std::string s;
  for (Label l : p.labels) s += to_string(l);
  return s;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  return out + '\n';
}

// trace data: x | y | z | const:<c> | faces:<f>=<v>,<f>=<v>...
TraceData parse_trace_data(const std::string& text) {
  if (text == "x" || text == "y" || text == "z") return TraceData::coordinate(text[0] - 'x');
  auto number = [&](std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw InputError("bad number '" + std::string(s) + "' in trace data");
    return v;
  };
  if (text.rfind("const:", 0) == 0) return TraceData::uniform(number(std::string_view(text).substr(6)));
  if (text.rfind("faces:", 0) == 0) {
    std::map<int, double> values;
    std::stringstream ss(text.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("trace data entries look like <face>=<value>");
      const double face = number(std::string_view(item).substr(0, eq));
      if (face < 0 || face != static_cast<int>(face)) throw InputError("bad face index in trace data");
      values[static_cast<int>(face)] = number(std::string_view(item).substr(eq + 1));
    }
    return TraceData::per_face(std::move(values));
  }
  throw InputError("trace data must be x, y, z, const:<c> or faces:<f>=<v>,...");
}

// --- subcommands -----------------------------------------------------------

int run_validate(const Common& c, const std::string& mesh) {
  const Surface s = load_mesh(mesh, false);
  const MeshDiagnostics d = validate_surface(s);
  if (c.format == "csv") {
    std::string out = "kind,location\n";
    for (const Violation& v : d.violations) out += csv_line({std::string(to_string(v.kind)), v.location});
    emit(c, out);
  } else {
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    emit(c, wrap("validate", cfg, report_json(d)));
  }
  return c.strict && !d.ok() ? 1 : 0;
}

int run_angles(const Common& c, const std::string& mesh, bool probe) {
  const Surface s = load_mesh(mesh);
  const auto angles = dihedral_angles(s, DihedralOptions{probe});
  if (c.format == "csv") {
    emit(c, angles_csv(angles));
  } else {
    Json rows = Json::array();
    for (const auto& a : angles) rows.push_back(report_json(a));
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    cfg["probe_check"] = probe;
    emit(c, wrap("angles", cfg, {{"angles", rows}}));
  }
  return 0;
}

int run_check_partition(const Common& c, const std::string& mesh, const std::string& part,
                        const std::string& side) {
  const Surface s = load_mesh(mesh);
  Partition p = load_partition(part);
  if (!side.empty()) p.side = side_from(side);
  if (static_cast<int>(p.labels.size()) != s.face_count())
    throw InputError("partition has " + std::to_string(p.labels.size()) + " labels but the mesh has " +
                     std::to_string(s.face_count()) + " faces");
  const AdmissibilityReport r = validate_partition(s, p);
  if (c.format == "csv") {
    std::string out = "edge,angle\n";
    for (const auto& e : r.violating_edges) out += csv_line({std::to_string(e.edge), format_double(e.angle)});
    emit(c, out);
  } else {
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    cfg["partition"] = part;
    cfg["side"] = std::string(to_string(p.side));
    Json result = report_json(r);
    result["labels"] = report_json(p)["labels"];
    emit(c, wrap("check-partition", cfg, result));
  }
  return c.strict && !r.admissible ? 1 : 0;
}

int run_enumerate(const Common& c, const std::string& mesh, const std::string& side, std::uint64_t limit) {
  const Surface s = load_mesh(mesh);
  const AdmissibleSet set = enumerate_admissible(s, side_from(side));
  std::vector<Partition> listed;
  if (set.enumerable())
    for (std::uint64_t i = 0; i < std::min(limit, set.count()); ++i) listed.push_back(set.at(i));
  if (c.format == "csv") {
    std::string out = "index,labels\n";
    for (std::size_t i = 0; i < listed.size(); ++i) out += csv_line({std::to_string(i), labels_string(listed[i])});
    emit(c, out);
  } else {
    Json parts = Json::array();
    for (const Partition& p : listed) parts.push_back(labels_string(p));
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    cfg["side"] = side;
    cfg["limit"] = limit;
    emit(c, wrap("enumerate", cfg,
                 {{"count", set.count()},
                  {"class_count", set.class_count()},
                  {"quotient", report_json(set.quotient())},
                  {"partitions", parts},
                  {"truncated", listed.size() < set.count()}}));
  }
  return 0;
}

int run_monochromatic(const Common& c, const std::string& mesh, const std::string& side) {
  const Surface s = load_mesh(mesh);
  const MonochromaticResult r = is_monochromatic(s, side_from(side));
  if (c.format == "csv") {
    emit(c, "monochromatic,class_count,witness\n" +
                csv_line({r.monochromatic ? "true" : "false", std::to_string(r.class_count),
                          r.witness ? labels_string(*r.witness) : ""}));
  } else {
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    cfg["side"] = side;
    emit(c, wrap("monochromatic", cfg,
                 {{"monochromatic", r.monochromatic},
                  {"class_count", r.class_count},
                  {"witness", r.witness ? Json(labels_string(*r.witness)) : Json(nullptr)}}));
  }
  return 0;
}

int run_search(const Common& c, const std::string& family, int budget, int min_size, int max_size,
               double amplitude) {
  auto fam = parse_family(family);
  if (!fam) throw InputError("family must be hulls, star or notched");
  if (budget < 0) throw InputError("budget must be non-negative");
  const GeneratorSpec spec{*fam, c.seed, min_size, max_size, amplitude};
  const SearchReport r = search_both_monochromatic(spec, budget, c.threads ? c.threads : 1);
  if (c.format == "csv") {
    std::string out = "id,faces,valid,interior_monochromatic,exterior_monochromatic\n";
    for (const auto& e : r.entries)
      out += csv_line({e.id, std::to_string(e.faces), e.valid ? "true" : "false",
                       e.interior_monochromatic ? "true" : "false",
                       e.exterior_monochromatic ? "true" : "false"});
    emit(c, out);
  } else {
    Json cfg = common_config(c);
    cfg["family"] = family;
    cfg["budget"] = budget;
    cfg["min_size"] = min_size;
    cfg["max_size"] = max_size;
    cfg["amplitude"] = amplitude;
    emit(c, wrap("search", cfg, report_json(r)));
  }
  return 0;
}

int run_rellich(const Common& c, const std::string& mesh, int vertex, double r, double R,
                std::vector<std::string> names) {
  const Surface s = load_mesh(mesh);
  if (vertex < 0 || vertex >= s.vertex_count()) throw InputError("vertex out of range");
  ArchRegion arch;
  try {
    arch = make_arch(s, vertex, r, R);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  std::vector<HarmonicFunction> us;
  if (names.empty()) {
    us = harmonic_catalog<double>(2);
  } else {
    for (const auto& n : names) {
      auto u = find_harmonic<double>(n);
      if (!u) throw InputError("unknown harmonic function: " + n);
      us.push_back(*u);
    }
  }
  SamplingOptions opt;
  opt.threads = c.threads;
  const ArchSamples samples = sample_arch_boundary(arch, c.samples, c.seed, opt);
  std::vector<RellichResult> rows;
  Json results = Json::array();
  for (const auto& u : us) {
    rows.push_back(rellich_identity(samples, u));
    Json entry = report_json(rows.back());
    entry["estimate"] = report_json(rellich_estimate(samples, u));
    results.push_back(entry);
  }
  if (c.format == "csv") {
    emit(c, rellich_csv(mesh, rows));
  } else {
    Json cfg = common_config(c);
    cfg["mesh"] = mesh;
    cfg["vertex"] = vertex;
    cfg["r"] = r;
    cfg["R"] = R;
    Json un = Json::array();
    for (const auto& u : us) un.push_back(u.name());
    cfg["functions"] = un;
    emit(c, wrap("rellich", cfg,
                 {{"acceptance",
                   {{"volume", samples.volume.acceptance()},
                    {"inner_base", samples.inner_base.acceptance()},
                    {"outer_base", samples.outer_base.acceptance()},
                    {"lateral", samples.lateral.acceptance()}}},
                  {"functions", results}}));
  }
  return 0;
}

int run_sector_blowup(const Common& c, const std::string& alpha_text, std::vector<double> eps,
                      double distance, double cone_a, double truncation) {
  auto alpha = parse_angle(alpha_text);
  if (!alpha) throw InputError("cannot parse angle '" + alpha_text + "'");
  std::optional<SectorSolution<double>> sol;
  try {
    sol.emplace(*alpha);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (eps.empty()) eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (double e : eps)
    if (!(e > 0 && e <= 1)) throw InputError("truncation radii must lie in (0, 1]");
  const BlowupReport<double> rep = blowup_study(*sol, eps);
  if (c.format == "csv") {
    emit(c, blowup_csv(rep));
    return 0;
  }
  Json result = report_json(rep);
  Json cfg = common_config(c);
  cfg["alpha"] = alpha_text;
  cfg["eps"] = eps;
  if (distance > 0) {
    if (!(cone_a > 0) || !(truncation > 0)) throw InputError("cone aperture and truncation must be positive");
    cfg["distance"] = distance;
    cfg["cone_a"] = cone_a;
    cfg["truncation"] = truncation;
    result["ntmax"] = report_json(estimate_ntmax(*sol, NtCone<double>{distance, cone_a, truncation}, c.samples));
  }
  emit(c, wrap("sector-blowup", cfg, result));
  return 0;
}

int run_trace_energy(const Common& c, const std::string& mesh, const std::string& part,
                     const std::string& data, const std::string& boundary, int min_level, int max_level,
                     int fan_rotation, bool with_norm, const std::string& export_off) {
  const Surface s = load_mesh(mesh);
  const Partition p = load_partition(part);
  if (static_cast<int>(p.labels.size()) != s.face_count())
    throw InputError("partition label count does not match the face count");
  if (min_level < 0 || max_level < min_level) throw InputError("bad refinement range");
  TraceData f = parse_trace_data(data);
  f.boundary = *parse_d_boundary(boundary);
  EnergyReport rep;
  try {
    rep = refinement_study(s, p, f, min_level, max_level, fan_rotation);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  std::optional<ExtensionResult> norm;
  if (with_norm || !export_off.empty()) {
    const RefinedSurface rs = refine_surface(s, max_level, fan_rotation);
    if (with_norm) norm = full_restriction_norm(rs, p, f);
    if (!export_off.empty()) {
      const ExtensionResult ext = minimal_extension_energy(rs, p, f);
      std::vector<double> values(ext.values.data(), ext.values.data() + ext.values.size());
      std::ofstream out(export_off, std::ios::binary);
      if (!out) throw InputError("cannot write " + export_off);
      out << serialize_off_with_scalars(rs.mesh.vertices, rs.mesh.triangles, values);
    }
  }

  if (c.format == "csv") {
    emit(c, energy_csv(rep));
    return 0;
  }
  Json result = report_json(rep);
  if (norm)
    result["full_norm"] = {{"value", norm->energy},
                           {"gradient_part", norm->gradient_energy},
                           {"mass_part", norm->mass_energy}};
  Json cfg = common_config(c);
  cfg["mesh"] = mesh;
  cfg["partition"] = part;
  cfg["data"] = data;
  cfg["d_boundary"] = boundary;
  cfg["min_level"] = min_level;
  cfg["max_level"] = max_level;
  cfg["fan_rotation"] = fan_rotation;
  emit(c, wrap("trace-energy", cfg, result));
  return 0;
}

int run_fixtures(const Common& c, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir + ": " + ec.message());
  Json files = Json::array();
  std::string csv = "name,path,vertices,faces\n";
  for (const auto& name : builtin_fixture_names()) {
    const Surface s = *builtin_fixture(name);
    const std::string path = (std::filesystem::path(dir) / (name + ".off")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << serialize_off(s);
    files.push_back({{"name", name}, {"path", path}, {"vertices", s.vertex_count()}, {"faces", s.face_count()}});
    csv += csv_line({name, path, std::to_string(s.vertex_count()), std::to_string(s.face_count())});
  }
  if (c.format == "csv") {
    emit(c, csv);
  } else {
    Json cfg = common_config(c);
    cfg["directory"] = dir;
    emit(c, wrap("fixtures", cfg, {{"fixtures", files}}));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral mixed-problem toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  std::string mesh, part, side, alpha = "1.5pi", family = "hulls", data = "x", boundary = "closure", export_off, dir = "fixtures";
  std::vector<std::string> functions;
  std::vector<double> eps;
  bool probe = false, with_norm = false;
  std::uint64_t limit = 1024;
  int budget = 10, min_size = 4, max_size = 8, vertex = 0, min_level = 0, max_level = 4, fan_rotation = 0;
  double amplitude = 0.3, r = 0, R = 0, distance = 0, cone_a = 1, truncation = 0.5;

  auto* validate = app.add_subcommand("validate", "Check the polyhedral surface hypotheses");
  validate->add_option("mesh", mesh, "OFF file or fixture name")->required();

  auto* angles = app.add_subcommand("angles", "Interior and exterior dihedral angles per edge");
  angles->add_option("mesh", mesh, "OFF file or fixture name")->required();
  angles->add_flag("--probe", probe, "Cross-check each angle with a point-in-solid probe");

  auto* check = app.add_subcommand("check-partition", "Check a D/N partition for admissibility");
  check->add_option("mesh", mesh, "OFF file or fixture name")->required();
  check->add_option("partition", part, "Partition JSON file")->required();
  check->add_option("--side", side, "interior or exterior (overrides the file)");

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate admissible partitions");
  enumerate->add_option("mesh", mesh, "OFF file or fixture name")->required();
  enumerate->add_option("--side", side, "interior or exterior")->required();
  enumerate->add_option("--limit", limit, "Maximum number of partitions listed")->capture_default_str();

  auto* mono = app.add_subcommand("monochromatic", "Test whether only the trivial partition is admissible");
  mono->add_option("mesh", mesh, "OFF file or fixture name")->required();
  mono->add_option("--side", side, "interior or exterior")->required();

  auto* search = app.add_subcommand("search", "Look for surfaces monochromatic on both sides");
  search->add_option("--family", family, "hulls, star or notched")->capture_default_str();
  search->add_option("--budget", budget, "Number of generated meshes")->capture_default_str();
  search->add_option("--min-size", min_size, "Smallest generator size")->capture_default_str();
  search->add_option("--max-size", max_size, "Largest generator size")->capture_default_str();
  search->add_option("--amplitude", amplitude, "Radial perturbation for star spheres")->capture_default_str();

  auto* rellich = app.add_subcommand("rellich", "Monte Carlo check of the radial Rellich identity on an arch");
  rellich->add_option("mesh", mesh, "OFF file or fixture name")->required();
  rellich->add_option("--vertex", vertex, "Arch vertex")->required();
  rellich->add_option("--r", r, "Inner radius")->required();
  rellich->add_option("--R", R, "Outer radius")->required();
  rellich->add_option("--u", functions, "Harmonic test functions (default: all of degree <= 2)");

  auto* sector = app.add_subcommand("sector-blowup", "Truncated boundary energy of the sector solution");
  sector->add_option("--alpha", alpha, "Aperture, e.g. 1.5pi or 3pi/2")->capture_default_str();
  sector->add_option("--eps", eps, "Truncation radii (default: 1e-1 .. 1e-6)");
  sector->add_option("--distance", distance, "Crease distance of a base point for the maximal function");
  sector->add_option("--cone-a", cone_a, "Cone aperture parameter")->capture_default_str();
  sector->add_option("--truncation", truncation, "Cone truncation radius")->capture_default_str();

  auto* trace = app.add_subcommand("trace-energy", "Refinement study of the minimal extension energy");
  trace->add_option("mesh", mesh, "OFF file or fixture name")->required();
  trace->add_option("partition", part, "Partition JSON file")->required();
  trace->add_option("--data", data, "x, y, z, const:<c> or faces:<f>=<v>,...")->capture_default_str();
  trace->add_option("--d-boundary", boundary, "Data on D/N interface vertices: closure or open")
      ->check(CLI::IsMember({"closure", "open"}))
      ->capture_default_str();
  trace->add_option("--min-level", min_level, "Coarsest refinement level")->capture_default_str();
  trace->add_option("--max-level", max_level, "Finest refinement level")->capture_default_str();
  trace->add_option("--fan-rotation", fan_rotation, "Fan root offset for triangulation")->capture_default_str();
  trace->add_flag("--norm", with_norm, "Also report the full restriction norm at the finest level");
  trace->add_option("--export-off", export_off, "Write the finest extension as OFF with vertex values");

  auto* fixtures = app.add_subcommand("fixtures", "Write the built-in meshes as OFF files");
  fixtures->add_option("directory", dir, "Target directory")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return run_validate(common, mesh);
    if (*angles) return run_angles(common, mesh, probe);
    if (*check) return run_check_partition(common, mesh, part, side);
    if (*enumerate) return run_enumerate(common, mesh, side, limit);
    if (*mono) return run_monochromatic(common, mesh, side);
    if (*search) return run_search(common, family, budget, min_size, max_size, amplitude);
    if (*rellich) return run_rellich(common, mesh, vertex, r, R, functions);
    if (*sector) return run_sector_blowup(common, alpha, eps, distance, cone_a, truncation);
    if (*trace) return run_trace_energy(common, mesh, part, data, boundary, min_level, max_level, fan_rotation, with_norm, export_off);
    if (*fixtures) return run_fixtures(common, dir);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SamplingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include "polymix/report.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace polymix {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

namespace {

void dump(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

Json estimate_pair(const Estimate& e) { return {{"value", e.value}, {"stderr", e.std_error}}; }

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += '\n';
  return out;
}

Json report_json(const MeshDiagnostics& d) {
  Json v = Json::array();
  for (const Violation& x : d.violations)
    v.push_back({{"kind", std::string(to_string(x.kind))}, {"location", x.location}});
  return {{"ok", d.ok()},
          {"vertices", d.vertex_count},
          {"edges", d.edge_count},
          {"faces", d.face_count},
          {"euler", d.euler_characteristic},
          {"violations", v}};
}

Json report_json(const DihedralAngle& a) {
  return {{"edge_id", a.edge},         {"v0", a.v0},
          {"v1", a.v1},                {"face0", a.face0},
          {"face1", a.face1},          {"interior_angle", a.interior_angle},
          {"exterior_angle", a.exterior_angle}};
}

Json report_json(const Partition& p) {
  Json labels = Json::array();
  for (Label l : p.labels) labels.push_back(std::string(to_string(l)));
  return {{"side", std::string(to_string(p.side))}, {"labels", labels}};
}

Json report_json(const AdmissibilityReport& r) {
  Json edges = Json::array();
  for (const EdgeViolation& e : r.violating_edges) edges.push_back({{"edge", e.edge}, {"angle", e.angle}});
  return {{"admissible", r.admissible},
          {"dirichlet_nonempty", r.dirichlet_nonempty},
          {"side", std::string(to_string(r.side))},
          {"violating_edges", edges}};
}

Json report_json(const QuotientGraph& q) {
  Json adj = Json::array();
  for (auto [a, b] : q.class_adjacency) adj.push_back({a, b});
  return {{"side", std::string(to_string(q.side))}, {"classes", q.classes}, {"class_adjacency", adj}};
}

Json report_json(const SearchReport& r) {
  Json entries = Json::array();
  for (const SearchEntry& e : r.entries)
    entries.push_back({{"id", e.id},
                       {"faces", e.faces},
                       {"valid", e.valid},
                       {"interior_monochromatic", e.interior_monochromatic},
                       {"exterior_monochromatic", e.exterior_monochromatic},
                       {"interior_classes", e.interior_classes},
                       {"exterior_classes", e.exterior_classes}});
  return {{"meshes_examined", r.meshes_examined},
          {"skipped_invalid", r.skipped_invalid},
          {"both_monochromatic_found", r.both_monochromatic_found},
          {"entries", entries}};
}

Json report_json(const TruncatedEnergy<double>& e) {
  return {{"epsilon", e.epsilon},
          {"closed_form", e.closed_form},
          {"quadrature", e.quadrature},
          {"quadrature_error", e.quadrature_error}};
}

Json report_json(const BlowupReport<double>& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(report_json(row));
  return {{"aperture", r.aperture},
          {"exponent", r.exponent},
          {"log_law", r.log_law},
          {"fitted_exponent", r.fitted_exponent},
          {"closed_form_exponent", r.closed_form_exponent},
          {"log_coefficient", r.log_coefficient},
          {"rows", rows}};
}

Json report_json(const NtMaxEstimate<double>& e) {
  return {{"estimate", e.estimate},
          {"sampled_r_min", e.sampled_r_min},
          {"accepted", e.accepted},
          {"r_min", e.r_min},
          {"limit", e.limit}};
}

Json report_json(const Estimate& e) { return estimate_pair(e); }

Json report_json(const RellichResult& r) {
  return {{"u", r.u_name},
          {"vertex", r.vertex},
          {"r", r.r},
          {"R", r.R},
          {"lhs", estimate_pair(r.lhs)},
          {"rhs", estimate_pair(r.rhs)},
          {"inner_base", estimate_pair(r.inner_base)},
          {"outer_base", estimate_pair(r.outer_base)},
          {"lateral", estimate_pair(r.lateral)},
          {"combined_stderr", r.combined_stderr()},
          {"relative_residual", r.relative_residual()}};
}

Json report_json(const RellichBound& b) {
  return {{"u", b.u_name},
          {"lhs", estimate_pair(b.lhs)},
          {"rhs", estimate_pair(b.rhs)},
          {"outer_base", estimate_pair(b.outer_base)},
          {"inner_base", estimate_pair(b.inner_base)},
          {"lateral", estimate_pair(b.lateral)},
          {"slack", estimate_pair(b.slack)}};
}

Json report_json(const EnergyReport& r) {
  Json levels = Json::array();
  for (const EnergyLevel& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"vertices", l.vertices},
                      {"energy", l.energy},
                      {"iterations", l.iterations},
                      {"residual", l.residual}});
  return {{"classification", std::string(to_string(r.classification))}, {"levels", levels}};
}

std::string blowup_csv(const BlowupReport<double>& r) {
  std::string out = "epsilon,I_closed_form,I_quadrature,stderr\n";
  for (const auto& row : r.rows)
    out += format_double(row.epsilon) + ',' + format_double(row.closed_form) + ',' +
           format_double(row.quadrature) + ',' + format_double(row.quadrature_error) + '\n';
  return out;
}

Partition parse_partition_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("partition file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("partition file must be a JSON object");
  Partition p;
  if (j.contains("side")) {
    if (!j["side"].is_string()) throw std::invalid_argument("partition side must be a string");
    auto side = parse_side(j["side"].get<std::string>());
    if (!side) throw std::invalid_argument("partition side must be interior or exterior");
    p.side = *side;
  }
  if (!j.contains("labels") || !j["labels"].is_array())
    throw std::invalid_argument("partition file needs a labels array");
  for (const Json& l : j["labels"]) {
    if (l == "D") {
      p.labels.push_back(Label::D);
    } else if (l == "N") {
      p.labels.push_back(Label::N);
    } else {
      throw std::invalid_argument("partition labels must be \"D\" or \"N\"");
    }
  }
  return p;
}

std::string partition_to_json(const Partition& p) { return dump_json(report_json(p)); }

}  // namespace polymix

namespace polymix {

namespace {

std::optional<double> parse_plain(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_ratio(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_plain(s);
  auto num = parse_plain(s.substr(0, slash));
  auto den = parse_plain(s.substr(slash + 1));
  if (!num || !den || *den == 0) return std::nullopt;
  return *num / *den;
}

}  // namespace

std::optional<double> parse_angle(std::string_view text) {
  const auto at = text.find("pi");
  if (at == std::string_view::npos) return parse_plain(text);
  const std::string_view before = text.substr(0, at), after = text.substr(at + 2);
  double factor = 1;
  if (!before.empty()) {
    auto f = parse_ratio(before);
    if (!f) return std::nullopt;
    factor = *f;
  }
  if (!after.empty()) {
    if (after[0] != '/' || before.find('/') != std::string_view::npos) return std::nullopt;
    auto den = parse_plain(after.substr(1));
    if (!den || *den == 0) return std::nullopt;
    factor /= *den;
  }
  return factor * std::numbers::pi;
}

}  // namespace polymix

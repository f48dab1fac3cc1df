#include "polymix/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace polymix {

OffParseError::OffParseError(const std::string& what, int line)
    : std::runtime_error(what + ", line " + std::to_string(line)), line_(line) {}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

// Splits into non-empty logical lines with comments stripped.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; };
    while (i < raw.size()) {
      while (i < raw.size() && is_space(raw[i])) ++i;
      std::size_t start = i;
      while (i < raw.size() && !is_space(raw[i])) ++i;
      if (i > start) line.tokens.push_back(raw.substr(start, i - start));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (first != last && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, ptr);
}

}  // namespace

Surface parse_off(std::string_view text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw OffParseError("malformed header: empty input", 1);

  std::size_t li = 0;
  Line& header = lines[0];
  std::vector<std::string_view> counts;
  if (header.tokens[0] != "OFF") throw OffParseError("malformed header: expected OFF", header.number);
  int counts_line = header.number;
  if (header.tokens.size() > 1) {
    counts.assign(header.tokens.begin() + 1, header.tokens.end());
  } else {
    if (lines.size() < 2) throw OffParseError("malformed header: missing counts", header.number);
    counts = lines[1].tokens;
    counts_line = lines[1].number;
    li = 1;
  }
  ++li;

  long nv = 0, nf = 0, ne = 0;
  if (counts.size() < 2 || counts.size() > 3 || !parse_number(counts[0], nv) ||
      !parse_number(counts[1], nf) || (counts.size() == 3 && !parse_number(counts[2], ne)) ||
      nv < 0 || nf < 0)
    throw OffParseError("malformed header: bad counts", counts_line);

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i, ++li) {
    if (li >= lines.size())
      throw OffParseError("unexpected end of file in vertex list",
                          lines.back().number + 1);
    const Line& l = lines[li];
    Vec3 p;
    if (l.tokens.size() < 3 || !parse_number(l.tokens[0], p.x()) ||
        !parse_number(l.tokens[1], p.y()) || !parse_number(l.tokens[2], p.z()))
      throw OffParseError("malformed vertex", l.number);
    vertices.push_back(p);
  }

  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i, ++li) {
    if (li >= lines.size())
      throw OffParseError("unexpected end of file in face list", lines.back().number + 1);
    const Line& l = lines[li];
    long n = 0;
    if (!parse_number(l.tokens[0], n)) throw OffParseError("malformed face", l.number);
    if (n < 3) throw OffParseError("face with fewer than 3 vertices", l.number);
    if (static_cast<long>(l.tokens.size()) < n + 1) throw OffParseError("malformed face", l.number);
    Face face(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
      long idx = 0;
      if (!parse_number(l.tokens[k + 1], idx)) throw OffParseError("malformed face", l.number);
      if (idx < 0 || idx >= nv) throw OffParseError("index out of range", l.number);
      face[k] = static_cast<int>(idx);
    }
    Face sorted = face;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw OffParseError("duplicate vertex index within a face", l.number);
    faces.push_back(std::move(face));
  }

  return Surface(std::move(vertices), std::move(faces));
}

Surface read_off(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_off(buf.str());
}

std::string serialize_off(const Surface& s) {
  return serialize_off_with_scalars(s, {});
}

std::string serialize_off_with_scalars(const Surface& s, std::span<const double> values) {
  std::string out = "OFF\n";
  out += std::to_string(s.vertex_count()) + " " + std::to_string(s.face_count()) + " " +
         std::to_string(s.edge_count()) + "\n";
  for (int v = 0; v < s.vertex_count(); ++v) {
    const Vec3& p = s.vertex(v);
    append_double(out, p.x());
    out += ' ';
    append_double(out, p.y());
    out += ' ';
    append_double(out, p.z());
    if (!values.empty()) {
      out += ' ';
      append_double(out, values[v]);
    }
    out += '\n';
  }
  for (const Face& f : s.faces()) {
    out += std::to_string(f.size());
    for (int v : f) out += ' ' + std::to_string(v);
    out += '\n';
  }
  return out;
}

std::string serialize_off_with_scalars(std::span<const Vec3> vertices,
                                       std::span<const std::array<int, 3>> triangles,
                                       std::span<const double> values) {
  std::vector<Face> faces;
  faces.reserve(triangles.size());
  for (const auto& t : triangles) faces.push_back({t[0], t[1], t[2]});
  return serialize_off_with_scalars(Surface({vertices.begin(), vertices.end()}, std::move(faces)),
                                    values);
}

}  // namespace polymix

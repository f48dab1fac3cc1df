#include "polymix/fixtures.hpp"
#include "polymix/partition.hpp"
#include "polymix/random.hpp"

#include <thread>

namespace polymix {

std::string_view to_string(GeneratorFamily f) {
  switch (f) {
    case GeneratorFamily::ConvexHulls: return "hulls";
    case GeneratorFamily::StarSpheres: return "star";
    case GeneratorFamily::NotchedBoxes: return "notched";
  }
  return "unknown";
}

std::optional<GeneratorFamily> parse_family(std::string_view s) {
  if (s == "hulls") return GeneratorFamily::ConvexHulls;
  if (s == "star") return GeneratorFamily::StarSpheres;
  if (s == "notched") return GeneratorFamily::NotchedBoxes;
  return std::nullopt;
}

Surface generate_mesh(const GeneratorSpec& spec, int index, std::string* id) {
  const std::uint64_t seed = derive_seed(spec.seed, 7, static_cast<std::uint64_t>(index));
  Rng rng(seed);
  const int span = std::max(0, spec.max_size - spec.min_size) + 1;
  const int size = spec.min_size + static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
  std::string name = std::string(to_string(spec.family)) + "-" + std::to_string(spec.seed) + "-" +
                     std::to_string(index);
  if (id) *id = name;
  switch (spec.family) {
    case GeneratorFamily::ConvexHulls:
      return random_sphere_hull(size, rng.next());
    case GeneratorFamily::StarSpheres:
      return random_star_sphere(size, spec.amplitude, rng.next());
    case GeneratorFamily::NotchedBoxes: {
      const bool corner = rng.uniform() < 0.5;
      return make_notched_box(random_notched_box_params(rng.next(), size, corner));
    }
  }
  throw std::invalid_argument("unknown generator family");
}

namespace {

SearchEntry examine(const GeneratorSpec& spec, int index) {
  SearchEntry e;
  try {
    Surface s = generate_mesh(spec, index, &e.id);
    e.faces = s.face_count();
    if (!validate_surface(s).ok()) return e;
    auto angles = dihedral_angles(s);
    QuotientGraph qi = build_quotient(angles, s.face_count(), Side::Interior);
    QuotientGraph qe = build_quotient(angles, s.face_count(), Side::Exterior);
    e.valid = true;
    e.interior_classes = qi.size();
    e.exterior_classes = qe.size();
    e.interior_monochromatic = qi.size() == 1;
    e.exterior_monochromatic = qe.size() == 1;
  } catch (const std::exception&) {
    e.valid = false;
  }
  return e;
}

}  // namespace

SearchReport search_both_monochromatic(const GeneratorSpec& spec, int budget, unsigned threads) {
  SearchReport report;
  if (budget <= 0) return report;
  std::vector<SearchEntry> entries(static_cast<std::size_t>(budget));
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(budget)));
  auto work = [&](unsigned first) {
    for (int i = static_cast<int>(first); i < budget; i += static_cast<int>(threads))
      entries[i] = examine(spec, i);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  report.meshes_examined = budget;
  for (SearchEntry& e : entries) {
    if (!e.valid) ++report.skipped_invalid;
    else if (e.interior_monochromatic && e.exterior_monochromatic)
      report.both_monochromatic_found.push_back(e.id);
  }
  report.entries = std::move(entries);
  return report;
}

}  // namespace polymix

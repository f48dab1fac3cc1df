#pragma once

#include "polymix/partition.hpp"
#include "polymix/rellich.hpp"
#include "polymix/sector.hpp"
#include "polymix/trace_energy.hpp"

#include <json.hpp>

#include <string>
#include <optional>
#include <string_view>

namespace polymix {

using Json = nlohmann::json;

/// Shortest-free, locale-independent rendering with 17 significant digits.
std::string format_double(double v);

/// Deterministic JSON text: keys sorted, floats with 17 significant digits,
/// non-finite numbers as null, two-space indent, trailing newline.
std::string dump_json(const Json& j);

Json report_json(const MeshDiagnostics& d);
Json report_json(const DihedralAngle& a);
Json report_json(const Partition& p);
Json report_json(const AdmissibilityReport& r);
Json report_json(const QuotientGraph& q);
Json report_json(const SearchReport& r);
Json report_json(const TruncatedEnergy<double>& e);
Json report_json(const BlowupReport<double>& r);
Json report_json(const NtMaxEstimate<double>& e);
Json report_json(const Estimate& e);
Json report_json(const RellichResult& r);
Json report_json(const RellichBound& b);
Json report_json(const EnergyReport& r);

/// CSV: epsilon,I_closed_form,I_quadrature,stderr
std::string blowup_csv(const BlowupReport<double>& r);

/// {"side":"interior","labels":["D","N",...]}; "side" is optional.
/// Throws std::invalid_argument on malformed input.
Partition parse_partition_json(std::string_view text);
std::string partition_to_json(const Partition& p);

}  // namespace polymix

namespace polymix {

/// Angle literal: a decimal number, or a rational multiple of pi written as
/// "pi", "1.5pi", "3pi/2" or "3/2pi".
std::optional<double> parse_angle(std::string_view text);

}  // namespace polymix

#pragma once

// Text formats and JSON serialization.
//
// Point files: a header line "q d" (q as an integer, or "p^k" for extension
// fields), then one point per line as comma-separated canonical element
// strings. Blank lines and lines starting with '#' are ignored.

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nikodym/bounds.hpp"
#include "nikodym/geometry.hpp"
#include "nikodym/interval.hpp"
#include "nikodym/spread.hpp"

namespace nikodym {

using json = nlohmann::ordered_json;

struct PointsFile {
    const FieldCtx* field = nullptr;
    std::size_t dim = 0;
    std::vector<Point> points;
};

// "3" for prime fields, "3^2" otherwise.
std::string field_header(const FieldCtx& ctx);

PointsFile parse_points(std::istream& in, std::uint64_t field_cap = kDefaultFieldCap);
PointsFile read_points_file(const std::string& path, std::uint64_t field_cap = kDefaultFieldCap);
std::string format_points(const FieldCtx& ctx, std::size_t dim, const std::vector<Point>& points);

// Rejects duplicate points.
PointSet to_point_set(const PointsFile& file, std::uint64_t cap_points = kDefaultPointCap);
std::string format_point_set(const PointSet& set);
PointSet parse_point_set(std::istream& in, std::uint64_t cap_points = kDefaultPointCap);

json rational_json(const Rational& r);
json interval_json(const Interval& iv);
json point_json(std::span<const FieldElem> p);
// {"base": [...], "direction": [...]}
json line_json(const Line& line);

json certificate_json(const SpreadCertificate& cert);
json forced_degree_json(const ForcedDegree& fd);

json bound_step_json(const BoundStep& step);
json bound_report_json(const BoundReport& rep);

// {"q": .., "d": .., "L": .., "mp": [..]}; Sigma m_p is validated by bound_report.
BoundInput parse_bound_input(const json& j);

json instance_json(const NikodymInstance& inst);

} // namespace nikodym

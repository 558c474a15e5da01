#include "nikodym/io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nikodym {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::invalid_argument parse_error(std::size_t line_no, const std::string& what) {
    return std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

std::string field_header(const FieldCtx& ctx) {
    return ctx.k() == 1 ? std::to_string(ctx.p()) : ctx.spec();
}

PointsFile parse_points(std::istream& in, std::uint64_t field_cap) {
    PointsFile out;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            std::istringstream hs(line);
            std::string qtok, dtok, extra;
            if (!(hs >> qtok >> dtok) || (hs >> extra)) throw parse_error(line_no, "expected header 'q d'");
            try {
                out.field = &parse_field_spec(qtok, field_cap);
                std::size_t used = 0;
                const long d = std::stol(dtok, &used);
                if (used != dtok.size() || d < 1) throw std::invalid_argument("bad dimension");
                out.dim = static_cast<std::size_t>(d);
            } catch (const CapExceeded&) {
                throw;
            } catch (const std::exception& e) {
                throw parse_error(line_no, std::string("bad header: ") + e.what());
            }
            have_header = true;
            continue;
        }
        Point p;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const std::string tok = trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            try {
                p.push_back(out.field->elem(out.field->parse(tok)));
            } catch (const std::exception& e) {
                throw parse_error(line_no, "bad element '" + tok + "': " + e.what());
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (p.size() != out.dim)
            throw parse_error(line_no, "expected " + std::to_string(out.dim) + " coordinates, got " + std::to_string(p.size()));
        out.points.push_back(std::move(p));
    }
    if (!have_header) throw std::invalid_argument("points file: missing header");
    return out;
}

PointsFile read_points_file(const std::string& path, std::uint64_t field_cap) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return parse_points(in, field_cap);
}

std::string format_points(const FieldCtx& ctx, std::size_t dim, const std::vector<Point>& points) {
    std::string out = field_header(ctx) + " " + std::to_string(dim) + "\n";
    for (const auto& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) out += ',';
            out += p[i].to_string();
        }
        out += '\n';
    }
    return out;
}

PointSet to_point_set(const PointsFile& file, std::uint64_t cap_points) {
    PointSet S(AffineSpace::make(*file.field, file.dim, cap_points));
    for (const auto& p : file.points) {
        const auto idx = S.space().index(p);
        if (S.contains(idx)) throw std::invalid_argument("duplicate point " + point_to_string(p));
        S.insert(idx);
    }
    return S;
}

std::string format_point_set(const PointSet& set) {
    std::vector<Point> pts;
    for (auto idx : set.members()) pts.push_back(set.space().point(idx));
    return format_points(set.space().ctx(), set.space().dim(), pts);
}

PointSet parse_point_set(std::istream& in, std::uint64_t cap_points) {
    return to_point_set(parse_points(in), cap_points);
}

json rational_json(const Rational& r) {
    return json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

json interval_json(const Interval& iv) {
    return json{{"lo", rational_json(iv.lo)}, {"hi", rational_json(iv.hi)}, {"approx", to_double((iv.lo + iv.hi) / 2)}};
}

json point_json(std::span<const FieldElem> p) {
    json a = json::array();
    for (const auto& e : p) a.push_back(e.to_string());
    return a;
}

json line_json(const Line& line) {
    return json{{"base", point_json(line.base())}, {"direction", point_json(line.dir())}};
}

json certificate_json(const SpreadCertificate& cert) {
    json j{{"k", cert.k},
           {"r", cert.r},
           {"n", cert.n},
           {"D", cert.D},
           {"rank", cert.rank},
           {"columns", cert.columns},
           {"rows", cert.rows},
           {"full_column_rank", cert.full_column_rank},
           {"ratio_num", cert.ratio_num},
           {"ratio_den", cert.ratio_den}};
    if (cert.seed) j["seed"] = *cert.seed;
    return j;
}

json forced_degree_json(const ForcedDegree& fd) {
    return json{{"n", fd.n},
                {"D_star", fd.D_star},
                {"ratio_num", fd.ratio_num},
                {"ratio_den", fd.ratio_den},
                {"k_root", fd.k_root},
                {"at_D_star", certificate_json(fd.at_D_star)},
                {"at_D_star_plus_one", certificate_json(fd.at_D_star_plus_one)}};
}

json bound_step_json(const BoundStep& step) {
    json j{{"name", step.name},
           {"relation", step.relation},
           {"lhs", interval_json(step.lhs)},
           {"rhs", interval_json(step.rhs)},
           {"verdict", verdict_name(step.verdict)},
           {"note", step.note}};
    if (step.margin) j["margin"] = interval_json(*step.margin);
    if (!step.sub.empty()) {
        json sub = json::array();
        for (const auto& s : step.sub) sub.push_back(bound_step_json(s));
        j["sub"] = std::move(sub);
    }
    return j;
}

json bound_report_json(const BoundReport& rep) {
    json j{{"q", rep.q},
           {"d", rep.d},
           {"width", rational_json(rep.width)},
           {"x", rational_json(rep.x)},
           {"x_max", interval_json(rep.x_max)},
           {"x_chain", interval_json(rep.x_chain)},
           {"ratio", interval_json(rep.ratio)},
           {"superlinear_regime", rep.superlinear_regime}};
    if (rep.c) j["c"] = interval_json(*rep.c);
    if (rep.mp_sum_ok) j["mp_sum_ok"] = *rep.mp_sum_ok;
    json steps = json::array();
    for (const auto& s : rep.steps) steps.push_back(bound_step_json(s));
    j["steps"] = std::move(steps);
    return j;
}

BoundInput parse_bound_input(const json& j) {
    BoundInput in;
    try {
        in.q = j.at("q").get<std::uint64_t>();
        in.d = j.at("d").get<std::size_t>();
        const auto& L = j.at("L");
        in.L = L.is_string() ? Integer(L.get<std::string>(), 10) : Integer(static_cast<unsigned long>(L.get<std::uint64_t>()));
        in.mp = j.at("mp").get<std::vector<std::uint64_t>>();
        if (j.contains("c")) in.c = parse_rational(j.at("c").is_string() ? j.at("c").get<std::string>() : j.at("c").dump());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bound input: ") + e.what());
    }
    in.from_instance = true;
    return in;
}

json instance_json(const NikodymInstance& inst) {
    const auto& space = inst.N.space();
    json assoc = json::array();
    for (const auto& [x, id] : inst.assoc)
        assoc.push_back(json{{"point", point_json(space.point(x))}, {"line", line_json(space.lines()[id])}});
    return json{{"policy", inst.policy.name()}, {"size", inst.N.size()}, {"assoc", std::move(assoc)}};
}

} // namespace nikodym

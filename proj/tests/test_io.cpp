#include <doctest.h>

#include <sstream>

#include "nikodym/io.hpp"

using namespace nikodym;

namespace {

PointsFile parse(const std::string& text) {
    std::istringstream in(text);
    return parse_points(in);
}

} // namespace

TEST_CASE("points files round-trip") {
    const auto file = parse("# comment\n\n3 2\n0,1\n 2 , 2 \n\n1,0\n");
    REQUIRE(file.field != nullptr);
    CHECK(file.field->order() == 3);
    CHECK(file.dim == 2);
    REQUIRE(file.points.size() == 3);
    CHECK(file.points[1][0].to_string() == "2");
    CHECK(format_points(*file.field, file.dim, file.points) == "3 2\n0,1\n2,2\n1,0\n");

    const PointSet S = to_point_set(file);
    CHECK(S.size() == 3);
    const std::string canonical = format_point_set(S);
    std::istringstream again(canonical);
    CHECK(parse_point_set(again).members() == S.members());

    // Extension fields use the p^k header and digit-string elements.
    const auto ext = parse("2^2 1\n00\n10\n01\n11\n");
    CHECK(ext.field->order() == 4);
    CHECK(field_header(*ext.field) == "2^2");
    CHECK(format_points(*ext.field, 1, ext.points) == "2^2 1\n00\n10\n01\n11\n");
}

TEST_CASE("malformed points files") {
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
    CHECK_THROWS_AS(parse("# only comments\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3\n0,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("6 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 2 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 2\n0,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 2\n0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 2\n0,1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("3 2\nx,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(to_point_set(parse("3 2\n0,1\n0,1\n")), std::invalid_argument);
    try {
        parse("3 2\n0,1\n\n1,7\n");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).rfind("line 4:", 0) == 0);
    }
}

TEST_CASE("JSON shapes") {
    const json r = rational_json(Rational(Integer(-3), Integer(4)));
    CHECK(r.dump() == R"({"num":"-3","den":"4"})");
    const json iv = interval_json(Interval{Rational(1), Rational(2)});
    CHECK(iv.at("approx").get<double>() == doctest::Approx(1.5));
    CHECK(iv.at("lo").at("num") == "1");

    const FieldCtx& F = make_field(3, 1);
    const Point p{F.from_int(1), F.from_int(2)};
    CHECK(point_json(p).dump() == R"(["1","2"])");
    const Line l = Line::through(p, Point{F.from_int(0), F.from_int(1)});
    const json lj = line_json(l);
    CHECK(lj.contains("base"));
    CHECK(lj.at("direction").size() == 2);

    const auto rep = final_bound(3, 2);
    const json bj = bound_report_json(rep);
    std::vector<std::string> keys;
    for (const auto& [k, v] : bj.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"q", "d", "width", "x", "x_max", "x_chain", "ratio", "superlinear_regime", "steps"});
    CHECK(bj.at("x_max").at("lo").at("num") == "3");
    CHECK(bj.at("steps").size() == rep.steps.size());

    SpreadCertificate cert;
    cert.k = 3;
    cert.seed = 5;
    CHECK(certificate_json(cert).at("seed") == 5);
    cert.seed.reset();
    CHECK_FALSE(certificate_json(cert).contains("seed"));
}

TEST_CASE("bound input") {
    const auto in = parse_bound_input(json::parse(R"({"q":3,"d":2,"L":"2","mp":[2,1,1,0],"c":"1/2"})"));
    CHECK(in.q == 3);
    CHECK(in.d == 2);
    CHECK(in.L == 2);
    CHECK(in.mp == std::vector<std::uint64_t>{2, 1, 1, 0});
    REQUIRE(in.c.has_value());
    CHECK(*in.c == Rational(Integer(1), Integer(2)));
    CHECK(in.from_instance);

    const auto numeric = parse_bound_input(json::parse(R"({"q":3,"d":2,"L":2,"mp":[4]})"));
    CHECK(numeric.L == 2);
    CHECK_FALSE(numeric.c.has_value());
    // Sigma m_p = 4 = (q-1)|L| passes; 5 does not.
    CHECK(bound_report(numeric).mp_sum_ok == std::optional<bool>(true));
    CHECK_THROWS_AS(bound_report(parse_bound_input(json::parse(R"({"q":3,"d":2,"L":2,"mp":[5]})"))), std::invalid_argument);
    CHECK_THROWS_AS(parse_bound_input(json::parse(R"({"q":3,"d":2,"mp":[]})")), std::invalid_argument);
    CHECK_THROWS_AS(parse_bound_input(json::parse(R"({"q":"x","d":2,"L":1,"mp":[]})")), std::invalid_argument);
}

#include <doctest.h>

#include "cli_support.hpp"
#include "nikodym/io.hpp"

using namespace clisupport;
using nikodym::json;

namespace {

json result_of(const Run& r) {
    const json doc = json::parse(r.out);
    return doc.at("result");
}

std::string file(const std::string& name, const std::string& text) {
    const std::string path = tmp_path(name);
    write_file(path, text);
    return "\"" + path + "\"";
}

} // namespace

TEST_CASE("verify") {
    const auto full = file("full.txt", "2 2\n0,0\n0,1\n1,0\n1,1\n");
    const Run ok = run("verify " + full);
    CHECK(ok.code == 0);
    const json doc = json::parse(ok.out);
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"schema_version", "command", "config", "result"});
    CHECK(doc.at("command") == "verify");
    CHECK(doc.at("config").at("field") == "2");
    CHECK(doc.at("result").at("verdict") == "pass");

    const Run empty = run("verify " + file("empty.txt", "2 2\n"));
    CHECK(empty.code == 1);
    CHECK(result_of(empty).at("refutation") == json::array({"0", "0"}));

    // F_3^2 minus two points: each missing point keeps a full punctured line.
    const auto two = file("two.txt", "3 2\n0,2\n1,0\n1,2\n2,0\n2,1\n2,2\n0,1\n");
    const Run inst = run("verify " + two);
    CHECK(inst.code == 0);
    const json res = result_of(inst);
    CHECK(res.at("mp_sum") == res.at("mp_expected"));
    CHECK(res.at("instance").at("assoc").size() == 2);
    CHECK(run("verify --mode nikodym " + two).code == 0);
    // A single point of F_2^2 is weak Nikodym but its own lines leave the set.
    const auto single = file("single.txt", "2 2\n0,0\n");
    CHECK(run("verify " + single).code == 0);
    CHECK(run("verify --mode nikodym " + single).code == 1);
    CHECK(run("verify --mode kakeya " + full).code == 0);
    CHECK(run("verify --tie-break random --seed 4 " + two).code == 0);

    CHECK(run("verify " + file("bad.txt", "2 2\n0,0\n5,1\n")).code == 2);
    CHECK(run("verify " + file("dup.txt", "2 2\n0,0\n0,0\n")).code == 2);
    CHECK(run("verify --field 3 " + full).code == 2);
    CHECK(run("verify \"" + tmp_path("does-not-exist.txt") + "\"").code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("search --mode strong").code == 2);
    CHECK(run("search --field 6").code == 2);
    CHECK(run("field-info --format xml").code == 2);
    CHECK(run("verify --format csv " + file("f.txt", "2 1\n0\n")).code == 2);
    CHECK(run("spread --grid 0,1 --random 3").code == 2);
    CHECK(run("--help").code == 0);
}

TEST_CASE("search") {
    const Run r = run("search --field 2 --dim 2");
    REQUIRE(r.code == 0);
    const json res = result_of(r);
    CHECK(res.at("size") == 1);
    CHECK(res.at("exact") == true);
    CHECK(res.at("kind") == "minimum");

    const json cut = result_of(run("search --field 3 --dim 2 --budget 5"));
    CHECK(cut.at("exact") == false);
    CHECK(cut.at("kind") == "upper_bound");
    CHECK(cut.at("witness").size() == cut.at("size"));

    CHECK(result_of(run("search --field 2 --dim 2 --mode kakeya")).at("size") == 3);
}

TEST_CASE("spread") {
    const Run grid = run("spread --field 11 --dim 2 --grid 0,1,2 --n 1,2,3");
    REQUIRE(grid.code == 0);
    const json res = result_of(grid);
    CHECK(res.at("instance").at("k") == 9);
    REQUIRE(res.at("trend").size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(res.at("trend")[i].at("D_star").get<int>() >= 3 * static_cast<int>(i + 1));

    const Run fixed = run("spread --field 11 --dim 2 --grid 0,1,2 --n 1 --D 4");
    CHECK(fixed.code == 1);
    CHECK(result_of(fixed).at("certificates")[0].contains("kernel_witness"));
    CHECK(run("spread --field 11 --dim 2 --grid 0,1,2 --n 1 --D 3").code == 0);

    const Run pts = run("spread --n 2 --points " + file("line.txt", "7 1\n0\n1\n2\n"));
    CHECK(result_of(pts).at("trend")[0].at("D_star") == 6);

    const json rnd = result_of(run("spread --field 7 --dim 2 --random 5 --seed 3 --n 1"));
    CHECK(rnd.at("certificates")[0].at("at_D_star").at("seed") == 3);
    CHECK(rnd.at("notes").size() == 3);

    const Run csv = run("spread --field 11 --dim 2 --grid 0,1,2 --n 1 --format csv");
    CHECK(csv.out.rfind("# {", 0) == 0);
    CHECK(csv.out.find("\nn,D,rank,") != std::string::npos);
}

TEST_CASE("bound") {
    const Run small = run("bound --field 3 --dim 2");
    CHECK(small.code == 0);
    const json res = result_of(small);
    CHECK(res.at("x_max").at("lo").at("num") == "3");
    CHECK(res.at("x_max").at("hi").at("num") == "3");

    CHECK(run("bound --instance " + file("bad.json", R"({"q":3,"d":2,"L":2,"mp":[5]})")).code == 2);
    const Run good = run("bound --instance " + file("good.json", R"({"q":3,"d":2,"L":2,"mp":[2,1,1]})"));
    CHECK(good.code == 0);
    CHECK(result_of(good).at("mp_sum_ok") == true);
    const Run set = run("bound --instance " + file("set.txt", "3 2\n0,2\n1,0\n1,2\n2,0\n2,1\n2,2\n0,1\n"));
    CHECK(set.code == 0);
    CHECK(result_of(set).at("steps")[0].at("name") == "dim_counting");

    const Run sweep = run("bound --dim 3 --sweep 3..31");
    CHECK(sweep.code == 0);
    const json sw = result_of(sweep);
    CHECK(sw.at("within_factor_2_of_median") == true);
    // Prime powers from 3 to 31.
    CHECK(sw.at("rows").size() == 16);
    const Run sweep_csv = run("bound --dim 3 --sweep 3..9 --format csv");
    CHECK(sweep_csv.code == 0);
    // Config comment, column names, then q = 3, 4, 5, 7, 8, 9.
    CHECK(std::count(sweep_csv.out.begin(), sweep_csv.out.end(), '\n') == 8);
    CHECK(run("bound --sweep 9..3").code == 2);
}

TEST_CASE("field-info and --out") {
    const json res = result_of(run("field-info --field 2^2"));
    CHECK(res.at("q") == 4);
    CHECK(res.at("elements") == json::array({"00", "10", "01", "11"}));
    const std::string path = tmp_path("info.json");
    const Run quiet = run("field-info --field 5 --out \"" + path + "\"");
    CHECK(quiet.code == 0);
    CHECK(quiet.out.empty());
    CHECK(json::parse(read_file(path)).at("result").at("q") == 5);
}

TEST_CASE("identical arguments give identical bytes") {
    for (const std::string args : {"search --field 3 --dim 2 --budget 50 --seed 9", "spread --field 13 --dim 2 --random 4 --seed 2",
                                   "bound --field 7 --dim 3", "field-info --field 9"}) {
        const Run a = run(args), b = run(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(a.out.find("time") == std::string::npos);
    }
}

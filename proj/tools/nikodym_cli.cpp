// nikodym: command-line front end.
//
// Every command prints one JSON document (or a CSV table where one exists)
// that starts with the schema version, the command name and the resolved
// configuration. Output contains no timestamps or addresses, so identical
// arguments give identical bytes.
//
// Exit codes: 0 success or pass, 1 definite negative verdict, 2 usage or
// resource error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nikodym/bounds.hpp"
#include "nikodym/errors.hpp"
#include "nikodym/geometry.hpp"
#include "nikodym/io.hpp"
#include "nikodym/spread.hpp"

using namespace nikodym;

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string field = "3";
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::uint64_t cap_matrix = kDefaultMatrixCap;
    std::uint64_t cap_points = kDefaultPointCap;
    std::uint64_t budget = 100'000;
    std::string format = "json";
    std::string out;
    // Set when --field / --dim appear on the command line; files must then agree.
    bool field_given = false;
    bool dim_given = false;

    json to_json() const {
        return json{{"field", field},         {"dim", dim},       {"seed", seed},
                    {"cap_matrix", cap_matrix}, {"cap_points", cap_points}, {"budget", budget},
                    {"format", format},       {"out", out.empty() ? "-" : out}};
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::string text;
    int code = 0;
};

json header(const std::string& command, const RunConfig& cfg, json extra) {
    json config = cfg.to_json();
    for (auto& [k, v] : extra.items()) config[k] = v;
    return json{{"schema_version", kSchemaVersion}, {"command", command}, {"config", std::move(config)}};
}

// Input files carry their own field and dimension; explicit flags must match them.
void require_matching(const RunConfig& cfg, const FieldCtx& F, std::size_t dim) {
    if (cfg.field_given && &parse_field_spec(cfg.field) != &F)
        throw UsageError("--field " + cfg.field + " disagrees with the input file (" + field_header(F) + ")");
    if (cfg.dim_given && cfg.dim != dim)
        throw UsageError("--dim " + std::to_string(cfg.dim) + " disagrees with the input file (" + std::to_string(dim) + ")");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_json(const RunConfig& cfg, const std::string& command) {
    if (cfg.format != "json") throw UsageError(command + ": only --format json is supported for this command");
}

std::string csv_header_comment(const std::string& command, const RunConfig& cfg, const json& extra) {
    return "# " + header(command, cfg, extra).dump() + "\n";
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string file;
    std::string mode = "weak";
    std::string tie_break = "canonical";
};

Output cmd_verify(const RunConfig& cfg, const VerifyArgs& args) {
    require_json(cfg, "verify");
    const SetProperty prop = parse_property(args.mode);
    const PointsFile file = read_points_file(args.file);
    const PointSet S = to_point_set(file, cfg.cap_points);
    const auto& space = S.space();
    const FieldCtx& F = space.ctx();
    require_matching(cfg, F, space.dim());

    RunConfig resolved = cfg;
    resolved.field = field_header(F);
    resolved.dim = space.dim();
    json doc = header("verify", resolved, json{{"set_file", args.file}, {"mode", args.mode}, {"tie_break", args.tie_break}});

    json result{{"size", S.size()}};
    bool pass = false;
    switch (prop) {
    case SetProperty::WeakNikodym: {
        const TieBreak policy = args.tie_break == "random" ? TieBreak::random(cfg.seed) : TieBreak::canonical();
        const auto check = is_weak_nikodym(S, policy);
        pass = check.holds();
        if (pass) {
            result["instance"] = instance_json(*check.instance);
            std::uint64_t total = 0;
            for (const auto& [p, m] : instance_mp(*check.instance)) total += m;
            result["mp_sum"] = total;
            result["mp_expected"] = static_cast<std::uint64_t>(F.order() - 1) * check.instance->assoc.size();
        } else {
            result["refutation"] = point_json(space.point(*check.refutation));
        }
        break;
    }
    case SetProperty::Nikodym: {
        const auto check = is_nikodym(S);
        pass = check.holds;
        if (pass) {
            json lines = json::array();
            for (const auto& [x, id] : check.lines)
                lines.push_back(json{{"point", point_json(space.point(x))}, {"line", line_json(space.lines()[id])}});
            result["lines"] = std::move(lines);
        } else {
            result["witness"] = point_json(space.point(*check.witness));
        }
        break;
    }
    case SetProperty::Kakeya: {
        const auto check = is_kakeya(S);
        pass = check.holds;
        json missing = json::array();
        for (auto dir : check.missing_directions) missing.push_back(point_json(space.directions()[dir]));
        result["missing_directions"] = std::move(missing);
        json full = json::array();
        for (const auto& id : check.per_direction)
            if (id) full.push_back(line_json(space.lines()[*id]));
        result["lines"] = std::move(full);
        break;
    }
    }
    result["verdict"] = pass ? "pass" : "fail";
    doc["result"] = std::move(result);
    return {dump(doc), pass ? 0 : 1};
}

// ---------------------------------------------------------------------------

struct SearchArgs {
    std::string mode = "weak";
};

Output cmd_search(const RunConfig& cfg, const SearchArgs& args) {
    require_json(cfg, "search");
    if (cfg.budget == 0) throw UsageError("search: --budget must be positive");
    const SetProperty prop = parse_property(args.mode);
    const FieldCtx& F = parse_field_spec(cfg.field);
    const auto space = AffineSpace::make(F, cfg.dim, cfg.cap_points);
    const SearchResult res = min_set(space, prop, cfg.budget, cfg.seed);

    json doc = header("search", cfg, json{{"mode", args.mode}});
    json pts = json::array();
    for (auto idx : res.witness.members()) pts.push_back(point_json(space->point(idx)));
    doc["result"] = json{{"property", property_name(res.property)},
                         {"size", res.size},
                         {"exact", res.exact},
                         {"exhaustive_mode", res.exhaustive_mode},
                         {"evaluations", res.evaluations},
                         {"kind", res.exact ? "minimum" : "upper_bound"},
                         {"witness", std::move(pts)}};
    return {dump(doc), 0};
}

// ---------------------------------------------------------------------------

struct SpreadArgs {
    std::string points;
    std::string grid;
    std::size_t random = 0;
    std::vector<std::uint32_t> n_list{1, 2, 3};
    std::uint32_t D = 0;
};

std::vector<FieldElem> parse_elements(const FieldCtx& F, const std::string& text) {
    std::vector<FieldElem> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(F.elem(F.parse(tok)));
    return out;
}

Output cmd_spread(const RunConfig& cfg, const SpreadArgs& args) {
    const int sources = !args.points.empty() + !args.grid.empty() + (args.random > 0);
    if (sources != 1) throw UsageError("spread: give exactly one of --points, --grid, --random");
    if (args.n_list.empty()) throw UsageError("spread: --n needs at least one value");
    for (auto n : args.n_list)
        if (n == 0) throw UsageError("spread: n must be positive");

    RunConfig resolved = cfg;
    json extra;
    std::vector<std::string> notes{"each certificate speaks only about its own (n, D)"};
    std::optional<SpreadInstance> inst;
    if (!args.points.empty()) {
        const PointsFile file = read_points_file(args.points);
        require_matching(cfg, *file.field, file.dim);
        resolved.field = field_header(*file.field);
        resolved.dim = file.dim;
        inst.emplace(*file.field, file.dim, file.points);
        extra = json{{"source", "points"}, {"points_file", args.points}};
    } else if (!args.grid.empty()) {
        const FieldCtx& F = parse_field_spec(cfg.field);
        std::vector<std::vector<FieldElem>> sets;
        std::stringstream ss(args.grid);
        std::string part;
        while (std::getline(ss, part, ';')) sets.push_back(parse_elements(F, part));
        if (sets.size() == 1)
            while (sets.size() < cfg.dim) sets.push_back(sets.front());
        if (sets.size() != cfg.dim) throw UsageError("spread: --grid needs one set or --dim sets");
        inst.emplace(grid_instance(sets));
        extra = json{{"source", "grid"}, {"grid", args.grid}};
    } else {
        const FieldCtx& F = parse_field_spec(cfg.field);
        inst.emplace(random_instance(F, args.random, cfg.dim, cfg.seed));
        extra = json{{"source", "random"}, {"k", args.random}};
        notes.push_back("random instances are heuristic evidence of genericity only");
        if (small_field_warning(F, args.random, cfg.dim))
            notes.push_back("field is small relative to k; a random sample is unlikely to look generic");
    }
    extra["n"] = args.n_list;
    extra["D"] = args.D == 0 ? json("search") : json(args.D);

    const std::size_t k = inst->k();
    const double k_root = std::pow(static_cast<double>(k), 1.0 / static_cast<double>(inst->r()));
    std::vector<json> certs;
    std::vector<json> trend;
    std::string csv = "n,D,rank,rows,columns,full_column_rank,ratio_num,ratio_den,ratio,k_root\n";
    bool all_full = true;
    auto add_row = [&](const SpreadCertificate& c) {
        std::ostringstream row;
        row << c.n << ',' << c.D << ',' << c.rank << ',' << c.rows << ',' << c.columns << ','
            << (c.full_column_rank ? "true" : "false") << ',' << c.ratio_num << ',' << c.ratio_den << ','
            << json(static_cast<double>(c.ratio_num) / static_cast<double>(c.ratio_den)).dump() << ','
            << json(k_root).dump() << '\n';
        csv += row.str();
    };
    for (auto n : args.n_list) {
        if (args.D) {
            SpreadCertificate c = is_spread_at(*inst, n, args.D, cfg.cap_matrix);
            c.seed = inst->seed;
            json j = certificate_json(c);
            if (!c.full_column_rank) {
                all_full = false;
                if (auto w = kernel_witness(*inst, n, args.D, cfg.cap_matrix)) j["kernel_witness"] = w->to_string();
            }
            certs.push_back(std::move(j));
            add_row(c);
        } else {
            ForcedDegree fd = max_forced_degree(*inst, n, cfg.cap_matrix);
            fd.at_D_star.seed = inst->seed;
            fd.at_D_star_plus_one.seed = inst->seed;
            certs.push_back(forced_degree_json(fd));
            trend.push_back(json{{"n", n},
                                 {"D_star", fd.D_star},
                                 {"ratio_num", fd.ratio_num},
                                 {"ratio_den", fd.ratio_den},
                                 {"ratio", static_cast<double>(fd.ratio_num) / static_cast<double>(fd.ratio_den)},
                                 {"k_root", fd.k_root}});
            add_row(fd.at_D_star);
        }
    }

    if (cfg.format == "csv") return {csv_header_comment("spread", resolved, extra) + csv, all_full ? 0 : 1};

    json doc = header("spread", resolved, extra);
    json pts = json::array();
    for (const auto& p : inst->points()) pts.push_back(point_json(p));
    json result{{"instance", json{{"k", k}, {"r", inst->r()}, {"points", std::move(pts)}}}, {"certificates", certs}};
    if (!trend.empty()) result["trend"] = trend;
    result["notes"] = notes;
    doc["result"] = std::move(result);
    return {dump(doc), all_full ? 0 : 1};
}

// ---------------------------------------------------------------------------

struct BoundArgs {
    std::string instance;
    std::string sweep;
    std::string width = "1/1000000000000";
    std::string c;
};

bool chain_failed(const BoundReport& rep) {
    for (const auto& s : rep.steps) {
        if (s.verdict != Verdict::Fails) continue;
        if (s.name == "final") continue;
        if (s.name == "combine" && !rep.superlinear_regime) continue;
        return true;
    }
    return false;
}

Output cmd_bound(const RunConfig& cfg, const BoundArgs& args) {
    const Rational width = parse_rational(args.width);
    if (width <= 0) throw UsageError("bound: --width must be positive");
    json extra{{"width", args.width}};

    if (!args.sweep.empty()) {
        const auto dots = args.sweep.find("..");
        if (dots == std::string::npos) throw UsageError("bound: --sweep expects a..b");
        const std::uint64_t a = std::stoull(args.sweep.substr(0, dots));
        const std::uint64_t b = std::stoull(args.sweep.substr(dots + 2));
        if (a < 3 || b < a) throw UsageError("bound: --sweep needs 3 <= a <= b");
        extra["sweep"] = args.sweep;
        std::vector<json> rows;
        std::vector<double> ratios;
        std::string csv = "q,d,x_max,x_chain,ratio,final\n";
        for (std::uint64_t q = a; q <= b; ++q) {
            std::uint64_t p;
            unsigned k;
            if (!prime_power(q, p, k)) continue;
            const BoundReport rep = final_bound(q, cfg.dim, width);
            const double r = to_double((rep.ratio.lo + rep.ratio.hi) / 2);
            ratios.push_back(r);
            const std::string verdict = verdict_name(rep.step("final").verdict);
            rows.push_back(json{{"q", q},
                                {"x_max", interval_json(rep.x_max)},
                                {"x_chain", interval_json(rep.x_chain)},
                                {"ratio", interval_json(rep.ratio)},
                                {"final", verdict}});
            std::ostringstream line;
            line << q << ',' << cfg.dim << ',' << json(to_double(rep.x_max.lo)).dump() << ','
                 << json(to_double(rep.x_chain.lo)).dump() << ',' << json(r).dump() << ',' << verdict << '\n';
            csv += line.str();
        }
        RunConfig resolved = cfg;
        resolved.field = "sweep";
        if (cfg.format == "csv") return {csv_header_comment("bound", resolved, extra) + csv, 0};
        std::vector<double> sorted = ratios;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                                : (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]) / 2;
        const bool within = std::all_of(ratios.begin(), ratios.end(),
                                        [&](double r) { return r <= 2 * median && r >= median / 2; });
        const bool monotone = std::is_sorted(ratios.begin(), ratios.end());
        json doc = header("bound", resolved, extra);
        doc["result"] = json{{"rows", rows},
                             {"ratio_median", median},
                             {"ratio_min", sorted.front()},
                             {"ratio_max", sorted.back()},
                             {"within_factor_2_of_median", within},
                             {"ratio_nondecreasing", monotone}};
        return {dump(doc), within ? 0 : 1};
    }

    require_json(cfg, "bound");
    BoundReport rep;
    RunConfig resolved = cfg;
    if (!args.instance.empty()) {
        extra["instance"] = args.instance;
        std::ifstream in(args.instance);
        if (!in) throw std::invalid_argument("cannot open " + args.instance);
        const int first = (in >> std::ws).peek();
        BoundInput input;
        if (first == '{') {
            json j;
            try {
                j = json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument(std::string("instance file: ") + e.what());
            }
            input = parse_bound_input(j);
            if (cfg.field_given && parse_field_spec(cfg.field).order() != input.q)
                throw UsageError("--field " + cfg.field + " disagrees with the instance q");
            if (cfg.dim_given && cfg.dim != input.d) throw UsageError("--dim disagrees with the instance d");
            resolved.field = std::to_string(input.q);
        } else {
            in.seekg(0);
            const PointSet S = to_point_set(parse_points(in), cfg.cap_points);
            require_matching(cfg, S.space().ctx(), S.space().dim());
            const auto check = is_weak_nikodym(S);
            if (!check.holds()) throw std::invalid_argument("instance file: set is not weak Nikodym");
            input.q = S.space().q();
            input.d = S.space().dim();
            input.L = static_cast<unsigned long>(check.instance->assoc.size());
            for (const auto& [p, m] : instance_mp(*check.instance)) input.mp.push_back(m);
            input.from_instance = true;
            resolved.field = field_header(S.space().ctx());
        }
        if (!args.c.empty()) input.c = parse_rational(args.c);
        resolved.dim = input.d;
        rep = bound_report(input, width);
    } else {
        const FieldCtx& F = parse_field_spec(cfg.field);
        rep = final_bound(F.order(), cfg.dim, width);
    }
    extra["c"] = args.c.empty() ? "auto" : args.c;
    json doc = header("bound", resolved, extra);
    doc["result"] = bound_report_json(rep);
    return {dump(doc), chain_failed(rep) ? 1 : 0};
}

// ---------------------------------------------------------------------------

Output cmd_field_info(const RunConfig& cfg) {
    require_json(cfg, "field-info");
    const FieldCtx& F = parse_field_spec(cfg.field);
    json doc = header("field-info", cfg, json::object());
    json result{{"p", F.p()},
                {"k", F.k()},
                {"q", F.order()},
                {"modulus", F.modulus()},
                {"generator", F.render(F.generator())}};
    if (F.order() <= 256) {
        json elems = json::array();
        for (const auto& e : F.elements()) elems.push_back(e.to_string());
        result["elements"] = std::move(elems);
    }
    doc["result"] = std::move(result);
    return {dump(doc), 0};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nikodym sets, polynomial multiplicities and spreadness certificates over finite fields"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    auto* field_opt = app.add_option("--field", cfg.field, "Field GF(q) as q or p^k")->capture_default_str();
    auto* dim_opt = app.add_option("--dim", cfg.dim, "Ambient dimension d (or r for spread)")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--cap-matrix", cfg.cap_matrix, "Maximum matrix entries")->capture_default_str();
    app.add_option("--cap-points", cfg.cap_points, "Maximum points of F_q^d")->capture_default_str();
    app.add_option("--budget", cfg.budget, "Search budget in predicate evaluations")->capture_default_str();
    app.add_option("--format", cfg.format, "Output format")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out, "Write output to this file instead of stdout");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check a point set file for a property");
    verify->add_option("file", va.file, "Point set file")->required();
    verify->add_option("--mode", va.mode)->capture_default_str()->check(CLI::IsMember({"weak", "nikodym", "kakeya"}));
    verify->add_option("--tie-break", va.tie_break)->capture_default_str()->check(CLI::IsMember({"canonical", "random"}));

    SearchArgs sa;
    auto* search = app.add_subcommand("search", "Find a small set with a property");
    search->add_option("--mode", sa.mode)->capture_default_str()->check(CLI::IsMember({"weak", "nikodym", "kakeya"}));

    SpreadArgs pa;
    auto* spread = app.add_subcommand("spread", "Spreadness certificates for a point configuration");
    spread->add_option("--points", pa.points, "Points file (header 'q r')");
    spread->add_option("--grid", pa.grid, "Grid sets, e.g. '0,1,2' or '0,1;0,2'");
    spread->add_option("--random", pa.random, "Number of seeded random points");
    spread->add_option("--n", pa.n_list, "Multiplicities")->delimiter(',')->capture_default_str();
    spread->add_option("--D", pa.D, "Fixed degree bound; omitted means search for D*");

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "Evaluate the inequality chain");
    bound->add_option("--instance", ba.instance, "Point set file or JSON {q, d, L, mp}");
    bound->add_option("--sweep", ba.sweep, "Range of q, e.g. 3..31");
    bound->add_option("--width", ba.width, "Enclosure width")->capture_default_str();
    bound->add_option("--c", ba.c, "Constant c (default automatic)");

    auto* info = app.add_subcommand("field-info", "Describe a finite field");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cfg.field_given = field_opt->count() > 0;
    cfg.dim_given = dim_opt->count() > 0;
    if (cfg.out == "-") cfg.out.clear();

    Output out;
    try {
        if (*verify) out = cmd_verify(cfg, va);
        else if (*search) out = cmd_search(cfg, sa);
        else if (*spread) out = cmd_spread(cfg, pa);
        else if (*bound) out = cmd_bound(cfg, ba);
        else if (*info) out = cmd_field_info(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (cfg.out.empty()) {
        std::cout << out.text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << cfg.out << '\n';
            return 2;
        }
        f << out.text;
    }
    return out.code;
}

#include <doctest.h>

#include <set>

#include "nikodym/geometry.hpp"
#include "support.hpp"

using namespace nikodym;
using namespace testsupport;

namespace {

Point pt(const FieldCtx& F, std::initializer_list<int> xs) {
    Point p;
    for (int x : xs) p.push_back(F.from_int(x));
    return p;
}

PointSet from_mask(const std::shared_ptr<const AffineSpace>& space, std::uint64_t mask) {
    PointSet S(space);
    for (std::uint32_t i = 0; i < space->size(); ++i)
        if (mask >> i & 1) S.insert(i);
    return S;
}

// Punctured-line test straight from the definition, ignoring the incidence tables.
bool naive_has_line(const PointSet& S, const Point& x) {
    const auto& space = S.space();
    for (const auto& dir : space.directions()) {
        const Line l = Line::through(x, dir);
        bool ok = true;
        for (const auto& y : l.points())
            if (y != x && !S.contains(space.index(y))) ok = false;
        if (ok) return true;
    }
    return false;
}

} // namespace

TEST_CASE("line counts") {
    struct Case {
        std::uint64_t p;
        unsigned k;
        std::size_t d;
    };
    for (auto [p, k, d] : std::vector<Case>{{2, 1, 1}, {2, 1, 2}, {3, 1, 2}, {2, 1, 3}, {2, 2, 2}, {5, 1, 2}, {3, 1, 3}, {7, 1, 2}, {2, 1, 4}, {3, 2, 2}, {5, 1, 3}}) {
        const FieldCtx& F = make_field(p, k);
        const auto space = AffineSpace::make(F, d);
        const auto& lines = space->lines();
        CHECK(lines.size() == space->expected_line_count());
        std::set<std::vector<std::uint32_t>> distinct;
        for (std::size_t id = 0; id < lines.size(); ++id) {
            CHECK(space->line_points(id).size() == F.order());
            auto pts = space->line_points(id);
            std::sort(pts.begin(), pts.end());
            distinct.insert(pts);
        }
        CHECK(distinct.size() == lines.size());
        CHECK(std::is_sorted(lines.begin(), lines.end()));
        for (std::uint32_t x = 0; x < space->size(); ++x) CHECK(space->index(space->point(x)) == x);
    }
    CHECK(all_lines(make_field(2, 1), 2).size() == 6);
    CHECK(all_lines(make_field(3, 1), 2).size() == 12);
    CHECK_THROWS_AS(AffineSpace::make(make_field(3, 1), 5, 100), CapExceeded);
}

TEST_CASE("weak Nikodym examples") {
    const FieldCtx& F3 = make_field(3, 1);
    const auto space = AffineSpace::make(F3, 2);
    const auto full = is_weak_nikodym(PointSet::full(space));
    REQUIRE(full.holds());
    CHECK(full.instance->assoc.empty());

    for (std::uint32_t p = 0; p < space->size(); ++p) {
        PointSet S = PointSet::full(space);
        S.erase(p);
        const auto check = is_weak_nikodym(S);
        REQUIRE(check.holds());
        CHECK(check.instance->assoc.size() == 1);
        // The canonical choice is the least line through p.
        CHECK(check.instance->assoc.at(p) == space->lines_through(p).front());
        CHECK(verify_instance(*check.instance));
    }

    const auto sp2 = AffineSpace::make(make_field(2, 1), 2);
    const auto empty = is_weak_nikodym(PointSet(sp2));
    CHECK_FALSE(empty.holds());
    CHECK(empty.refutation == std::optional<std::uint32_t>(0));
}

TEST_CASE("predicates agree with the definitions on every subset of small spaces") {
    for (auto [p, d] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 2}, {3, 1}, {2, 3}}) {
        const FieldCtx& F = make_field(p, 1);
        const auto space = AffineSpace::make(F, d);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space->size()); ++mask) {
            const PointSet S = from_mask(space, mask);
            bool weak = true, strong = true;
            for (std::uint32_t x = 0; x < space->size(); ++x) {
                const bool has = naive_has_line(S, space->point(x));
                strong = strong && has;
                if (!S.contains(x)) weak = weak && has;
            }
            const auto w = is_weak_nikodym(S);
            CHECK(w.holds() == weak);
            CHECK(is_nikodym(S).holds == strong);
            if (strong) CHECK(w.holds());
            if (w.holds()) CHECK(verify_instance(*w.instance));
            bool kakeya = true;
            for (const auto& dir : space->directions()) {
                bool found = false;
                for (std::uint32_t x = 0; x < space->size() && !found; ++x) {
                    bool all = true;
                    for (const auto& y : Line::through(space->point(x), dir).points()) all = all && S.contains(space->index(y));
                    found = all;
                }
                kakeya = kakeya && found;
            }
            CHECK(is_kakeya(S).holds == kakeya);
        }
    }
}

TEST_CASE("Nikodym on F_3^2 minus a point") {
    const auto space = AffineSpace::make(make_field(3, 1), 2);
    PointSet S = PointSet::full(space);
    S.erase(space->index(pt(make_field(3, 1), {1, 1})));
    // Every point still has one of its four lines avoiding the removed point.
    CHECK(is_nikodym(S).holds);
    CHECK(is_nikodym(PointSet::full(space)).holds);
}

TEST_CASE("Kakeya") {
    const FieldCtx& F = make_field(3, 1);
    const auto space = AffineSpace::make(F, 2);
    CHECK(is_kakeya(PointSet::full(space)).holds);
    PointSet line(space);
    for (auto x : space->line_points(0)) line.insert(x);
    const auto one = is_kakeya(line);
    CHECK_FALSE(one.holds);
    CHECK(space->directions().size() == 4);
    CHECK(one.missing_directions.size() == 3);

    // One full line per direction, then remove points one at a time.
    PointSet union_set(space);
    std::vector<std::size_t> chosen;
    for (std::size_t dir = 0; dir < space->directions().size(); ++dir)
        for (std::size_t id = 0; id < space->lines().size(); ++id)
            if (space->line_direction(id) == dir) {
                chosen.push_back(id);
                for (auto x : space->line_points(id)) union_set.insert(x);
                break;
            }
    REQUIRE(is_kakeya(union_set).holds);
    for (auto x : union_set.members()) {
        PointSet S = union_set;
        S.erase(x);
        std::set<std::size_t> expected;
        for (std::size_t dir = 0; dir < chosen.size(); ++dir) {
            const auto& pts = space->line_points(chosen[dir]);
            if (std::find(pts.begin(), pts.end(), x) == pts.end()) continue;
            // Broken unless another full line in that direction survives.
            bool other = false;
            for (std::size_t id = 0; id < space->lines().size(); ++id) {
                if (space->line_direction(id) != dir) continue;
                bool all = true;
                for (auto y : space->line_points(id)) all = all && S.contains(y);
                other = other || all;
            }
            if (!other) expected.insert(dir);
        }
        const auto check = is_kakeya(S);
        CHECK(std::set<std::size_t>(check.missing_directions.begin(), check.missing_directions.end()) == expected);
    }
}

TEST_CASE("m_p accounting") {
    for (auto [p, d] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 2}, {3, 2}, {2, 3}}) {
        const FieldCtx& F = make_field(p, 1);
        const auto space = AffineSpace::make(F, d);
        std::mt19937_64 rng(p * 10 + d);
        for (int trial = 0; trial < 200; ++trial) {
            PointSet S(space);
            for (std::uint32_t i = 0; i < space->size(); ++i)
                if (rng() % 4) S.insert(i);
            const auto check = is_weak_nikodym(S);
            if (!check.holds()) continue;
            const auto mp = instance_mp(*check.instance);
            CHECK(mp.size() == S.size());
            std::uint64_t total = 0;
            for (const auto& [pt_, m] : mp) total += m;
            CHECK(total == (F.order() - 1) * check.instance->assoc.size());
        }
    }
    const FieldCtx& F3 = make_field(3, 1);
    const auto space = AffineSpace::make(F3, 2);
    PointSet S = PointSet::full(space);
    const auto none = instance_mp(*is_weak_nikodym(S).instance);
    for (const auto& [x, m] : none) CHECK(m == 0);
    S.erase(0);
    const auto single = instance_mp(*is_weak_nikodym(S).instance);
    CHECK(std::count_if(single.begin(), single.end(), [](const auto& kv) { return kv.second == 1; }) == 2);
    S.erase(8);
    std::uint64_t total = 0;
    for (const auto& [x, m] : instance_mp(*is_weak_nikodym(S).instance)) total += m;
    CHECK(total == 4);
}

TEST_CASE("random tie-break still yields valid instances") {
    const auto space = AffineSpace::make(make_field(3, 1), 2);
    PointSet S = PointSet::full(space);
    S.erase(0);
    S.erase(4);
    const auto a = is_weak_nikodym(S, TieBreak::random(7));
    const auto b = is_weak_nikodym(S, TieBreak::random(7));
    REQUIRE(a.holds());
    CHECK(a.instance->assoc == b.instance->assoc);
    CHECK(verify_instance(*a.instance));
    CHECK(a.instance->policy.name() == "random");
}

TEST_CASE("exhaustive search matches the all-subsets oracle") {
    for (auto [p, d] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 1}, {2, 2}, {3, 1}, {2, 3}, {2, 4}}) {
        const FieldCtx& F = make_field(p, 1);
        const auto space = AffineSpace::make(F, d);
        const auto res = min_weak_nikodym(F, d, 10'000'000, 0);
        CHECK(res.exhaustive_mode);
        CHECK(res.exact);
        CHECK(res.size == res.witness.size());
        CHECK(is_weak_nikodym(res.witness).holds());
        if (space->size() <= 8) CHECK(res.size == naive_min_weak_nikodym(space));
        if (res.size < space->size()) CHECK(res.size >= F.order() - 1);
    }
    const auto r22 = min_weak_nikodym(make_field(2, 1), 2, 1000, 0);
    CHECK(r22.size == 1);
}

TEST_CASE("search labels and budgets") {
    const FieldCtx& F = make_field(3, 1);
    const auto tiny = min_weak_nikodym(F, 2, 5, 0);
    CHECK_FALSE(tiny.exact);
    CHECK(is_weak_nikodym(tiny.witness).holds());
    const auto full = min_weak_nikodym(F, 2, 10'000'000, 0);
    CHECK(full.exact);
    CHECK(full.size <= tiny.size);

    const auto big = min_set(AffineSpace::make(make_field(5, 1), 2), SetProperty::WeakNikodym, 10'000, 3);
    CHECK_FALSE(big.exhaustive_mode);
    CHECK_FALSE(big.exact);
    CHECK(is_weak_nikodym(big.witness).holds());
    const auto again = min_set(AffineSpace::make(make_field(5, 1), 2), SetProperty::WeakNikodym, 10'000, 3);
    CHECK(again.witness.members() == big.witness.members());

    const auto kak = min_set(AffineSpace::make(make_field(2, 1), 2), SetProperty::Kakeya, 100'000, 0);
    CHECK(kak.exact);
    CHECK(is_kakeya(kak.witness).holds);
    CHECK(kak.size == 3);
    CHECK_THROWS_AS(min_set(AffineSpace::make(F, 2), SetProperty::Nikodym, 0, 0), std::invalid_argument);
    CHECK(parse_property("kakeya") == SetProperty::Kakeya);
    CHECK_THROWS_AS(parse_property("strong"), std::invalid_argument);
}

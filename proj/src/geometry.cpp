#include "nikodym/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nikodym {

// ---------------------------------------------------------------------------
// AffineSpace

std::shared_ptr<const AffineSpace> AffineSpace::make(const FieldCtx& ctx, std::size_t d, std::uint64_t cap_points) {
    if (d < 1) throw std::invalid_argument("AffineSpace: dimension must be positive");
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < d; ++i) {
        size *= ctx.order();
        if (size > cap_points || size > (std::uint64_t{1} << 31))
            throw CapExceeded("AffineSpace: GF(" + ctx.spec() + ")^" + std::to_string(d) + " exceeds the cap of " +
                              std::to_string(cap_points) + " points");
    }
    return std::shared_ptr<const AffineSpace>(new AffineSpace(ctx, d, static_cast<std::uint32_t>(size)));
}

Point AffineSpace::point(std::uint32_t index) const {
    if (index >= size_) throw std::out_of_range("AffineSpace::point: index out of range");
    Point x(d_);
    for (std::size_t i = d_; i-- > 0;) {
        x[i] = FieldElem(*ctx_, index % q());
        index /= q();
    }
    return x;
}

std::uint32_t AffineSpace::index(std::span<const FieldElem> x) const {
    if (x.size() != d_) throw std::invalid_argument("AffineSpace::index: dimension mismatch");
    std::uint32_t idx = 0;
    for (const auto& c : x) {
        if (&c.ctx() != ctx_) throw std::invalid_argument("AffineSpace::index: coordinate over another field");
        idx = idx * q() + c.code();
    }
    return idx;
}

std::uint64_t AffineSpace::expected_line_count() const {
    std::uint64_t qd1 = size_ / q();
    return qd1 * ((std::uint64_t{size_} - 1) / (q() - 1));
}

void AffineSpace::build_lines() const {
    std::call_once(built_, [this] {
        const auto& F = *ctx_;
        const std::uint32_t Q = q();
        for (std::uint32_t idx = 1; idx < size_; ++idx) {
            Point v = point(idx);
            auto nz = std::find_if(v.begin(), v.end(), [](const FieldElem& e) { return !e.is_zero(); });
            if (nz->is_one()) directions_.push_back(std::move(v));
        }

        struct Entry {
            Line line;
            std::size_t dir;
            std::vector<std::uint32_t> pts;
        };
        std::vector<Entry> entries;
        entries.reserve(expected_line_count());
        for (std::size_t di = 0; di < directions_.size(); ++di) {
            const Point& dir = directions_[di];
            std::size_t pivot = 0;
            while (dir[pivot].is_zero()) ++pivot;
            for (std::uint32_t idx = 0; idx < size_; ++idx) {
                Point base = point(idx);
                if (!base[pivot].is_zero()) continue;
                std::vector<std::uint32_t> pts(Q);
                for (std::uint32_t t = 0; t < Q; ++t) {
                    std::uint32_t pi = 0;
                    for (std::size_t i = 0; i < d_; ++i)
                        pi = pi * Q + F.add(base[i].code(), F.mul(t, dir[i].code()));
                    pts[t] = pi;
                }
                entries.push_back({Line::through(std::move(base), dir), di, std::move(pts)});
            }
        }
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.line < b.line; });

        lines_through_.assign(size_, {});
        for (std::size_t id = 0; id < entries.size(); ++id) {
            for (auto p : entries[id].pts) lines_through_[p].push_back(static_cast<std::uint32_t>(id));
            lines_.push_back(std::move(entries[id].line));
            line_direction_.push_back(entries[id].dir);
            line_points_.push_back(std::move(entries[id].pts));
        }
    });
}

const std::vector<Line>& AffineSpace::lines() const {
    build_lines();
    return lines_;
}

const std::vector<std::uint32_t>& AffineSpace::line_points(std::size_t line_id) const {
    build_lines();
    return line_points_.at(line_id);
}

const std::vector<std::uint32_t>& AffineSpace::lines_through(std::uint32_t point) const {
    build_lines();
    return lines_through_.at(point);
}

std::size_t AffineSpace::line_direction(std::size_t line_id) const {
    build_lines();
    return line_direction_.at(line_id);
}

const std::vector<Point>& AffineSpace::directions() const {
    build_lines();
    return directions_;
}

std::vector<Line> all_lines(const FieldCtx& ctx, std::size_t d, std::uint64_t cap_points) {
    return AffineSpace::make(ctx, d, cap_points)->lines();
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::shared_ptr<const AffineSpace> space) : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("PointSet: null space");
    bits_.assign(space_->size(), false);
}

PointSet PointSet::full(std::shared_ptr<const AffineSpace> space) {
    PointSet s(std::move(space));
    s.bits_.assign(s.bits_.size(), true);
    return s;
}

std::uint32_t PointSet::size() const {
    return static_cast<std::uint32_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::uint32_t> PointSet::members() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Predicates

namespace {

bool punctured_inside(const PointSet& S, std::size_t line_id, std::uint32_t x) {
    for (auto p : S.space().line_points(line_id))
        if (p != x && !S.contains(p)) return false;
    return true;
}

bool fully_inside(const PointSet& S, std::size_t line_id) {
    for (auto p : S.space().line_points(line_id))
        if (!S.contains(p)) return false;
    return true;
}

std::optional<std::size_t> first_valid_line(const PointSet& S, std::uint32_t x) {
    for (auto id : S.space().lines_through(x))
        if (punctured_inside(S, id, x)) return id;
    return std::nullopt;
}

} // namespace

std::vector<Line> NikodymInstance::lines() const {
    std::vector<Line> out;
    for (const auto& [x, id] : assoc) out.push_back(N.space().lines()[id]);
    return out;
}

WeakNikodymCheck is_weak_nikodym(const PointSet& S, TieBreak policy) {
    const auto& space = S.space();
    std::mt19937_64 rng(policy.seed);
    NikodymInstance inst{S, {}, policy};
    for (std::uint32_t x = 0; x < space.size(); ++x) {
        if (S.contains(x)) continue;
        if (policy.kind == TieBreak::Kind::Canonical) {
            auto id = first_valid_line(S, x);
            if (!id) return {std::nullopt, x};
            inst.assoc.emplace(x, *id);
        } else {
            std::vector<std::size_t> valid;
            for (auto id : space.lines_through(x))
                if (punctured_inside(S, id, x)) valid.push_back(id);
            if (valid.empty()) return {std::nullopt, x};
            inst.assoc.emplace(x, valid[rng() % valid.size()]);
        }
    }
    return {std::move(inst), std::nullopt};
}

NikodymCheck is_nikodym(const PointSet& S) {
    NikodymCheck out;
    for (std::uint32_t x = 0; x < S.space().size(); ++x) {
        auto id = first_valid_line(S, x);
        if (!id) {
            out.witness = x;
            out.lines.clear();
            return out;
        }
        out.lines.emplace(x, *id);
    }
    out.holds = true;
    return out;
}

KakeyaCheck is_kakeya(const PointSet& S) {
    const auto& space = S.space();
    KakeyaCheck out;
    out.per_direction.assign(space.directions().size(), std::nullopt);
    for (std::size_t id = 0; id < space.lines().size(); ++id) {
        auto& slot = out.per_direction[space.line_direction(id)];
        if (!slot && fully_inside(S, id)) slot = id;
    }
    for (std::size_t di = 0; di < out.per_direction.size(); ++di)
        if (!out.per_direction[di]) out.missing_directions.push_back(di);
    out.holds = out.missing_directions.empty();
    return out;
}

bool verify_instance(const NikodymInstance& inst) {
    const auto& space = inst.N.space();
    for (std::uint32_t x = 0; x < space.size(); ++x) {
        const bool outside = !inst.N.contains(x);
        if (outside != inst.assoc.contains(x)) return false;
    }
    for (const auto& [x, id] : inst.assoc) {
        const Line& line = space.lines().at(id);
        const Point px = space.point(x);
        if (!line.contains(px)) return false;
        for (const auto& p : line.points()) {
            if (p == px) continue;
            if (!inst.N.contains(space.index(p))) return false;
        }
    }
    return true;
}

std::map<std::uint32_t, std::uint64_t> instance_mp(const NikodymInstance& inst) {
    std::map<std::uint32_t, std::uint64_t> mp;
    for (auto p : inst.N.members()) mp.emplace(p, 0);
    for (const auto& [x, id] : inst.assoc)
        for (auto p : inst.N.space().line_points(id))
            if (p != x) ++mp.at(p);
    return mp;
}

std::string property_name(SetProperty p) {
    switch (p) {
    case SetProperty::WeakNikodym: return "weak";
    case SetProperty::Nikodym: return "nikodym";
    case SetProperty::Kakeya: return "kakeya";
    }
    return "?";
}

SetProperty parse_property(const std::string& name) {
    if (name == "weak") return SetProperty::WeakNikodym;
    if (name == "nikodym") return SetProperty::Nikodym;
    if (name == "kakeya") return SetProperty::Kakeya;
    throw std::invalid_argument("unknown mode '" + name + "' (expected nikodym, weak or kakeya)");
}

bool satisfies(const PointSet& S, SetProperty property) {
    const auto& space = S.space();
    switch (property) {
    case SetProperty::WeakNikodym:
        for (std::uint32_t x = 0; x < space.size(); ++x)
            if (!S.contains(x) && !first_valid_line(S, x)) return false;
        return true;
    case SetProperty::Nikodym:
        for (std::uint32_t x = 0; x < space.size(); ++x)
            if (!first_valid_line(S, x)) return false;
        return true;
    case SetProperty::Kakeya: {
        std::vector<bool> covered(space.directions().size(), false);
        std::size_t count = 0;
        for (std::size_t id = 0; id < space.lines().size() && count < covered.size(); ++id) {
            auto di = space.line_direction(id);
            if (!covered[di] && fully_inside(S, id)) {
                covered[di] = true;
                ++count;
            }
        }
        return count == covered.size();
    }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Search

namespace {

bool better(const PointSet& a, const PointSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
}

} // namespace

SearchResult min_set(std::shared_ptr<const AffineSpace> space, SetProperty property, std::uint64_t budget,
                     std::uint64_t seed) {
    const std::uint32_t n = space->size();
    SearchResult result{property, n, PointSet::full(space), false, n <= kExhaustivePointLimit, 0};
    if (budget == 0) throw std::invalid_argument("min_set: budget must be positive");

    std::mt19937_64 rng(seed);
    auto out_of_budget = [&] { return result.evaluations >= budget; };

    // Greedy removal. The properties are closed under supersets, so one pass
    // yields an inclusion-minimal set; further passes reshuffle.
    const std::uint64_t max_passes = result.exhaustive_mode ? 1 : 32;
    for (std::uint64_t pass = 0; pass < max_passes && !out_of_budget(); ++pass) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        for (std::uint32_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        PointSet cur = PointSet::full(space);
        for (auto x : order) {
            if (out_of_budget()) break;
            cur.erase(x);
            ++result.evaluations;
            if (!satisfies(cur, property)) cur.insert(x);
        }
        if (better(cur, result.witness)) {
            result.witness = cur;
            result.size = cur.size();
        }
    }
    if (!result.exhaustive_mode || out_of_budget()) return result;

    // Exhaustive: sizes in increasing order, subsets in lexicographic order; the
    // first hit is the lexicographically least minimum.
    for (std::uint32_t s = 0; s <= result.size; ++s) {
        std::vector<std::uint32_t> comb(s);
        std::iota(comb.begin(), comb.end(), 0u);
        while (true) {
            if (out_of_budget()) return result;
            PointSet cand(space);
            for (auto x : comb) cand.insert(x);
            ++result.evaluations;
            if (satisfies(cand, property)) {
                result.witness = cand;
                result.size = s;
                result.exact = true;
                return result;
            }
            std::size_t i = s;
            while (i > 0 && comb[i - 1] == n - s + i - 1) --i;
            if (i == 0) break;
            ++comb[i - 1];
            for (std::size_t j = i; j < s; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return result;
}

SearchResult min_weak_nikodym(const FieldCtx& ctx, std::size_t d, std::uint64_t budget, std::uint64_t seed) {
    return min_set(AffineSpace::make(ctx, d), SetProperty::WeakNikodym, budget, seed);
}

} // namespace nikodym

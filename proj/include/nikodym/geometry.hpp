#pragma once

// Points and lines of GF(q)^d, Nikodym / weak Nikodym / Kakeya predicates, and
// small-scale extremal search.
//
// Points are indexed mixed-radix over the canonical element order with x_1 the
// most significant coordinate, so index order is lexicographic point order.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "nikodym/field.hpp"
#include "nikodym/poly.hpp"

namespace nikodym {

inline constexpr std::uint64_t kDefaultPointCap = 10'000'000;
// Largest space for which search proves minimality by enumerating subsets.
inline constexpr std::uint64_t kExhaustivePointLimit = 16;

class AffineSpace {
public:
    static std::shared_ptr<const AffineSpace> make(const FieldCtx& ctx, std::size_t d,
                                                   std::uint64_t cap_points = kDefaultPointCap);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t dim() const { return d_; }
    std::uint32_t q() const { return ctx_->order(); }
    std::uint32_t size() const { return size_; }

    Point point(std::uint32_t index) const;
    std::uint32_t index(std::span<const FieldElem> x) const;

    // q^{d-1} (q^d - 1) / (q - 1)
    std::uint64_t expected_line_count() const;

    // Canonical lines sorted by (base, direction); line ids index this vector.
    const std::vector<Line>& lines() const;
    const std::vector<std::uint32_t>& line_points(std::size_t line_id) const;
    const std::vector<std::uint32_t>& lines_through(std::uint32_t point) const;
    std::size_t line_direction(std::size_t line_id) const;
    // Canonical directions (first nonzero coordinate 1), ascending.
    const std::vector<Point>& directions() const;

private:
    AffineSpace(const FieldCtx& ctx, std::size_t d, std::uint32_t size) : ctx_(&ctx), d_(d), size_(size) {}
    void build_lines() const;

    const FieldCtx* ctx_;
    std::size_t d_;
    std::uint32_t size_;

    mutable std::once_flag built_;
    mutable std::vector<Line> lines_;
    mutable std::vector<std::vector<std::uint32_t>> line_points_;
    mutable std::vector<std::vector<std::uint32_t>> lines_through_;
    mutable std::vector<std::size_t> line_direction_;
    mutable std::vector<Point> directions_;
};

std::vector<Line> all_lines(const FieldCtx& ctx, std::size_t d, std::uint64_t cap_points = kDefaultPointCap);

class PointSet {
public:
    explicit PointSet(std::shared_ptr<const AffineSpace> space);
    static PointSet full(std::shared_ptr<const AffineSpace> space);

    const AffineSpace& space() const { return *space_; }
    const std::shared_ptr<const AffineSpace>& space_ptr() const { return space_; }

    bool contains(std::uint32_t index) const { return bits_[index]; }
    void insert(std::uint32_t index) { bits_[index] = true; }
    void erase(std::uint32_t index) { bits_[index] = false; }
    std::uint32_t size() const;
    std::vector<std::uint32_t> members() const;

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.space_ == b.space_ && a.bits_ == b.bits_;
    }

private:
    std::shared_ptr<const AffineSpace> space_;
    std::vector<bool> bits_;
};

// Which valid line to associate with a point when several qualify.
struct TieBreak {
    enum class Kind { Canonical, Random };
    Kind kind = Kind::Canonical;
    std::uint64_t seed = 0;

    static TieBreak canonical() { return {}; }
    static TieBreak random(std::uint64_t seed) { return {Kind::Random, seed}; }
    std::string name() const { return kind == Kind::Canonical ? "canonical" : "random"; }
};

// A set N with, for every x outside N, a line l_x through x whose other q-1
// points lie in N.
struct NikodymInstance {
    PointSet N;
    // x -> line id
    std::map<std::uint32_t, std::size_t> assoc;
    TieBreak policy;

    std::vector<Line> lines() const;
};

struct WeakNikodymCheck {
    std::optional<NikodymInstance> instance;
    // A point outside the set with no valid line.
    std::optional<std::uint32_t> refutation;

    bool holds() const { return instance.has_value(); }
};

WeakNikodymCheck is_weak_nikodym(const PointSet& S, TieBreak policy = TieBreak::canonical());

struct NikodymCheck {
    bool holds = false;
    // First point (in index order) with no valid line.
    std::optional<std::uint32_t> witness;
    // Canonically least valid line for every point, when holds.
    std::map<std::uint32_t, std::size_t> lines;
};

NikodymCheck is_nikodym(const PointSet& S);

struct KakeyaCheck {
    bool holds = false;
    // Least full line in each direction, or nullopt.
    std::vector<std::optional<std::size_t>> per_direction;
    std::vector<std::size_t> missing_directions;
};

KakeyaCheck is_kakeya(const PointSet& S);

// Point-by-point recheck of an instance using line geometry directly.
bool verify_instance(const NikodymInstance& inst);

// For each p in N, the number of associated lines whose punctured point set contains p.
std::map<std::uint32_t, std::uint64_t> instance_mp(const NikodymInstance& inst);

enum class SetProperty { WeakNikodym, Nikodym, Kakeya };

std::string property_name(SetProperty p);
SetProperty parse_property(const std::string& name);

bool satisfies(const PointSet& S, SetProperty property);

struct SearchResult {
    SetProperty property = SetProperty::WeakNikodym;
    std::uint32_t size = 0;
    PointSet witness;
    // True only when every smaller subset was ruled out.
    bool exact = false;
    bool exhaustive_mode = false;
    std::uint64_t evaluations = 0;
};

// Smallest set with the property. Spaces with at most kExhaustivePointLimit
// points are searched exhaustively; larger ones get seeded greedy upper bounds.
SearchResult min_set(std::shared_ptr<const AffineSpace> space, SetProperty property, std::uint64_t budget,
                     std::uint64_t seed);

SearchResult min_weak_nikodym(const FieldCtx& ctx, std::size_t d, std::uint64_t budget, std::uint64_t seed = 0);

} // namespace nikodym

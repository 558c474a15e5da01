#pragma once

// Fixed-parameter certificates of algebraic spreadness.
//
// For points p_1..p_k on an r-flat, M_n(D) has one row per (beta, i) with
// |beta| < n and one column per monomial x^alpha with |alpha| < D; the entry is
// (H^beta x^alpha)(p_i). Full column rank means no nonzero polynomial of degree
// < D has multiplicity >= n at every p_i. A certificate speaks only about its
// own (n, D); asymptotic spreadness is never decided here.

#include <cstdint>
#include <optional>
#include <vector>

#include "nikodym/field.hpp"
#include "nikodym/linalg.hpp"
#include "nikodym/poly.hpp"

namespace nikodym {

class SpreadInstance {
public:
    // Points given directly in r-dimensional coordinates.
    SpreadInstance(const FieldCtx& ctx, std::size_t r, std::vector<Point> points);
    // Ambient points on a flat; stored in flat-local coordinates.
    static SpreadInstance on_flat(const Flat& flat, const std::vector<Point>& ambient_points);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t r() const { return r_; }
    std::size_t k() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const std::optional<Flat>& flat() const { return flat_; }

    // Seed that produced the instance, when sampled.
    std::optional<std::uint64_t> seed;

    // Same points viewed over GF(q^m).
    SpreadInstance embedded(const Embedding& emb) const;
    // Image under an invertible affine map of F^r.
    SpreadInstance transformed(const AffineMap& T) const;

private:
    const FieldCtx* ctx_;
    std::size_t r_;
    std::vector<Point> points_;
    std::optional<Flat> flat_;
};

struct SpreadCertificate {
    std::size_t k = 0;
    std::size_t r = 0;
    std::uint32_t n = 0;
    std::uint32_t D = 0;
    std::size_t rank = 0;
    std::size_t rows = 0;
    std::size_t columns = 0;
    bool full_column_rank = false;
    // D/n in lowest terms.
    std::uint64_t ratio_num = 0;
    std::uint64_t ratio_den = 1;
    std::optional<std::uint64_t> seed;
};

// C(D + r - 1, r): monomials in r variables of degree < D.
std::uint64_t monomial_count(std::size_t r, std::uint32_t D);

Matrix build_Mn(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D,
                std::uint64_t cap = kDefaultMatrixCap);

SpreadCertificate is_spread_at(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D,
                               std::uint64_t cap = kDefaultMatrixCap);

// A nonzero polynomial of degree < D with multiplicity >= n at every point,
// rebuilt from a kernel vector of M_n; nullopt when M_n has full column rank.
std::optional<MultiPoly> kernel_witness(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D,
                                        std::uint64_t cap = kDefaultMatrixCap);

struct ForcedDegree {
    std::uint32_t n = 0;
    // Largest D with full column rank.
    std::uint32_t D_star = 0;
    std::uint64_t ratio_num = 0;
    std::uint64_t ratio_den = 1;
    // k^{1/r}, for comparison with D*/n only.
    double k_root = 0.0;
    SpreadCertificate at_D_star;
    SpreadCertificate at_D_star_plus_one;
};

ForcedDegree max_forced_degree(const SpreadInstance& inst, std::uint32_t n, std::uint64_t cap = kDefaultMatrixCap);

// A_1 x ... x A_r; all sets must have the same size and no repeats.
SpreadInstance grid_instance(const std::vector<std::vector<FieldElem>>& sets);

// k distinct points of F^r drawn with a seeded mt19937_64.
SpreadInstance random_instance(const FieldCtx& ctx, std::size_t k, std::size_t r, std::uint64_t seed);
// True when F^r is too small for a random sample of k points to look generic.
bool small_field_warning(const FieldCtx& ctx, std::size_t k, std::size_t r);

// Hyperplane {x : normal . x = offset}.
class Hyperplane {
public:
    Hyperplane(Point normal, FieldElem offset);
    // {x_d = 0}
    static Hyperplane last_coordinate_zero(const FieldCtx& ctx, std::size_t d);

    const FieldCtx& ctx() const { return offset_.ctx(); }
    std::size_t dim() const { return normal_.size(); }
    const Point& normal() const { return normal_; }
    const FieldElem& offset() const { return offset_; }

    bool contains(std::span<const FieldElem> x) const;
    bool parallel_to(const Line& line) const;
    // The single intersection point with a non-parallel line.
    Point intersect(const Line& line) const;
    // Parameterization whose local coordinates are the ambient coordinates
    // with the pivot (first nonzero normal entry) removed.
    Flat flat() const;
    std::size_t pivot() const { return pivot_; }
    Point local_coords(std::span<const FieldElem> x) const;

    std::string to_string() const;

private:
    Point normal_;
    FieldElem offset_;
    std::size_t pivot_;
};

class LineFamily {
public:
    explicit LineFamily(std::vector<Line> lines, std::optional<Hyperplane> witness = std::nullopt);

    const std::vector<Line>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    const std::optional<Hyperplane>& witness() const { return witness_; }

    LineFamily embedded(const Embedding& emb) const;

private:
    std::vector<Line> lines_;
    std::optional<Hyperplane> witness_;
};

Line embed_line(const Line& line, const Embedding& emb);

// The points l_i meet H, in H-local coordinates (r = d - 1).
SpreadInstance lines_to_points(const LineFamily& family, const Hyperplane& H);

struct HyperplaneSearch {
    std::optional<Hyperplane> hyperplane;
    const FieldCtx* field = nullptr;
    std::uint64_t attempts = 0;
};

// Random search over GF(q^m) for a hyperplane meeting every line of the family
// at distinct points and containing no point of GF(q)^d.
HyperplaneSearch find_avoiding_hyperplane(const LineFamily& family, const FieldCtx& base, std::size_t d,
                                          unsigned m, std::uint64_t seed, std::uint64_t budget = 10'000);

} // namespace nikodym

#include "nikodym/spread.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace nikodym {

namespace {

void require_distinct(const std::vector<Point>& pts, const char* who) {
    std::vector<Point> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument(std::string(who) + ": points are not pairwise distinct");
}

FieldElem dot(std::span<const FieldElem> a, std::span<const FieldElem> b) {
    FieldElem acc = a.front().ctx().zero();
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// SpreadInstance

SpreadInstance::SpreadInstance(const FieldCtx& ctx, std::size_t r, std::vector<Point> points)
    : ctx_(&ctx), r_(r), points_(std::move(points)) {
    for (const auto& p : points_) {
        if (p.size() != r_) throw std::invalid_argument("SpreadInstance: point has wrong dimension");
        for (const auto& x : p)
            if (&x.ctx() != ctx_) throw std::invalid_argument("SpreadInstance: coordinate over another field");
    }
    require_distinct(points_, "SpreadInstance");
}

SpreadInstance SpreadInstance::on_flat(const Flat& flat, const std::vector<Point>& ambient_points) {
    std::vector<Point> local;
    for (const auto& p : ambient_points) {
        auto t = flat.local_coords(p);
        if (!t) throw std::invalid_argument("SpreadInstance: point " + point_to_string(p) + " is not on the flat");
        local.push_back(std::move(*t));
    }
    SpreadInstance inst(flat.ctx(), flat.dim(), std::move(local));
    inst.flat_ = flat;
    return inst;
}

SpreadInstance SpreadInstance::embedded(const Embedding& emb) const {
    if (&emb.source() != ctx_) throw std::invalid_argument("SpreadInstance::embedded: wrong source field");
    std::vector<Point> pts;
    for (const auto& p : points_) {
        Point q;
        for (const auto& x : p) q.push_back(emb(x));
        pts.push_back(std::move(q));
    }
    SpreadInstance out(emb.target(), r_, std::move(pts));
    out.seed = seed;
    return out;
}

SpreadInstance SpreadInstance::transformed(const AffineMap& T) const {
    if (T.dim() != r_) throw std::invalid_argument("SpreadInstance::transformed: dimension mismatch");
    std::vector<Point> pts;
    for (const auto& p : points_) pts.push_back(T(p));
    SpreadInstance out(*ctx_, r_, std::move(pts));
    out.seed = seed;
    return out;
}

// ---------------------------------------------------------------------------
// M_n and certificates

std::uint64_t monomial_count(std::size_t r, std::uint32_t D) {
    if (D == 0) return 0;
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= r; ++i) c = c * (D - 1 + i) / i;
    return c;
}

Matrix build_Mn(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D, std::uint64_t cap) {
    if (n < 1 || D < 1) throw std::invalid_argument("build_Mn: n and D must be positive");
    const std::size_t r = inst.r();
    const std::uint64_t rows = inst.k() * monomial_count(r, n);
    const std::uint64_t cols = monomial_count(r, D);
    if (rows * cols > cap)
        throw CapExceeded("build_Mn: " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " matrix exceeds cap of " + std::to_string(cap) + " entries");
    const auto& F = inst.ctx();
    const auto orders = exponents_below(r, n);
    const auto monomials = exponents_below(r, D);

    Matrix M(F, rows, cols);
    std::size_t row = 0;
    for (const auto& p : inst.points()) {
        // powers[j][e] = p_j^e
        std::vector<std::vector<std::uint32_t>> powers(r, std::vector<std::uint32_t>(D, 1));
        for (std::size_t j = 0; j < r; ++j)
            for (std::uint32_t e = 1; e < D; ++e) powers[j][e] = F.mul(powers[j][e - 1], p[j].code());
        for (const auto& beta : orders) {
            for (std::size_t c = 0; c < monomials.size(); ++c) {
                const auto& alpha = monomials[c];
                if (!beta.divides(alpha)) continue;
                std::uint32_t v = 1;
                for (std::size_t j = 0; j < r && v != 0; ++j)
                    v = F.mul(F.mul(v, binomial_mod_p(alpha[j], beta[j], F.p())), powers[j][alpha[j] - beta[j]]);
                M(row, c) = v;
            }
            ++row;
        }
    }
    return M;
}

SpreadCertificate is_spread_at(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D, std::uint64_t cap) {
    const Matrix M = build_Mn(inst, n, D, cap);
    SpreadCertificate cert;
    cert.k = inst.k();
    cert.r = inst.r();
    cert.n = n;
    cert.D = D;
    cert.rows = M.rows();
    cert.columns = M.cols();
    cert.rank = M.rank();
    cert.full_column_rank = cert.rank == cert.columns;
    const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(D, n);
    cert.ratio_num = D / g;
    cert.ratio_den = n / g;
    cert.seed = inst.seed;
    return cert;
}

std::optional<MultiPoly> kernel_witness(const SpreadInstance& inst, std::uint32_t n, std::uint32_t D,
                                        std::uint64_t cap) {
    const Matrix M = build_Mn(inst, n, D, cap);
    const auto kernel = M.kernel_basis();
    if (kernel.empty()) return std::nullopt;
    const auto monomials = exponents_below(inst.r(), D);
    MultiPoly f(inst.ctx(), inst.r());
    for (std::size_t c = 0; c < monomials.size(); ++c) f.add_term(monomials[c], kernel.front()[c]);
    return f;
}

ForcedDegree max_forced_degree(const SpreadInstance& inst, std::uint32_t n, std::uint64_t cap) {
    if (n < 1) throw std::invalid_argument("max_forced_degree: n must be positive");
    if (inst.k() == 0) throw std::invalid_argument("max_forced_degree: empty point set");
    const std::uint64_t rows = inst.k() * monomial_count(inst.r(), n);
    // More columns than rows can never have full column rank.
    std::uint32_t hi = 1;
    while (monomial_count(inst.r(), hi) <= rows) ++hi;
    std::uint32_t lo = 0;
    while (hi - lo > 1) {
        const std::uint32_t mid = lo + (hi - lo) / 2;
        if (is_spread_at(inst, n, mid, cap).full_column_rank) lo = mid;
        else hi = mid;
    }
    ForcedDegree out;
    out.n = n;
    out.D_star = lo;
    const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(lo, n);
    out.ratio_num = lo / g;
    out.ratio_den = n / g;
    out.k_root = inst.r() == 0 ? 0.0 : std::pow(static_cast<double>(inst.k()), 1.0 / static_cast<double>(inst.r()));
    out.at_D_star = is_spread_at(inst, n, lo, cap);
    out.at_D_star_plus_one = is_spread_at(inst, n, lo + 1, cap);
    return out;
}

SpreadInstance grid_instance(const std::vector<std::vector<FieldElem>>& sets) {
    if (sets.empty()) throw std::invalid_argument("grid_instance: need at least one coordinate set");
    const std::size_t a = sets.front().size();
    if (a == 0) throw std::invalid_argument("grid_instance: empty coordinate set");
    const auto& F = sets.front().front().ctx();
    for (const auto& s : sets) {
        if (s.size() != a) throw std::invalid_argument("grid_instance: coordinate sets differ in size");
        std::vector<FieldElem> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("grid_instance: repeated element in a coordinate set");
        for (const auto& x : s)
            if (&x.ctx() != &F) throw std::invalid_argument("grid_instance: elements over different fields");
    }
    const std::size_t r = sets.size();
    std::vector<Point> pts;
    std::vector<std::size_t> idx(r, 0);
    while (true) {
        Point p;
        for (std::size_t j = 0; j < r; ++j) p.push_back(sets[j][idx[j]]);
        pts.push_back(std::move(p));
        std::size_t j = r;
        while (j > 0) {
            --j;
            if (++idx[j] < a) break;
            idx[j] = 0;
            if (j == 0) return SpreadInstance(F, r, std::move(pts));
        }
    }
}

SpreadInstance random_instance(const FieldCtx& ctx, std::size_t k, std::size_t r, std::uint64_t seed) {
    long double space = 1;
    for (std::size_t j = 0; j < r; ++j) space *= ctx.order();
    if (static_cast<long double>(k) > space)
        throw std::invalid_argument("random_instance: cannot draw " + std::to_string(k) + " distinct points from GF(" +
                                    ctx.spec() + ")^" + std::to_string(r));
    std::mt19937_64 rng(seed);
    std::set<Point> seen;
    std::vector<Point> pts;
    while (pts.size() < k) {
        Point p;
        for (std::size_t j = 0; j < r; ++j) p.emplace_back(ctx, static_cast<std::uint32_t>(rng() % ctx.order()));
        if (seen.insert(p).second) pts.push_back(std::move(p));
    }
    SpreadInstance inst(ctx, r, std::move(pts));
    inst.seed = seed;
    return inst;
}

bool small_field_warning(const FieldCtx& ctx, std::size_t k, std::size_t) { return ctx.order() < 4 * k; }

// ---------------------------------------------------------------------------
// Hyperplanes and line families

Hyperplane::Hyperplane(Point normal, FieldElem offset) : normal_(std::move(normal)), offset_(offset), pivot_(0) {
    if (normal_.empty()) throw std::invalid_argument("Hyperplane: dimension must be positive");
    for (const auto& x : normal_)
        if (&x.ctx() != &offset_.ctx()) throw std::invalid_argument("Hyperplane: coefficients over different fields");
    while (pivot_ < normal_.size() && normal_[pivot_].is_zero()) ++pivot_;
    if (pivot_ == normal_.size()) throw std::invalid_argument("Hyperplane: zero normal vector");
}

Hyperplane Hyperplane::last_coordinate_zero(const FieldCtx& ctx, std::size_t d) {
    Point normal(d, ctx.zero());
    normal.back() = ctx.one();
    return Hyperplane(std::move(normal), ctx.zero());
}

bool Hyperplane::contains(std::span<const FieldElem> x) const {
    if (x.size() != dim()) throw std::invalid_argument("Hyperplane::contains: dimension mismatch");
    return dot(normal_, x) == offset_;
}

bool Hyperplane::parallel_to(const Line& line) const {
    if (line.dim() != dim()) throw std::invalid_argument("Hyperplane: line dimension mismatch");
    return dot(normal_, line.dir()).is_zero();
}

Point Hyperplane::intersect(const Line& line) const {
    const FieldElem denom = dot(normal_, line.dir());
    if (denom.is_zero()) throw std::invalid_argument("Hyperplane: line " + line.to_string() + " is parallel");
    const FieldElem t = (offset_ - dot(normal_, line.base())) / denom;
    return line.at(t);
}

Flat Hyperplane::flat() const {
    const auto& F = ctx();
    const std::size_t d = dim();
    const FieldElem inv = normal_[pivot_].inv();
    Point base(d, F.zero());
    base[pivot_] = offset_ * inv;
    std::vector<Point> dirs;
    for (std::size_t j = 0; j < d; ++j) {
        if (j == pivot_) continue;
        Point v(d, F.zero());
        v[j] = F.one();
        v[pivot_] = -(normal_[j] * inv);
        dirs.push_back(std::move(v));
    }
    return Flat(std::move(base), std::move(dirs));
}

Point Hyperplane::local_coords(std::span<const FieldElem> x) const {
    if (!contains(x)) throw std::invalid_argument("Hyperplane::local_coords: point not on hyperplane");
    Point t;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (j != pivot_) t.push_back(x[j]);
    return t;
}

std::string Hyperplane::to_string() const { return point_to_string(normal_) + ".x = " + offset_.to_string(); }

LineFamily::LineFamily(std::vector<Line> lines, std::optional<Hyperplane> witness)
    : lines_(std::move(lines)), witness_(std::move(witness)) {
    for (const auto& l : lines_) {
        if (l.dim() != lines_.front().dim() || &l.ctx() != &lines_.front().ctx())
            throw std::invalid_argument("LineFamily: lines live in different spaces");
    }
    std::vector<Line> sorted = lines_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("LineFamily: repeated line");
    if (witness_) (void)lines_to_points(*this, *witness_);
}

LineFamily LineFamily::embedded(const Embedding& emb) const {
    std::vector<Line> out;
    for (const auto& l : lines_) out.push_back(embed_line(l, emb));
    return LineFamily(std::move(out));
}

Line embed_line(const Line& line, const Embedding& emb) {
    Point b, v;
    for (const auto& x : line.base()) b.push_back(emb(x));
    for (const auto& x : line.dir()) v.push_back(emb(x));
    return Line::through(std::move(b), std::move(v));
}

SpreadInstance lines_to_points(const LineFamily& family, const Hyperplane& H) {
    std::vector<Point> ambient;
    for (const auto& l : family.lines()) {
        if (&l.ctx() != &H.ctx()) throw std::invalid_argument("lines_to_points: line and hyperplane over different fields");
        if (H.parallel_to(l)) throw std::invalid_argument("lines_to_points: line " + l.to_string() + " is parallel to H");
        ambient.push_back(H.intersect(l));
    }
    std::vector<Point> sorted = ambient;
    std::sort(sorted.begin(), sorted.end());
    if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
        throw std::invalid_argument("lines_to_points: two lines meet H at the same point " + point_to_string(*it));
    return SpreadInstance::on_flat(H.flat(), ambient);
}

HyperplaneSearch find_avoiding_hyperplane(const LineFamily& family, const FieldCtx& base, std::size_t d, unsigned m,
                                          std::uint64_t seed, std::uint64_t budget) {
    if (m < 1) throw std::invalid_argument("find_avoiding_hyperplane: m must be positive");
    if (d < 1) throw std::invalid_argument("find_avoiding_hyperplane: dimension must be positive");
    for (const auto& l : family.lines())
        if (&l.ctx() != &base || l.dim() != d)
            throw std::invalid_argument("find_avoiding_hyperplane: family is not in GF(q)^d");
    const Embedding emb(base, m);
    const FieldCtx& T = emb.target();
    const LineFamily lifted = family.embedded(emb);

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= base.order();
    std::vector<std::vector<std::uint32_t>> rational(total, std::vector<std::uint32_t>(d));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t v = idx;
        for (std::size_t i = d; i-- > 0;) {
            rational[idx][i] = emb.map_code(static_cast<std::uint32_t>(v % base.order()));
            v /= base.order();
        }
    }

    std::mt19937_64 rng(seed);
    HyperplaneSearch out;
    out.field = &T;
    while (out.attempts < budget) {
        ++out.attempts;
        Point normal;
        for (std::size_t i = 0; i < d; ++i) normal.emplace_back(T, static_cast<std::uint32_t>(rng() % T.order()));
        const FieldElem offset(T, static_cast<std::uint32_t>(rng() % T.order()));
        if (std::all_of(normal.begin(), normal.end(), [](const FieldElem& x) { return x.is_zero(); })) continue;

        bool hits_rational = false;
        for (const auto& x : rational) {
            std::uint32_t acc = 0;
            for (std::size_t i = 0; i < d; ++i) acc = T.add(acc, T.mul(normal[i].code(), x[i]));
            if (acc == offset.code()) {
                hits_rational = true;
                break;
            }
        }
        if (hits_rational) continue;

        Hyperplane H(std::move(normal), offset);
        try {
            (void)lines_to_points(lifted, H);
        } catch (const std::invalid_argument&) {
            continue;
        }
        out.hyperplane = std::move(H);
        return out;
    }
    return out;
}

} // namespace nikodym

#pragma once

// Sparse multivariate polynomials over GF(p^k), Hasse derivatives,
// multiplicities, and restriction to affine flats.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nikodym/field.hpp"
#include "nikodym/linalg.hpp"

namespace nikodym {

using Point = std::vector<FieldElem>;

std::string point_to_string(std::span<const FieldElem> p);

// Exponent vector of a monomial x^e.
class ExpVec {
public:
    ExpVec() = default;
    explicit ExpVec(std::vector<std::uint32_t> exps);
    static ExpVec zero(std::size_t nvars) { return ExpVec(std::vector<std::uint32_t>(nvars, 0)); }

    std::size_t size() const { return exps_.size(); }
    std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
    std::uint32_t degree() const { return degree_; }
    const std::vector<std::uint32_t>& exps() const { return exps_; }

    // Componentwise <=.
    bool divides(const ExpVec& o) const;
    ExpVec operator+(const ExpVec& o) const;
    // Componentwise difference; requires o.divides(*this).
    ExpVec operator-(const ExpVec& o) const;

    friend bool operator==(const ExpVec& a, const ExpVec& b) { return a.exps_ == b.exps_; }

private:
    std::vector<std::uint32_t> exps_;
    std::uint32_t degree_ = 0;
};

// Graded lexicographic order with x1 > x2 > ... > xd.
struct GradedLex {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.exps() < b.exps();
    }
};

// All exponent vectors of total degree exactly deg, ascending graded lex.
std::vector<ExpVec> exponents_of_degree(std::size_t nvars, std::uint32_t deg);
// All exponent vectors with total degree < bound, ascending graded lex.
std::vector<ExpVec> exponents_below(std::size_t nvars, std::uint32_t bound);

// C(n, k) mod p by Lucas' theorem.
std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

class MultiPoly {
public:
    using TermMap = std::map<ExpVec, std::uint32_t, GradedLex>;

    MultiPoly(const FieldCtx& ctx, std::size_t nvars);

    static MultiPoly constant(const FieldCtx& ctx, std::size_t nvars, const FieldElem& c);
    static MultiPoly variable(const FieldCtx& ctx, std::size_t nvars, std::size_t index);
    static MultiPoly monomial(const FieldCtx& ctx, const ExpVec& e, const FieldElem& c);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // -1 for the zero polynomial.
    int degree() const;
    std::size_t num_terms() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    FieldElem coeff(const ExpVec& e) const;

    // Adds c * x^e, keeping the canonical (no zero coefficient) form.
    void add_term(const ExpVec& e, std::uint32_t code);
    void add_term(const ExpVec& e, const FieldElem& c);

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator*(const FieldElem& c) const;
    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly pow(unsigned e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.ctx_ == b.ctx_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    // "c*x1^e1*...*xd^ed + ..." with terms in descending graded lex order.
    std::string to_string() const;

private:
    void check_compatible(const MultiPoly& o) const;

    const FieldCtx* ctx_;
    std::size_t nvars_;
    TermMap terms_;
};

MultiPoly parse_poly(const FieldCtx& ctx, std::size_t nvars, const std::string& text);

FieldElem eval(const MultiPoly& f, std::span<const FieldElem> point);

// H^alpha f, termwise H^alpha(x^beta) = C(beta, alpha) x^(beta - alpha).
MultiPoly hasse(const MultiPoly& f, const ExpVec& alpha);
// (H^alpha f)(point) without materializing the derivative.
FieldElem hasse_at(const MultiPoly& f, const ExpVec& alpha, std::span<const FieldElem> point);

class Multiplicity {
public:
    explicit Multiplicity(std::uint32_t v) : value_(v), infinite_(false) {}
    static Multiplicity infinite() {
        Multiplicity m(0);
        m.infinite_ = true;
        return m;
    }

    bool is_infinite() const { return infinite_; }
    std::uint32_t value() const;
    bool at_least(std::uint64_t n) const { return infinite_ || value_ >= n; }
    std::string to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

    friend bool operator==(const Multiplicity& a, const Multiplicity& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const Multiplicity& a, const Multiplicity& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

private:
    std::uint32_t value_;
    bool infinite_;
};

// Largest n with H^alpha f(point) = 0 for every |alpha| < n.
Multiplicity mult_at(const MultiPoly& f, std::span<const FieldElem> point);

// Affine flat {base + t_1 b_1 + ... + t_r b_r} with independent directions.
class Flat {
public:
    Flat(Point base, std::vector<Point> dirs);

    const FieldCtx& ctx() const { return *ctx_; }
    std::size_t ambient_dim() const { return base_.size(); }
    std::size_t dim() const { return dirs_.size(); }
    const Point& base() const { return base_; }
    const std::vector<Point>& dirs() const { return dirs_; }

    Point at(std::span<const FieldElem> t) const;
    // Flat-local coordinates of x, or nullopt when x is not on the flat.
    std::optional<Point> local_coords(std::span<const FieldElem> x) const;
    bool contains(std::span<const FieldElem> x) const { return local_coords(x).has_value(); }

private:
    const FieldCtx* ctx_;
    Point base_;
    std::vector<Point> dirs_;
};

// Line in canonical form: the direction's first nonzero coordinate is 1 and
// the base point is the least point of the line in lexicographic order.
class Line {
public:
    static Line through(Point point, Point dir);
    static Line through_points(const Point& a, const Point& b);

    const FieldCtx& ctx() const { return base_.front().ctx(); }
    std::size_t dim() const { return base_.size(); }
    const Point& base() const { return base_; }
    const Point& dir() const { return dir_; }
    // Index of the first nonzero direction coordinate.
    std::size_t pivot() const { return pivot_; }

    Point at(const FieldElem& t) const;
    std::optional<FieldElem> parameter_of(std::span<const FieldElem> x) const;
    bool contains(std::span<const FieldElem> x) const { return parameter_of(x).has_value(); }
    // All q points, in order of the parameter's code.
    std::vector<Point> points() const;
    Flat flat() const { return Flat(base_, {dir_}); }

    std::string to_string() const;

    friend bool operator==(const Line& a, const Line& b) { return a.base_ == b.base_ && a.dir_ == b.dir_; }
    friend std::strong_ordering operator<=>(const Line& a, const Line& b);

private:
    Line(Point base, Point dir, std::size_t pivot) : base_(std::move(base)), dir_(std::move(dir)), pivot_(pivot) {}

    Point base_;
    Point dir_;
    std::size_t pivot_;
};

// Invertible affine map x -> A x + b on F^d.
class AffineMap {
public:
    AffineMap(Matrix linear, Point translation);
    static AffineMap translation(Point shift);

    const Matrix& linear() const { return linear_; }
    const Point& shift() const { return shift_; }
    std::size_t dim() const { return shift_.size(); }

    Point operator()(std::span<const FieldElem> x) const;
    AffineMap inverse() const;

private:
    Matrix linear_;
    Point shift_;
};

// f(base + sum_j t_j columns[j]) as a polynomial in columns.size() variables.
MultiPoly substitute_affine(const MultiPoly& f, const Point& base, const std::vector<Point>& columns);

MultiPoly restrict(const MultiPoly& f, const Flat& flat);
MultiPoly restrict(const MultiPoly& f, const Line& line);

// Multiplicity of f restricted to the line at the parameter of p.
Multiplicity mult_on_line(const MultiPoly& f, const Line& line, std::span<const FieldElem> p);

// f composed with T.
MultiPoly apply_affine(const MultiPoly& f, const AffineMap& T);

} // namespace nikodym

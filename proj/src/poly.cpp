#include "nikodym/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nikodym {

std::string point_to_string(std::span<const FieldElem> p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += p[i].to_string();
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// ExpVec

ExpVec::ExpVec(std::vector<std::uint32_t> exps)
    : exps_(std::move(exps)), degree_(std::accumulate(exps_.begin(), exps_.end(), std::uint32_t{0})) {}

bool ExpVec::divides(const ExpVec& o) const {
    if (o.size() != size()) throw std::invalid_argument("ExpVec: length mismatch");
    for (std::size_t i = 0; i < size(); ++i)
        if (exps_[i] > o.exps_[i]) return false;
    return true;
}

ExpVec ExpVec::operator+(const ExpVec& o) const {
    if (o.size() != size()) throw std::invalid_argument("ExpVec: length mismatch");
    std::vector<std::uint32_t> e(size());
    for (std::size_t i = 0; i < size(); ++i) e[i] = exps_[i] + o.exps_[i];
    return ExpVec(std::move(e));
}

ExpVec ExpVec::operator-(const ExpVec& o) const {
    if (!o.divides(*this)) throw std::invalid_argument("ExpVec: negative exponent in difference");
    std::vector<std::uint32_t> e(size());
    for (std::size_t i = 0; i < size(); ++i) e[i] = exps_[i] - o.exps_[i];
    return ExpVec(std::move(e));
}

namespace {

void compositions(std::size_t nvars, std::uint32_t deg, std::vector<std::uint32_t>& cur, std::size_t pos,
                  std::vector<ExpVec>& out) {
    if (pos + 1 == nvars) {
        cur[pos] = deg;
        out.emplace_back(cur);
        return;
    }
    for (std::uint32_t e = 0; e <= deg; ++e) {
        cur[pos] = e;
        compositions(nvars, deg - e, cur, pos + 1, out);
    }
}

} // namespace

std::vector<ExpVec> exponents_of_degree(std::size_t nvars, std::uint32_t deg) {
    std::vector<ExpVec> out;
    if (nvars == 0) {
        if (deg == 0) out.emplace_back(std::vector<std::uint32_t>{});
        return out;
    }
    std::vector<std::uint32_t> cur(nvars, 0);
    compositions(nvars, deg, cur, 0, out);
    return out;
}

std::vector<ExpVec> exponents_below(std::size_t nvars, std::uint32_t bound) {
    std::vector<ExpVec> out;
    for (std::uint32_t d = 0; d < bound; ++d) {
        auto layer = exponents_of_degree(nvars, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

std::uint32_t binomial_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
    if (k > n) return 0;
    std::uint64_t result = 1;
    while (n > 0 || k > 0) {
        const std::uint64_t ni = n % p, ki = k % p;
        if (ki > ni) return 0;
        // C(ni, ki) with ni < p: numerator and denominator are units mod p.
        std::uint64_t num = 1, den = 1;
        for (std::uint64_t j = 0; j < ki; ++j) {
            num = num * ((ni - j) % p) % p;
            den = den * ((j + 1) % p) % p;
        }
        std::uint64_t inv = 1, b = den, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * b % p;
            b = b * b % p;
            e >>= 1;
        }
        result = result * (num * inv % p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<std::uint32_t>(result);
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(const FieldCtx& ctx, std::size_t nvars) : ctx_(&ctx), nvars_(nvars) {}

MultiPoly MultiPoly::constant(const FieldCtx& ctx, std::size_t nvars, const FieldElem& c) {
    MultiPoly f(ctx, nvars);
    f.add_term(ExpVec::zero(nvars), c);
    return f;
}

MultiPoly MultiPoly::variable(const FieldCtx& ctx, std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::invalid_argument("MultiPoly::variable: index out of range");
    std::vector<std::uint32_t> e(nvars, 0);
    e[index] = 1;
    MultiPoly f(ctx, nvars);
    f.add_term(ExpVec(std::move(e)), 1u);
    return f;
}

MultiPoly MultiPoly::monomial(const FieldCtx& ctx, const ExpVec& e, const FieldElem& c) {
    MultiPoly f(ctx, e.size());
    f.add_term(e, c);
    return f;
}

int MultiPoly::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(terms_.rbegin()->first.degree());
}

FieldElem MultiPoly::coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return FieldElem(*ctx_, it == terms_.end() ? 0 : it->second);
}

void MultiPoly::add_term(const ExpVec& e, std::uint32_t code) {
    if (e.size() != nvars_) throw std::invalid_argument("MultiPoly::add_term: wrong number of variables");
    if (code == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, code);
    if (!inserted) {
        it->second = ctx_->add(it->second, code);
        if (it->second == 0) terms_.erase(it);
    }
}

void MultiPoly::add_term(const ExpVec& e, const FieldElem& c) {
    if (&c.ctx() != ctx_) throw std::invalid_argument("MultiPoly::add_term: coefficient from another field");
    add_term(e, c.code());
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
    if (ctx_ != o.ctx_) throw std::invalid_argument("MultiPoly: operands over different fields");
    if (nvars_ != o.nvars_) throw std::invalid_argument("MultiPoly: operands in different numbers of variables");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    r += o;
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(*ctx_, nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, ctx_->neg(c));
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_compatible(o);
    MultiPoly r(*ctx_, nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) r.add_term(ea + eb, ctx_->mul(ca, cb));
    return r;
}

MultiPoly MultiPoly::operator*(const FieldElem& c) const {
    if (&c.ctx() != ctx_) throw std::invalid_argument("MultiPoly: scalar from another field");
    MultiPoly r(*ctx_, nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, ctx_->mul(v, c.code()));
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result = constant(*ctx_, nvars_, ctx_->one());
    MultiPoly base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!out.empty()) out += " + ";
        out += ctx_->render(it->second);
        const auto& e = it->first;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            out += "*x" + std::to_string(i + 1);
            if (e[i] != 1) out += "^" + std::to_string(e[i]);
        }
    }
    return out;
}

MultiPoly parse_poly(const FieldCtx& ctx, std::size_t nvars, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    auto bad = [&](const std::string& why) { return std::invalid_argument("parse_poly: " + why + " in '" + text + "'"); };
    if (s.empty()) throw bad("empty input");

    auto parse_count = [&](const std::string& digits) -> std::uint32_t {
        if (digits.empty() || digits.size() > 9 ||
            !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw bad("bad integer '" + digits + "'");
        return static_cast<std::uint32_t>(std::stoul(digits));
    };
    auto split = [](const std::string& str, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto pos = str.find(sep, start);
            parts.push_back(str.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };

    MultiPoly f(ctx, nvars);
    for (const auto& term : split(s, '+')) {
        if (term.empty()) throw bad("empty term");
        std::uint32_t coeff = 1;
        std::vector<std::uint32_t> exps(nvars, 0);
        for (const auto& factor : split(term, '*')) {
            if (factor.empty()) throw bad("empty factor");
            if (factor[0] == 'x') {
                auto caret = factor.find('^');
                auto idx = parse_count(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
                if (idx == 0 || idx > nvars) throw bad("variable index out of range");
                std::uint32_t e = caret == std::string::npos ? 1 : parse_count(factor.substr(caret + 1));
                exps[idx - 1] += e;
            } else {
                coeff = ctx.mul(coeff, ctx.parse(factor));
            }
        }
        f.add_term(ExpVec(std::move(exps)), coeff);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Evaluation and Hasse derivatives

FieldElem eval(const MultiPoly& f, std::span<const FieldElem> point) {
    const auto& F = f.ctx();
    if (point.size() != f.nvars()) throw std::invalid_argument("eval: point dimension mismatch");
    for (const auto& x : point)
        if (&x.ctx() != &F) throw std::invalid_argument("eval: point over another field");
    std::uint32_t acc = 0;
    for (const auto& [e, c] : f.terms()) {
        std::uint32_t t = c;
        for (std::size_t i = 0; i < e.size() && t != 0; ++i)
            if (e[i]) t = F.mul(t, F.pow(point[i].code(), e[i]));
        acc = F.add(acc, t);
    }
    return FieldElem(F, acc);
}

MultiPoly hasse(const MultiPoly& f, const ExpVec& alpha) {
    if (alpha.size() != f.nvars()) throw std::invalid_argument("hasse: order has wrong number of variables");
    const auto& F = f.ctx();
    MultiPoly out(F, f.nvars());
    for (const auto& [beta, c] : f.terms()) {
        if (!alpha.divides(beta)) continue;
        std::uint32_t coeff = c;
        for (std::size_t i = 0; i < beta.size() && coeff != 0; ++i)
            coeff = F.mul(coeff, binomial_mod_p(beta[i], alpha[i], F.p()));
        out.add_term(beta - alpha, coeff);
    }
    return out;
}

FieldElem hasse_at(const MultiPoly& f, const ExpVec& alpha, std::span<const FieldElem> point) {
    if (alpha.size() != f.nvars() || point.size() != f.nvars())
        throw std::invalid_argument("hasse_at: dimension mismatch");
    const auto& F = f.ctx();
    std::uint32_t acc = 0;
    for (const auto& [beta, c] : f.terms()) {
        if (!alpha.divides(beta)) continue;
        std::uint32_t t = c;
        for (std::size_t i = 0; i < beta.size() && t != 0; ++i) {
            t = F.mul(t, binomial_mod_p(beta[i], alpha[i], F.p()));
            if (beta[i] > alpha[i]) t = F.mul(t, F.pow(point[i].code(), beta[i] - alpha[i]));
        }
        acc = F.add(acc, t);
    }
    return FieldElem(F, acc);
}

std::uint32_t Multiplicity::value() const {
    if (infinite_) throw std::logic_error("Multiplicity::value: multiplicity is infinite");
    return value_;
}

Multiplicity mult_at(const MultiPoly& f, std::span<const FieldElem> point) {
    if (point.size() != f.nvars()) throw std::invalid_argument("mult_at: point dimension mismatch");
    if (f.is_zero()) return Multiplicity::infinite();
    // Some derivative of order deg f is a nonzero constant, so the loop ends.
    const auto deg = static_cast<std::uint32_t>(f.degree());
    for (std::uint32_t n = 0; n <= deg; ++n)
        for (const auto& alpha : exponents_of_degree(f.nvars(), n))
            if (!hasse_at(f, alpha, point).is_zero()) return Multiplicity(n);
    throw std::logic_error("mult_at: nonzero polynomial with all derivatives vanishing");
}

// ---------------------------------------------------------------------------
// Flats and lines

namespace {

void check_point(const FieldCtx& F, std::span<const FieldElem> p, std::size_t d, const char* who) {
    if (p.size() != d) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    for (const auto& x : p)
        if (&x.ctx() != &F) throw std::invalid_argument(std::string(who) + ": coordinates over another field");
}

} // namespace

Flat::Flat(Point base, std::vector<Point> dirs) : base_(std::move(base)), dirs_(std::move(dirs)) {
    if (base_.empty()) throw std::invalid_argument("Flat: ambient dimension must be positive");
    ctx_ = &base_.front().ctx();
    const std::size_t d = base_.size();
    if (dirs_.size() > d) throw std::invalid_argument("Flat: more directions than the ambient dimension");
    check_point(*ctx_, base_, d, "Flat");
    Matrix m(*ctx_, d, dirs_.size());
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
        check_point(*ctx_, dirs_[j], d, "Flat");
        for (std::size_t i = 0; i < d; ++i) m(i, j) = dirs_[j][i].code();
    }
    if (m.rank() != dirs_.size()) throw std::invalid_argument("Flat: directions are linearly dependent");
}

Point Flat::at(std::span<const FieldElem> t) const {
    if (t.size() != dim()) throw std::invalid_argument("Flat::at: parameter dimension mismatch");
    Point x = base_;
    for (std::size_t j = 0; j < dim(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[j] * dirs_[j][i];
    return x;
}

std::optional<Point> Flat::local_coords(std::span<const FieldElem> x) const {
    check_point(*ctx_, x, ambient_dim(), "Flat::local_coords");
    const std::size_t d = ambient_dim();
    Matrix m(*ctx_, d, dim());
    std::vector<std::uint32_t> rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < dim(); ++j) m(i, j) = dirs_[j][i].code();
        rhs[i] = ctx_->sub(x[i].code(), base_[i].code());
    }
    auto sol = m.solve(rhs);
    if (!sol) return std::nullopt;
    Point t;
    for (auto c : *sol) t.emplace_back(*ctx_, c);
    return t;
}

Line Line::through(Point point, Point dir) {
    if (point.empty()) throw std::invalid_argument("Line: dimension must be positive");
    const auto& F = point.front().ctx();
    check_point(F, point, point.size(), "Line");
    check_point(F, dir, point.size(), "Line");
    std::size_t pivot = 0;
    while (pivot < dir.size() && dir[pivot].is_zero()) ++pivot;
    if (pivot == dir.size()) throw std::invalid_argument("Line: zero direction");
    const FieldElem scale = dir[pivot].inv();
    for (auto& x : dir) x *= scale;
    // Points agree before the pivot; the least one has a zero pivot coordinate.
    const FieldElem shift = point[pivot];
    for (std::size_t i = 0; i < point.size(); ++i) point[i] -= shift * dir[i];
    return Line(std::move(point), std::move(dir), pivot);
}

Line Line::through_points(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Line::through_points: dimension mismatch");
    Point dir(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dir[i] = b[i] - a[i];
    return through(a, std::move(dir));
}

Point Line::at(const FieldElem& t) const {
    Point x = base_;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * dir_[i];
    return x;
}

std::optional<FieldElem> Line::parameter_of(std::span<const FieldElem> x) const {
    check_point(ctx(), x, dim(), "Line::parameter_of");
    const FieldElem t = x[pivot_] - base_[pivot_];
    for (std::size_t i = 0; i < dim(); ++i)
        if (x[i] != base_[i] + t * dir_[i]) return std::nullopt;
    return t;
}

std::vector<Point> Line::points() const {
    std::vector<Point> out;
    for (const auto& t : ctx().elements()) out.push_back(at(t));
    return out;
}

std::string Line::to_string() const { return "[" + point_to_string(base_) + ";" + point_to_string(dir_) + "]"; }

std::strong_ordering operator<=>(const Line& a, const Line& b) {
    if (auto c = a.base_ <=> b.base_; c != 0) return c;
    return a.dir_ <=> b.dir_;
}

// ---------------------------------------------------------------------------
// Affine maps and substitution

AffineMap::AffineMap(Matrix linear, Point translation) : linear_(std::move(linear)), shift_(std::move(translation)) {
    if (linear_.rows() != linear_.cols() || linear_.rows() != shift_.size())
        throw std::invalid_argument("AffineMap: shape mismatch");
    check_point(linear_.ctx(), shift_, shift_.size(), "AffineMap");
    if (linear_.rank() != linear_.rows()) throw std::invalid_argument("AffineMap: linear part is singular");
}

AffineMap AffineMap::translation(Point shift) {
    if (shift.empty()) throw std::invalid_argument("AffineMap: dimension must be positive");
    Matrix id = Matrix::identity(shift.front().ctx(), shift.size());
    return AffineMap(std::move(id), std::move(shift));
}

Point AffineMap::operator()(std::span<const FieldElem> x) const {
    const auto& F = linear_.ctx();
    check_point(F, x, dim(), "AffineMap");
    std::vector<std::uint32_t> v;
    for (const auto& e : x) v.push_back(e.code());
    auto y = linear_.apply(v);
    Point out;
    for (std::size_t i = 0; i < y.size(); ++i) out.push_back(FieldElem(F, y[i]) + shift_[i]);
    return out;
}

AffineMap AffineMap::inverse() const {
    auto inv = linear_.inverse();
    if (!inv) throw std::logic_error("AffineMap::inverse: singular");
    const auto& F = linear_.ctx();
    std::vector<std::uint32_t> b;
    for (const auto& e : shift_) b.push_back(e.code());
    auto ib = inv->apply(b);
    Point shift;
    for (auto c : ib) shift.emplace_back(F, F.neg(c));
    return AffineMap(std::move(*inv), std::move(shift));
}

MultiPoly substitute_affine(const MultiPoly& f, const Point& base, const std::vector<Point>& columns) {
    const auto& F = f.ctx();
    const std::size_t d = f.nvars();
    const std::size_t r = columns.size();
    check_point(F, base, d, "substitute_affine");
    for (const auto& col : columns) check_point(F, col, d, "substitute_affine");

    // x_i -> base_i + sum_j columns[j][i] t_j
    std::vector<MultiPoly> linear;
    for (std::size_t i = 0; i < d; ++i) {
        MultiPoly li = MultiPoly::constant(F, r, base[i]);
        for (std::size_t j = 0; j < r; ++j) li += MultiPoly::variable(F, r, j) * columns[j][i];
        linear.push_back(std::move(li));
    }
    std::vector<std::vector<MultiPoly>> powers(d);
    for (std::size_t i = 0; i < d; ++i) powers[i].push_back(MultiPoly::constant(F, r, F.one()));
    auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
        while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * linear[i]);
        return powers[i][e];
    };

    MultiPoly out(F, r);
    for (const auto& [e, c] : f.terms()) {
        MultiPoly term = MultiPoly::constant(F, r, FieldElem(F, c));
        for (std::size_t i = 0; i < d && !term.is_zero(); ++i)
            if (e[i]) term = term * power(i, e[i]);
        out += term;
    }
    return out;
}

MultiPoly restrict(const MultiPoly& f, const Flat& flat) { return substitute_affine(f, flat.base(), flat.dirs()); }

MultiPoly restrict(const MultiPoly& f, const Line& line) { return substitute_affine(f, line.base(), {line.dir()}); }

Multiplicity mult_on_line(const MultiPoly& f, const Line& line, std::span<const FieldElem> p) {
    auto t = line.parameter_of(p);
    if (!t) throw std::invalid_argument("mult_on_line: point " + point_to_string(p) + " is not on the line");
    const Point tp{*t};
    return mult_at(restrict(f, line), tp);
}

MultiPoly apply_affine(const MultiPoly& f, const AffineMap& T) {
    if (T.dim() != f.nvars()) throw std::invalid_argument("apply_affine: dimension mismatch");
    const auto& F = f.ctx();
    std::vector<Point> columns(T.dim());
    for (std::size_t j = 0; j < T.dim(); ++j)
        for (std::size_t i = 0; i < T.dim(); ++i) columns[j].emplace_back(F, T.linear()(i, j));
    return substitute_affine(f, T.shift(), columns);
}

} // namespace nikodym

#include "nikodym/bounds.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace nikodym {

namespace {

Integer factorial(std::size_t n) {
    Integer f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned long>(i);
    return f;
}

Integer binomial(std::uint64_t n, std::uint64_t k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational rpow(const Rational& x, std::size_t e) {
    Rational r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= x;
    return r;
}

Rational qpow(std::uint64_t q, std::size_t e) { return Rational(Integer(q)) == 0 ? Rational(0) : rpow(Rational(Integer(q)), e); }

Rational as_rational(std::uint64_t v) { return Rational(Integer(static_cast<unsigned long>(v))); }

Interval max_interval(const Interval& a, const Interval& b) {
    return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

void require_chain_params(std::uint64_t q, std::size_t d) {
    if (q < 3) throw std::invalid_argument("bound chain requires q >= 3");
    if (d < 2) throw std::invalid_argument("bound chain requires d >= 2");
}

BoundStep make_step(std::string name, std::string relation, Interval lhs, Interval rhs, std::string note = {}) {
    BoundStep s;
    s.name = std::move(name);
    s.relation = std::move(relation);
    s.verdict = s.relation == "<=" ? check_le(lhs, rhs) : check_ge(lhs, rhs);
    s.lhs = std::move(lhs);
    s.rhs = std::move(rhs);
    s.note = std::move(note);
    return s;
}

// 1 + (q-2) x^{-1/(d-1)} >= (1 - x/q^d)^{-1/(d-1)} (1 - 1/q)^{d/(d-1)}, requires 0 < x < q^d.
BoundStep chain_entry(std::uint64_t q, std::size_t d, const Rational& x, const Rational& width) {
    const Rational qd = qpow(q, d);
    const unsigned dm1 = static_cast<unsigned>(d - 1);
    const Interval root_x = nth_root(x, dm1, width);
    const Interval lhs = Interval::point(1) + Interval::point(as_rational(q - 2)) / root_x;
    const Interval rhs = Interval::point(1) / nth_root(Rational(1) - x / qd, dm1, width) *
                         rational_power(Rational(1) - Rational(1, q), static_cast<unsigned>(d), dm1, width);
    return make_step("concavity", ">=", lhs, rhs,
                     "1 + (q-2) x^(-1/(d-1)) >= (1 - x/q^d)^(-1/(d-1)) (1 - 1/q)^(d/(d-1))");
}

} // namespace

// ---------------------------------------------------------------------------
// Vanishing order

VanishingOrder::VanishingOrder(std::uint32_t u_, Rational v_, Rational gamma_)
    : u(u_), v(std::move(v_)), gamma(std::move(gamma_)) {
    if (v < 0) throw std::invalid_argument("VanishingOrder: v must be non-negative");
    if (gamma <= 0) throw std::invalid_argument("VanishingOrder: gamma must be positive");
}

bool vanishes_to_order(const MultiPoly& f, std::span<const FieldElem> p, const Line& line, const VanishingOrder& ord) {
    const std::size_t d = f.nvars();
    if (line.dim() != d || p.size() != d) throw std::invalid_argument("vanishes_to_order: dimension mismatch");
    if (line.dir().back().is_zero())
        throw std::invalid_argument("vanishes_to_order: line " + line.to_string() + " is horizontal");
    if (!line.contains(p)) throw std::invalid_argument("vanishes_to_order: point is not on the line");
    if (f.is_zero()) return true;
    for (const auto& a : exponents_below(d - 1, ord.u)) {
        const Rational threshold = ord.v - Rational(a.degree()) / ord.gamma;
        // mult is an integer, so mult >= t iff mult >= ceil(t).
        const Rational need = ceil_rational(threshold);
        if (need <= 0) continue;
        std::vector<std::uint32_t> e = a.exps();
        e.push_back(0);
        const Multiplicity m = mult_on_line(hasse(f, ExpVec(std::move(e))), line, p);
        if (!m.at_least(need.get_num().get_ui())) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Lattice counts and volumes

Integer dim_V(const Rational& r, const Rational& s, std::size_t d) {
    if (d < 1) throw std::invalid_argument("dim_V: dimension must be positive");
    if (r <= 0 || s <= 0) return 0;
    if (d == 1) return Integer(ceil_rational(s).get_num());
    const Integer tmax = Integer(ceil_rational(r).get_num()) - 1;
    Integer total = 0;
    for (Integer t = 0; t <= tmax; ++t) {
        const Rational rest = ceil_rational(s - Rational(t));
        if (rest <= 0) break;
        total += binomial(t.get_ui() + d - 2, d - 2) * rest.get_num();
    }
    return total;
}

Integer dim_V_scaled(const Rational& u, const Rational& v, std::size_t d, std::uint64_t n) {
    const Rational nn = as_rational(n);
    return dim_V(u * nn, v * nn, d);
}

Rational vol_S(const Rational& u, const Rational& v, std::size_t d) {
    if (d < 1) throw std::invalid_argument("vol_S: dimension must be positive");
    if (u < 0 || v < u) throw std::invalid_argument("vol_S: requires v >= u >= 0");
    return rpow(u, d) / Rational(factorial(d)) + (v - u) * rpow(u, d - 1) / Rational(factorial(d - 1));
}

Rational vol_S_expanded(const Rational& u, const Rational& v, std::size_t d) {
    if (d < 1) throw std::invalid_argument("vol_S: dimension must be positive");
    if (u < 0 || v < u) throw std::invalid_argument("vol_S: requires v >= u >= 0");
    return -Rational(static_cast<long>(d - 1)) / Rational(factorial(d)) * rpow(u, d) +
           v * rpow(u, d - 1) / Rational(factorial(d - 1));
}

VolT vol_T(const Rational& root, const Rational& c, std::uint64_t q, std::size_t d) {
    if (d < 2) throw std::invalid_argument("vol_T: requires d >= 2");
    if (q < 2) throw std::invalid_argument("vol_T: requires q >= 2");
    if (!(c >= root && root >= 1)) throw std::invalid_argument("vol_T: requires c >= m_p^{1/(d-1)} >= 1");
    VolT v;
    v.t1 = (c - root) / Rational(factorial(d - 1));
    v.t2 = Rational(static_cast<long>(d - 1)) * (Rational(1) - Rational(1, q - 1)) / Rational(factorial(d));
    v.total = v.t1 + v.t2;
    return v;
}

CodimBound codim_Cp_bound(std::uint64_t m_p, const Rational& root, const Rational& c, std::uint64_t q, std::size_t d) {
    if (m_p == 0) return {Rational(0), Rational(0)};
    const Rational m = as_rational(m_p);
    const VolT vt = vol_T(root, c, q, d);
    const Rational dfact(factorial(d));
    const Rational dm1fact(factorial(d - 1));
    const Rational dm1(static_cast<long>(d - 1));
    CodimBound out;
    out.assembled = m * root / dfact + m * vt.total;
    out.rearranged = -dm1 / dfact * m * (root - 1) + m * (c / dm1fact - dm1 / (Rational(Integer(q - 1)) * dfact));
    return out;
}

// ---------------------------------------------------------------------------
// Inequality chain

const BoundStep& BoundReport::step(const std::string& name) const {
    for (const auto& s : steps)
        if (s.name == name) return s;
    throw std::out_of_range("BoundReport: no step named " + name);
}

Interval auto_c(const BoundInput& input, const Rational& width) {
    if (input.d < 2 || input.q < 2) throw std::invalid_argument("auto_c: requires d >= 2 and q >= 2");
    const unsigned dm1 = static_cast<unsigned>(input.d - 1);
    Interval c = nth_root(Rational(input.L), dm1, width) / Interval::point(as_rational(input.q - 1));
    std::uint64_t mmax = 0;
    for (auto m : input.mp) mmax = std::max(mmax, m);
    return max_interval(c, nth_root(as_rational(mmax), dm1, width));
}

namespace {

// sum_r coef_r * r^{1/n} + constant, with like radicands merged before any
// root is enclosed so that exact equalities survive.
struct RootSum {
    std::map<Integer, Rational> coef;
    Rational constant = 0;

    void add_root(const Integer& radicand, const Rational& c) {
        if (radicand == 0) return;
        coef[radicand] += c;
    }

    Interval enclose(unsigned n, const Rational& width) const {
        Interval total = Interval::point(constant);
        for (const auto& [r, c] : coef)
            if (c != 0) total = total + Interval::point(c) * nth_root(Rational(r), n, width);
        return total;
    }
};

// Sign of the margin, refining the width while undecided.
Verdict margin_verdict(const RootSum& m, unsigned n, const Rational& width, Interval& out) {
    Rational w = width;
    for (int attempt = 0; attempt < 4; ++attempt) {
        out = m.enclose(n, w);
        if (out.lo >= 0) return Verdict::Holds;
        if (out.hi < 0) return Verdict::Fails;
        w /= Rational(1 << 20);
    }
    return Verdict::Undecided;
}

} // namespace

BoundStep check_dim_counting(const BoundInput& input, const Rational& width) {
    if (input.d < 2) throw std::invalid_argument("check_dim_counting: requires d >= 2");
    const unsigned dm1 = static_cast<unsigned>(input.d - 1);
    std::map<std::uint64_t, std::uint64_t> histogram;
    for (auto m : input.mp) ++histogram[m];

    Interval lhs = Interval::point(0), lhs_rewritten = Interval::point(0);
    RootSum margin, margin_rewritten;
    for (const auto& [m, count] : histogram) {
        if (m == 0) continue;
        const Interval root = nth_root(as_rational(m), dm1, width);
        const Rational weight = as_rational(m) * as_rational(count);
        lhs = lhs + Interval::point(weight) * (root - Interval::point(1));
        lhs_rewritten = lhs_rewritten + Interval::point(weight) * root;
        margin.add_root(Integer(static_cast<unsigned long>(m)), -weight);
        margin.constant += weight;
        margin_rewritten.add_root(Integer(static_cast<unsigned long>(m)), -weight);
    }
    const Rational L(input.L);
    const Interval rootL = nth_root(L, dm1, width);
    const Interval rhs = Interval::point(L) * (rootL - Interval::point(1));
    const Interval rhs_rewritten = Interval::point(L) * rootL + Interval::point(as_rational(input.q - 2) * L);
    margin.add_root(input.L, L);
    margin.constant -= L;
    margin_rewritten.add_root(input.L, L);
    margin_rewritten.constant += as_rational(input.q - 2) * L;

    BoundStep step = make_step("dim_counting", "<=", lhs, rhs, "sum m_p (m_p^(1/(d-1)) - 1) <= |L| (|L|^(1/(d-1)) - 1)");
    Interval mg;
    step.verdict = margin_verdict(margin, dm1, width, mg);
    step.margin = mg;
    BoundStep sub = make_step("dim_counting_rewritten", "<=", lhs_rewritten, rhs_rewritten,
                              "sum m_p^(d/(d-1)) <= |L|^(d/(d-1)) + (q-2)|L|");
    sub.verdict = margin_verdict(margin_rewritten, dm1, width, mg);
    sub.margin = mg;
    step.sub.push_back(std::move(sub));
    return step;
}

Interval x_max_enclosure(std::uint64_t q, std::size_t d, const Rational& width) {
    require_chain_params(q, d);
    const Rational radicand = Rational(static_cast<long>(d - 1)) * as_rational(q - 2) * qpow(q, d);
    return rational_power(radicand, static_cast<unsigned>(d - 1), static_cast<unsigned>(d), width);
}

Interval x_chain_enclosure(std::uint64_t q, std::size_t d, const Rational& width) {
    require_chain_params(q, d);
    const Rational qd = qpow(q, d);
    // The left side decreases and the right side increases in x, so the
    // feasible set is an interval (0, x*].
    Rational lo = 0, hi = qd;
    const Rational tol = width * qd;
    while (hi - lo > tol) {
        const Rational mid = (lo + hi) / 2;
        Rational w = width;
        Verdict v = Verdict::Undecided;
        for (int attempt = 0; attempt < 4 && v == Verdict::Undecided; ++attempt) {
            v = chain_entry(q, d, mid, w).verdict;
            w /= Rational(1 << 20);
        }
        if (v == Verdict::Holds) lo = mid;
        else if (v == Verdict::Fails) hi = mid;
        else break;
    }
    return Interval(lo, hi);
}

BoundStep bernoulli_down_step(std::uint64_t q, std::size_t d, const Rational& x, const Rational& width) {
    require_chain_params(q, d);
    const Rational qd = qpow(q, d);
    if (x < 0 || x > qd) throw std::invalid_argument("bernoulli_down: requires 0 <= x <= q^d");
    const Rational dm1(static_cast<long>(d - 1));
    return make_step("bernoulli_down", "<=", nth_root(Rational(1) - x / qd, static_cast<unsigned>(d - 1), width),
                     Interval::point(Rational(1) - x / (dm1 * qd)), "(1 - x/q^d)^(1/(d-1)) <= 1 - x/((d-1) q^d)");
}

BoundStep bernoulli_up_step(std::uint64_t q, std::size_t d, const Rational& width) {
    require_chain_params(q, d);
    const Rational dm1(static_cast<long>(d - 1));
    const Rational dd(static_cast<long>(d));
    return make_step("bernoulli_up", ">=",
                     rational_power(Rational(1) - Rational(1, q), static_cast<unsigned>(d), static_cast<unsigned>(d - 1), width),
                     Interval::point(Rational(1) - dd / (dm1 * as_rational(q))), "(1 - 1/q)^(d/(d-1)) >= 1 - d/((d-1) q)");
}

BoundStep combine_step(const Rational& A, const Rational& B) {
    if (A >= 1) throw std::invalid_argument("combine: requires A < 1");
    std::string note = "(1-A)^(-1) (1-B) >= 1 + A - B";
    if (!(A >= B && B >= 0)) note += "; outside the stated range A >= B >= 0";
    return make_step("combine", ">=", Interval::point((Rational(1) - B) / (Rational(1) - A)),
                     Interval::point(Rational(1) + A - B), note);
}

namespace {

BoundReport evaluate_chain(std::uint64_t q, std::size_t d, const Rational& x, const Rational& width) {
    BoundReport rep;
    rep.q = q;
    rep.d = d;
    rep.width = width;
    rep.x = x;
    rep.x_max = x_max_enclosure(q, d, width);
    rep.x_chain = x_chain_enclosure(q, d, width);
    const std::size_t e = d * d - 1;
    rep.ratio = rep.x_max / nth_root(qpow(q, e), static_cast<unsigned>(d), width);
    rep.superlinear_regime = x >= Rational(static_cast<long>(d)) * qpow(q, d - 1);
    return rep;
}

void append_relaxation_steps(BoundReport& rep) {
    const std::uint64_t q = rep.q;
    const std::size_t d = rep.d;
    const Rational qd = qpow(q, d);
    const Rational dm1(static_cast<long>(d - 1));
    rep.steps.push_back(bernoulli_down_step(q, d, rep.x, rep.width));
    rep.steps.push_back(bernoulli_up_step(q, d, rep.width));
    const Rational A = rep.x / (dm1 * qd);
    const Rational B = Rational(static_cast<long>(d)) / (dm1 * as_rational(q));
    if (A < 1) rep.steps.push_back(combine_step(A, B));
    BoundStep fin = make_step("final", "<=", Interval::point(rep.x), rep.x_max,
                              "x <= ((d-1)(q-2) q^d)^((d-1)/d); the asymptotic (1+o(1)) factor is not included");
    rep.steps.push_back(std::move(fin));
}

} // namespace

BoundReport final_bound(std::uint64_t q, std::size_t d, const Rational& width) {
    require_chain_params(q, d);
    const Interval xc = x_chain_enclosure(q, d, width);
    BoundReport rep = evaluate_chain(q, d, xc.lo, width);
    rep.steps.push_back(chain_entry(q, d, rep.x, width));
    append_relaxation_steps(rep);
    return rep;
}

BoundReport bound_report(const BoundInput& input, const Rational& width) {
    require_chain_params(input.q, input.d);
    const Rational qd = qpow(input.q, input.d);
    const Rational x(input.L);
    if (x <= 0 || x >= qd) throw std::invalid_argument("bound_report: requires 0 < |L| < q^d");

    Integer sum = 0;
    for (auto m : input.mp) sum += static_cast<unsigned long>(m);
    const bool sum_ok = sum == Integer(input.q - 1) * input.L;
    if (input.from_instance && !sum_ok)
        throw std::invalid_argument("bound_report: sum of m_p is " + sum.get_str() + " but (q-1)|L| is " +
                                    Integer(Integer(input.q - 1) * input.L).get_str());

    BoundReport rep = evaluate_chain(input.q, input.d, x, width);
    rep.mp_sum_ok = sum_ok;
    rep.c = input.c ? Interval::point(*input.c) : auto_c(input, width);
    rep.steps.push_back(check_dim_counting(input, width));

    // Jensen over q^d - x slots, padding N with zeros.
    const unsigned dm1 = static_cast<unsigned>(input.d - 1);
    const unsigned dd = static_cast<unsigned>(input.d);
    std::map<std::uint64_t, std::uint64_t> histogram;
    for (auto m : input.mp) ++histogram[m];
    Interval lhs = Interval::point(0);
    for (const auto& [m, count] : histogram)
        if (m != 0) lhs = lhs + Interval::point(as_rational(count)) * rational_power(as_rational(m), dd, dm1, width);
    const Interval rhs = Interval::point(1) / nth_root(qd - x, dm1, width) *
                         rational_power(as_rational(input.q - 1), dd, dm1, width) * rational_power(x, dd, dm1, width);
    std::string note = "sum m_p^(d/(d-1)) >= (q^d - x)^(-1/(d-1)) (q-1)^(d/(d-1)) x^(d/(d-1))";
    if (Rational(as_rational(input.mp.size())) > qd - x) note += "; |N| > q^d - x, padding argument does not apply";
    rep.steps.push_back(make_step("concavity", ">=", lhs, rhs, note));
    append_relaxation_steps(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Vanishing lemma as linear algebra

PuncturedLine puncture_at_last_coordinate_zero(const Line& line) {
    if (line.dir().back().is_zero())
        throw std::invalid_argument("puncture: line " + line.to_string() + " is horizontal");
    PuncturedLine out{line, {}};
    for (auto& p : line.points())
        if (!p.back().is_zero()) out.points.push_back(std::move(p));
    return out;
}

VanishingResult vanishing_lemma_instance(const VanishingSetup& setup) {
    if (!setup.ctx) throw std::invalid_argument("vanishing_lemma_instance: missing field");
    const FieldCtx& F = *setup.ctx;
    const std::size_t d = setup.d;
    if (d < 2) throw std::invalid_argument("vanishing_lemma_instance: requires d >= 2");
    if (setup.n < 1) throw std::invalid_argument("vanishing_lemma_instance: requires n >= 1");
    if (setup.c <= 0 || setup.eps < 0 || setup.eps >= 1)
        throw std::invalid_argument("vanishing_lemma_instance: requires c > 0 and 0 <= eps < 1");
    const std::uint64_t q = F.order();
    for (const auto& pl : setup.lines) {
        if (&pl.line.ctx() != &F || pl.line.dim() != d)
            throw std::invalid_argument("vanishing_lemma_instance: line not in the ambient space");
        if (pl.line.dir().back().is_zero())
            throw std::invalid_argument("vanishing_lemma_instance: line " + pl.line.to_string() + " is horizontal");
        for (const auto& p : pl.points) {
            if (!pl.line.contains(p))
                throw std::invalid_argument("vanishing_lemma_instance: point " + point_to_string(p) + " not on its line");
            if (p.back().is_zero())
                throw std::invalid_argument("vanishing_lemma_instance: point " + point_to_string(p) + " lies on x_d = 0");
        }
    }

    const Rational n = as_rational(setup.n);
    const Rational L = as_rational(setup.v_lines.value_or(setup.lines.size()));
    const Rational s_bound = as_rational(q - 1) * setup.c * n;

    // alpha_1 + ... + alpha_{d-1} < (1 - eps) |L|^{1/(d-1)} n, decided on enclosures.
    auto horizontal_ok = [&](std::uint32_t t) {
        Rational w = setup.width;
        for (int attempt = 0; attempt < 6; ++attempt) {
            const Interval r = Interval::point((Rational(1) - setup.eps) * n) *
                               nth_root(L, static_cast<unsigned>(d - 1), w);
            if (Rational(t) < r.lo) return true;
            if (Rational(t) >= r.hi) return false;
            w /= Rational(1 << 20);
        }
        throw std::runtime_error("vanishing_lemma_instance: cannot decide degree bound at this precision");
    };

    VanishingResult out;
    const Rational smax = ceil_rational(s_bound);
    for (const auto& a : exponents_below(d, static_cast<std::uint32_t>(smax.get_num().get_ui()))) {
        if (Rational(a.degree()) >= s_bound) continue;
        if (horizontal_ok(a.degree() - a[d - 1])) out.basis.push_back(a);
    }
    out.dim_V = out.basis.size();

    std::vector<std::vector<std::uint32_t>> rows;
    const auto orders = exponents_below(d - 1, setup.n);
    for (const auto& pl : setup.lines) {
        std::vector<FieldElem> params;
        for (const auto& p : pl.points) params.push_back(*pl.line.parameter_of(p));
        for (const auto& a : orders) {
            const Rational need = ceil_rational(setup.c * n - Rational(a.degree()) / as_rational(q - 1));
            if (need <= 0) continue;
            std::vector<std::uint32_t> e = a.exps();
            e.push_back(0);
            const ExpVec alpha(std::move(e));
            std::vector<MultiPoly> restricted;
            for (const auto& beta : out.basis)
                restricted.push_back(restrict(hasse(MultiPoly::monomial(F, beta, F.one()), alpha), pl.line));
            const auto kmax = static_cast<std::uint32_t>(need.get_num().get_ui());
            for (const auto& t : params) {
                const Point tp{t};
                for (std::uint32_t k = 0; k < kmax; ++k) {
                    const ExpVec order(std::vector<std::uint32_t>{k});
                    std::vector<std::uint32_t> row;
                    row.reserve(out.basis.size());
                    for (const auto& g : restricted) row.push_back(hasse_at(g, order, tp).code());
                    rows.push_back(std::move(row));
                    if (static_cast<std::uint64_t>(rows.size()) * out.basis.size() > setup.cap)
                        throw CapExceeded("vanishing_lemma_instance: constraint matrix exceeds cap");
                }
            }
        }
    }
    out.constraints = rows.size();

    Matrix M(F, 0, out.basis.size());
    for (const auto& row : rows) M.push_row(row);
    out.rank = M.rank();
    out.kernel_dim = out.basis.size() - out.rank;
    for (const auto& v : M.kernel_basis()) {
        MultiPoly f(F, d);
        for (std::size_t i = 0; i < v.size(); ++i) f.add_term(out.basis[i], v[i]);
        out.kernel.push_back(std::move(f));
    }
    return out;
}

} // namespace nikodym

#pragma once

// The dimension-counting machinery behind the Nikodym bound: the (u, v; gamma)
// vanishing predicate, the monomial space V(r, s), the leading-order volume
// formulas, a linear-algebra instantiation of the vanishing lemma, and an
// interval evaluation of the inequality chain that ends in
//   x <= ((d-1)(q-2) q^d)^{(d-1)/d}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nikodym/interval.hpp"
#include "nikodym/linalg.hpp"
#include "nikodym/poly.hpp"

namespace nikodym {

inline const Rational kDefaultWidth = Rational(Integer(1), Integer("1000000000000"));

struct VanishingOrder {
    std::uint32_t u = 0;
    Rational v = 0;
    Rational gamma = 1;

    VanishingOrder() = default;
    VanishingOrder(std::uint32_t u_, Rational v_, Rational gamma_);
};

// True iff mult((H^{(alpha,0)} f)|_l, p) >= v - |alpha|/gamma for every
// alpha in Z^{d-1} with |alpha| < u. The line must not be parallel to {x_d = 0}.
bool vanishes_to_order(const MultiPoly& f, std::span<const FieldElem> p, const Line& line, const VanishingOrder& ord);

// #{alpha in Z_{>=0}^d : alpha_1 + ... + alpha_{d-1} < r, |alpha| < s}
Integer dim_V(const Rational& r, const Rational& s, std::size_t d);
// dim V(u n, v n)
Integer dim_V_scaled(const Rational& u, const Rational& v, std::size_t d, std::uint64_t n);

// vol S(u, v) = u^d/d! + (v - u) u^{d-1}/(d-1)!, valid for v >= u >= 0.
Rational vol_S(const Rational& u, const Rational& v, std::size_t d);
// The same volume written as -(d-1)/d! u^d + v u^{d-1}/(d-1)!.
Rational vol_S_expanded(const Rational& u, const Rational& v, std::size_t d);

struct VolT {
    Rational t1;
    Rational t2;
    Rational total;
};

// vol T with root standing for m_p^{1/(d-1)}; requires c >= root >= 1.
VolT vol_T(const Rational& root, const Rational& c, std::uint64_t q, std::size_t d);

struct CodimBound {
    // m_p^{d/(d-1)}/d! + m_p vol T
    Rational assembled;
    // -(d-1)/d! m_p (root - 1) + m_p (c/(d-1)! - (d-1)/((q-1) d!))
    Rational rearranged;
};

// Leading coefficient (of n^d) bounding codim C_p. root stands for m_p^{1/(d-1)}.
CodimBound codim_Cp_bound(std::uint64_t m_p, const Rational& root, const Rational& c, std::uint64_t q, std::size_t d);

struct BoundInput {
    std::uint64_t q = 0;
    std::size_t d = 0;
    Integer L = 0;
    // One entry per point of N, zeros included.
    std::vector<std::uint64_t> mp;
    // Empty means AUTO: max(|L|^{1/(d-1)}/(q-1), max_p m_p^{1/(d-1)}).
    std::optional<Rational> c;
    bool from_instance = false;
};

struct BoundStep {
    std::string name;
    // "<=" or ">="
    std::string relation;
    Interval lhs;
    Interval rhs;
    Verdict verdict = Verdict::Undecided;
    // (larger side) - (smaller side) with equal radicands cancelled exactly;
    // when present the verdict is read from its sign instead of lhs vs rhs.
    std::optional<Interval> margin;
    std::string note;
    std::vector<BoundStep> sub;
};

struct BoundReport {
    std::uint64_t q = 0;
    std::size_t d = 0;
    Rational width;
    // Point at which the chain was evaluated (|L| for instances).
    Rational x;
    Interval x_max;
    // Largest x satisfying the un-relaxed inequality before the Bernoulli steps.
    Interval x_chain;
    // x_max / q^{d - 1/d}
    Interval ratio;
    // x >= d q^{d-1}, equivalently A >= B in the combine step.
    bool superlinear_regime = false;
    std::optional<Interval> c;
    std::optional<bool> mp_sum_ok;
    std::vector<BoundStep> steps;

    const BoundStep& step(const std::string& name) const;
};

// Dimension-counting inequality sum m_p(m_p^{1/(d-1)} - 1) <= |L|(|L|^{1/(d-1)} - 1), with the
// rewritten form sum m_p^{d/(d-1)} <= |L|^{d/(d-1)} + (q-2)|L| as a sub-step.
BoundStep check_dim_counting(const BoundInput& input, const Rational& width = kDefaultWidth);

// AUTO c as an enclosure.
Interval auto_c(const BoundInput& input, const Rational& width = kDefaultWidth);

Interval x_max_enclosure(std::uint64_t q, std::size_t d, const Rational& width = kDefaultWidth);
Interval x_chain_enclosure(std::uint64_t q, std::size_t d, const Rational& width = kDefaultWidth);

// The chain evaluated at its own extremal x (the lower end of x_chain).
BoundReport final_bound(std::uint64_t q, std::size_t d, const Rational& width = kDefaultWidth);
// The chain evaluated at x = |L| with the instance's m_p values.
BoundReport bound_report(const BoundInput& input, const Rational& width = kDefaultWidth);

// Individual chain steps at a given x, exposed for grid checks.
BoundStep bernoulli_down_step(std::uint64_t q, std::size_t d, const Rational& x, const Rational& width = kDefaultWidth);
BoundStep bernoulli_up_step(std::uint64_t q, std::size_t d, const Rational& width = kDefaultWidth);
// (1 - A)^{-1} (1 - B) >= 1 + A - B, for 0 <= A < 1.
BoundStep combine_step(const Rational& A, const Rational& B);

struct PuncturedLine {
    Line line;
    std::vector<Point> points;
};

// The q-1 points of a non-horizontal line off {x_d = 0}.
PuncturedLine puncture_at_last_coordinate_zero(const Line& line);

struct VanishingSetup {
    const FieldCtx* ctx = nullptr;
    std::size_t d = 0;
    std::vector<PuncturedLine> lines;
    std::uint32_t n = 1;
    Rational c = 1;
    Rational eps = 0;
    std::uint64_t cap = kDefaultMatrixCap;
    Rational width = kDefaultWidth;
    // |L| used to size V; defaults to lines.size(). Fixing it lets constraint
    // sets be compared over the same monomial space.
    std::optional<std::uint64_t> v_lines;
};

struct VanishingResult {
    std::vector<ExpVec> basis;
    std::size_t dim_V = 0;
    std::size_t constraints = 0;
    std::size_t rank = 0;
    std::size_t kernel_dim = 0;
    std::vector<MultiPoly> kernel;
};

// Every polynomial in V((1-eps)|L|^{1/(d-1)} n, (q-1) c n) vanishing to order
// (n, cn; q-1) at each listed point along its line, as a kernel.
VanishingResult vanishing_lemma_instance(const VanishingSetup& setup);

} // namespace nikodym

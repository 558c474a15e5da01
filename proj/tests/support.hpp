#pragma once

// Shared generators and brute-force oracles for the test binaries.

#include <map>
#include <random>
#include <vector>

#include "nikodym/geometry.hpp"
#include "nikodym/linalg.hpp"
#include "nikodym/poly.hpp"

namespace testsupport {

using namespace nikodym;

inline FieldElem random_elem(const FieldCtx& F, std::mt19937_64& rng) {
    return F.elem(static_cast<std::uint32_t>(rng() % F.order()));
}

inline Point random_point(const FieldCtx& F, std::size_t d, std::mt19937_64& rng) {
    Point p;
    for (std::size_t i = 0; i < d; ++i) p.push_back(random_elem(F, rng));
    return p;
}

inline Point random_nonzero_vector(const FieldCtx& F, std::size_t d, std::mt19937_64& rng) {
    while (true) {
        Point v = random_point(F, d, rng);
        for (const auto& e : v)
            if (!e.is_zero()) return v;
    }
}

// Up to `terms` random monomials of total degree <= max_deg.
inline MultiPoly random_poly(const FieldCtx& F, std::size_t d, std::uint32_t max_deg, std::size_t terms,
                             std::mt19937_64& rng) {
    const auto all = exponents_below(d, max_deg + 1);
    MultiPoly f(F, d);
    for (std::size_t i = 0; i < terms; ++i) f.add_term(all[rng() % all.size()], random_elem(F, rng));
    return f;
}

// H^alpha f read off the full expansion of f(x + y) in 2d variables.
inline MultiPoly taylor_hasse(const MultiPoly& f, const ExpVec& alpha) {
    const FieldCtx& F = f.ctx();
    const std::size_t d = f.nvars();
    std::vector<MultiPoly> shifted;
    for (std::size_t i = 0; i < d; ++i)
        shifted.push_back(MultiPoly::variable(F, 2 * d, i) + MultiPoly::variable(F, 2 * d, d + i));
    MultiPoly expansion(F, 2 * d);
    for (const auto& [e, c] : f.terms()) {
        MultiPoly term = MultiPoly::constant(F, 2 * d, F.elem(c));
        for (std::size_t i = 0; i < d; ++i) term = term * shifted[i].pow(e[i]);
        expansion += term;
    }
    MultiPoly out(F, d);
    for (const auto& [e, c] : expansion.terms()) {
        bool match = true;
        for (std::size_t i = 0; i < d; ++i) match = match && e[d + i] == alpha[i];
        if (!match) continue;
        out.add_term(ExpVec(std::vector<std::uint32_t>(e.exps().begin(), e.exps().begin() + static_cast<long>(d))), c);
    }
    return out;
}

inline AffineMap random_affine(const FieldCtx& F, std::size_t d, std::mt19937_64& rng) {
    while (true) {
        Matrix A(F, d, d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) A(r, c) = random_elem(F, rng).code();
        if (A.rank() == d) return AffineMap(A, random_point(F, d, rng));
    }
}

// Direct minimum over all subsets, smallest first; returns the least size with the property.
inline std::uint32_t naive_min_weak_nikodym(const std::shared_ptr<const AffineSpace>& space) {
    const std::uint32_t n = space->size();
    const auto& lines = space->lines();
    std::uint32_t best = n;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto size = static_cast<std::uint32_t>(__builtin_popcountll(mask));
        if (size >= best) continue;
        bool ok = true;
        for (std::uint32_t x = 0; x < n && ok; ++x) {
            if (mask >> x & 1) continue;
            bool found = false;
            for (std::size_t id = 0; id < lines.size() && !found; ++id) {
                const auto& pts = space->line_points(id);
                bool through = false, rest = true;
                for (auto y : pts) {
                    if (y == x) through = true;
                    else if (!(mask >> y & 1)) rest = false;
                }
                found = through && rest;
            }
            ok = found;
        }
        if (ok) best = size;
    }
    return best;
}

} // namespace testsupport

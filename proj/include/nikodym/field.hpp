#pragma once

// Exact arithmetic in GF(p^k).
//
// Elements are encoded as integers ("codes") c_0 + c_1 p + ... + c_{k-1} p^{k-1}
// where c_i are the coefficients of the residue polynomial modulo the field's
// defining polynomial. Code order is the canonical element order: zero first,
// then lexicographic on the coefficient vector read from the highest degree.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nikodym/errors.hpp"

namespace nikodym {

inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 20;

class FieldCtx;

class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const FieldCtx& ctx, std::uint32_t code);

    const FieldCtx& ctx() const;
    bool has_ctx() const { return ctx_ != nullptr; }
    std::uint32_t code() const { return code_; }
    bool is_zero() const { return code_ == 0; }
    bool is_one() const { return code_ == 1; }

    // Coefficients over GF(p), least significant first.
    std::vector<std::uint32_t> coeffs() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

    FieldElem inv() const;
    FieldElem pow(std::uint64_t e) const;

    std::string to_string() const;

    friend bool operator==(const FieldElem& a, const FieldElem& b) {
        return a.ctx_ == b.ctx_ && a.code_ == b.code_;
    }
    // Canonical order; only meaningful within one context.
    friend std::strong_ordering operator<=>(const FieldElem& a, const FieldElem& b) {
        return a.code_ <=> b.code_;
    }

private:
    const FieldCtx& checked_ctx(const FieldElem& o) const;

    const FieldCtx* ctx_ = nullptr;
    std::uint32_t code_ = 0;
};

class FieldCtx {
public:
    FieldCtx(const FieldCtx&) = delete;
    FieldCtx& operator=(const FieldCtx&) = delete;

    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint32_t order() const { return q_; }
    // Monic defining polynomial, length k+1, least significant first.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    // Smallest (in code order) generator of the multiplicative group.
    std::uint32_t generator() const { return generator_; }
    // "p^k"
    std::string spec() const;

    FieldElem zero() const { return FieldElem(*this, 0); }
    FieldElem one() const { return FieldElem(*this, 1); }
    FieldElem elem(std::uint32_t code) const;
    // Image of an integer under Z -> GF(p) -> GF(p^k).
    FieldElem from_int(std::int64_t v) const;

    // Raw code arithmetic. Inputs must be valid codes of this field.
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        if (k_ == 1) {
            std::uint32_t s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_ext(a, b);
    }
    std::uint32_t neg(std::uint32_t a) const {
        if (k_ == 1) return a == 0 ? 0 : p_ - a;
        return neg_ext(a);
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (k_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
        if (a == 0 || b == 0) return 0;
        std::uint32_t s = log_[a] + log_[b];
        return exp_[s];
    }
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

    // Dense polynomial-multiply-and-reduce path. The table-driven mul() must
    // agree with it on every pair.
    std::uint32_t mul_reference(std::uint32_t a, std::uint32_t b) const;

    std::vector<std::uint32_t> decompose(std::uint32_t code) const;
    std::uint32_t compose(std::span<const std::uint32_t> coeffs) const;

    // All p^k elements in canonical order, zero first.
    std::vector<FieldElem> elements() const;

    // Canonical rendering: decimal for prime fields; for extensions, the k
    // coefficients least significant first, as a bare digit string when p <= 10
    // and '.'-separated otherwise.
    std::string render(std::uint32_t code) const;
    std::uint32_t parse(const std::string& text) const;

private:
    friend const FieldCtx& make_field(std::uint64_t p, unsigned k, std::uint64_t cap);
    FieldCtx(std::uint32_t p, unsigned k, std::vector<std::uint32_t> modulus);

    std::uint32_t add_ext(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg_ext(std::uint32_t a) const;
    void build_tables();

    std::uint32_t p_;
    unsigned k_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::uint32_t generator_ = 1;
    std::vector<std::uint32_t> exp_;  // length 2(q-1), extensions only
    std::vector<std::uint32_t> log_;  // length q, extensions only
};

bool is_prime(std::uint64_t n);

// Decomposes q = p^k; returns false when q is not a prime power.
bool prime_power(std::uint64_t q, std::uint64_t& p, unsigned& k);

// Exhaustive factor check: true iff the monic polynomial (least significant
// first) has no monic factor of degree 1..deg/2 over GF(p).
bool is_irreducible_mod_p(std::span<const std::uint32_t> monic, std::uint32_t p);

// Interned context for GF(p^k). The same (p, k) always yields the same object
// and the lexicographically least monic irreducible modulus.
const FieldCtx& make_field(std::uint64_t p, unsigned k, std::uint64_t cap = kDefaultFieldCap);

// Accepts "p^k" or a prime power "q".
const FieldCtx& parse_field_spec(const std::string& spec, std::uint64_t cap = kDefaultFieldCap);

// Field homomorphism GF(p^k) -> GF(p^{km}) sending the source generator x to
// the least root (code order) of the source modulus in the target.
class Embedding {
public:
    Embedding(const FieldCtx& source, unsigned m, std::uint64_t cap = kDefaultFieldCap);

    const FieldCtx& source() const { return *source_; }
    const FieldCtx& target() const { return *target_; }
    FieldElem root() const { return FieldElem(*target_, root_); }

    FieldElem operator()(const FieldElem& a) const;
    std::uint32_t map_code(std::uint32_t code) const { return image_[code]; }

private:
    const FieldCtx* source_;
    const FieldCtx* target_;
    std::uint32_t root_;
    std::vector<std::uint32_t> image_;
};

FieldElem embed(const FieldElem& a, unsigned m);

} // namespace nikodym

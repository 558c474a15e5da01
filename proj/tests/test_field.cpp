#include <doctest.h>

#include <random>
#include <set>

#include "nikodym/field.hpp"

using namespace nikodym;

namespace {

// Schoolbook product of two coefficient vectors reduced by a monic modulus.
// Kept independent of FieldCtx::mul_reference on purpose.
std::vector<std::uint32_t> naive_mul(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
                                     const std::vector<std::uint32_t>& modulus, std::uint32_t p) {
    const std::size_t k = modulus.size() - 1;
    std::vector<std::uint64_t> prod(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (std::size_t top = 2 * k - 1; top >= k; --top) {
        const std::uint64_t c = prod[top];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= k; ++i) prod[top - k + i] = (prod[top - k + i] + (p - c) * modulus[i]) % p;
    }
    return std::vector<std::uint32_t>(prod.begin(), prod.begin() + static_cast<long>(k));
}

const std::vector<std::pair<std::uint64_t, unsigned>> kSmallFields = {
    {2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}};

} // namespace

TEST_CASE("prime fields and their moduli") {
    const FieldCtx& F2 = make_field(2, 1);
    CHECK(F2.order() == 2);
    CHECK(F2.modulus() == std::vector<std::uint32_t>{0, 1});
    CHECK(&make_field(2, 1) == &F2);
    CHECK_THROWS_AS(make_field(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_field(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_field(2, 0), std::invalid_argument);
}

TEST_CASE("GF(4) uses x^2 + x + 1") {
    const FieldCtx& F = make_field(2, 2);
    CHECK(F.modulus() == std::vector<std::uint32_t>{1, 1, 1});
    const FieldElem x = F.elem(F.compose(std::vector<std::uint32_t>{0, 1}));
    CHECK((x * x).coeffs() == std::vector<std::uint32_t>{1, 1});
}

TEST_CASE("moduli are the least monic irreducibles") {
    for (auto [p, k] : kSmallFields) {
        const FieldCtx& F = make_field(p, k);
        CHECK(is_irreducible_mod_p(F.modulus(), static_cast<std::uint32_t>(p)));
        // Every monic polynomial of degree k that sorts below the modulus is reducible.
        const auto& m = F.modulus();
        std::uint64_t limit = 0;
        for (std::size_t i = k; i-- > 0;) limit = limit * p + m[i];
        for (std::uint64_t code = 0; code < limit; ++code) {
            std::vector<std::uint32_t> cand(k + 1, 0);
            std::uint64_t c = code;
            for (unsigned i = 0; i < k; ++i, c /= p) cand[i] = static_cast<std::uint32_t>(c % p);
            cand[k] = 1;
            CHECK_FALSE(is_irreducible_mod_p(cand, static_cast<std::uint32_t>(p)));
        }
    }
}

TEST_CASE("small arithmetic facts") {
    const FieldCtx& F5 = make_field(5, 1);
    CHECK(F5.elem(2).inv() == F5.elem(3));
    CHECK_THROWS_AS(F5.zero().inv(), std::domain_error);
    CHECK_THROWS_AS(F5.elem(1) / F5.zero(), std::domain_error);
    const FieldCtx& F7 = make_field(7, 1);
    CHECK_THROWS_AS(F5.one() + F7.one(), std::invalid_argument);
    CHECK(F7.from_int(-1) == F7.elem(6));
}

TEST_CASE("field axioms hold exhaustively for q <= 16") {
    for (auto [p, k] : kSmallFields) {
        const FieldCtx& F = make_field(p, k);
        const auto els = F.elements();
        REQUIRE(els.size() == F.order());
        CHECK(els.front().is_zero());
        std::set<std::uint32_t> codes;
        for (const auto& e : els) codes.insert(e.code());
        CHECK(codes.size() == els.size());
        for (const auto& a : els) {
            CHECK(a + F.zero() == a);
            CHECK(a * F.one() == a);
            CHECK(a + (-a) == F.zero());
            if (!a.is_zero()) {
                CHECK(a * a.inv() == F.one());
                CHECK(a.pow(F.order() - 1) == F.one());
            }
            for (const auto& b : els) {
                CHECK(a + b == b + a);
                CHECK(a * b == b * a);
                // Frobenius
                CHECK((a + b).pow(p) == a.pow(p) + b.pow(p));
                for (const auto& c : els) {
                    if (F.order() > 9) continue;
                    CHECK((a + b) + c == a + (b + c));
                    CHECK((a * b) * c == a * (b * c));
                    CHECK(a * (b + c) == a * b + a * c);
                }
            }
        }
    }
}

TEST_CASE("log tables agree with the dense product") {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {7, 2}}) {
        const FieldCtx& F = make_field(p, k);
        for (std::uint32_t a = 0; a < F.order(); ++a)
            for (std::uint32_t b = 0; b < F.order(); ++b) {
                const std::uint32_t ref = F.mul_reference(a, b);
                REQUIRE(F.mul(a, b) == ref);
                REQUIRE(F.decompose(ref) == naive_mul(F.decompose(a), F.decompose(b), F.modulus(), F.p()));
            }
    }
}

TEST_CASE("randomized axioms above 16 elements") {
    std::mt19937_64 rng(7);
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{101, 1}, {5, 3}, {2, 8}, {3, 5}}) {
        const FieldCtx& F = make_field(p, k);
        for (int i = 0; i < 2000; ++i) {
            const FieldElem a = F.elem(static_cast<std::uint32_t>(rng() % F.order()));
            const FieldElem b = F.elem(static_cast<std::uint32_t>(rng() % F.order()));
            const FieldElem c = F.elem(static_cast<std::uint32_t>(rng() % F.order()));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK((a * b) * c == a * (b * c));
            CHECK((a + b).pow(p) == a.pow(p) + b.pow(p));
            if (!a.is_zero()) CHECK(a / a == F.one());
        }
    }
}

TEST_CASE("element enumeration order") {
    const FieldCtx& F3 = make_field(3, 1);
    std::vector<std::string> names;
    for (const auto& e : F3.elements()) names.push_back(e.to_string());
    CHECK(names == std::vector<std::string>{"0", "1", "2"});

    const FieldCtx& F9 = make_field(3, 2);
    names.clear();
    for (const auto& e : F9.elements()) names.push_back(e.to_string());
    // Least significant coefficient first, highest coefficient most significant in the order.
    CHECK(names == std::vector<std::string>{"00", "10", "20", "01", "11", "21", "02", "12", "22"});
}

TEST_CASE("render and parse round-trip") {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 1}, {13, 1}, {2, 4}, {3, 2}, {11, 2}}) {
        const FieldCtx& F = make_field(p, k);
        for (std::uint32_t c = 0; c < F.order(); ++c) CHECK(F.parse(F.render(c)) == c);
    }
    const FieldCtx& F121 = make_field(11, 2);
    CHECK(F121.render(F121.compose(std::vector<std::uint32_t>{10, 3})) == "10.3");
    CHECK_THROWS_AS(make_field(3, 1).parse("3"), std::invalid_argument);
    CHECK_THROWS_AS(make_field(3, 2).parse("1"), std::invalid_argument);
    CHECK_THROWS_AS(make_field(3, 1).parse(""), std::invalid_argument);
}

TEST_CASE("field spec strings") {
    CHECK(&parse_field_spec("3^2") == &make_field(3, 2));
    CHECK(&parse_field_spec("9") == &make_field(3, 2));
    CHECK(&parse_field_spec("7") == &make_field(7, 1));
    CHECK_THROWS_AS(parse_field_spec("6"), std::invalid_argument);
    CHECK_THROWS_AS(parse_field_spec("4^1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_field_spec("abc"), std::invalid_argument);
    CHECK_THROWS_AS(make_field(2, 30), CapExceeded);
}

TEST_CASE("embeddings are injective ring homomorphisms") {
    struct Case {
        std::uint64_t p;
        unsigned k, m;
    };
    for (auto [p, k, m] : std::vector<Case>{{2, 1, 2}, {3, 1, 2}, {2, 2, 2}, {2, 1, 4}, {3, 1, 3}}) {
        const FieldCtx& F = make_field(p, k);
        const Embedding emb(F, m);
        CHECK(emb.target().order() == [&] {
            std::uint64_t q = 1;
            for (unsigned i = 0; i < k * m; ++i) q *= p;
            return q;
        }());
        CHECK(emb(F.zero()) == emb.target().zero());
        CHECK(emb(F.one()) == emb.target().one());
        std::set<std::uint32_t> images;
        for (const auto& a : F.elements()) {
            images.insert(emb(a).code());
            for (const auto& b : F.elements()) {
                CHECK(emb(a) * emb(b) == emb(a * b));
                CHECK(emb(a) + emb(b) == emb(a + b));
            }
        }
        CHECK(images.size() == F.order());
    }
    const FieldCtx& F2 = make_field(2, 1);
    CHECK(embed(F2.one(), 2) == make_field(2, 2).one());
}

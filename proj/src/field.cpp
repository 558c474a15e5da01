#include "nikodym/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace nikodym {

namespace {

std::uint64_t ipow(std::uint64_t base, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

// Remainder of a modulo a monic b over GF(p). Both least significant first.
std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> a, std::span<const std::uint32_t> b,
                                    std::uint32_t p) {
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        std::uint32_t lead = a.back();
        std::size_t shift = a.size() - 1 - db;
        if (lead != 0) {
            for (std::size_t i = 0; i < db; ++i) {
                std::uint64_t t = std::uint64_t{lead} * b[i] % p;
                a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - t) % p);
            }
        }
        a.pop_back();
    }
    return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

bool prime_power(std::uint64_t q, std::uint64_t& p, unsigned& k) {
    if (q < 2) return false;
    std::uint64_t f = 2;
    while (f * f <= q && q % f != 0) ++f;
    if (q % f != 0) f = q;
    unsigned e = 0;
    std::uint64_t r = q;
    while (r % f == 0) {
        r /= f;
        ++e;
    }
    if (r != 1) return false;
    p = f;
    k = e;
    return true;
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> monic, std::uint32_t p) {
    if (monic.empty() || monic.back() != 1)
        throw std::invalid_argument("is_irreducible_mod_p: polynomial must be monic");
    const unsigned deg = static_cast<unsigned>(monic.size() - 1);
    if (deg == 0) return false;
    for (unsigned fd = 1; fd <= deg / 2; ++fd) {
        const std::uint64_t count = ipow(p, fd);
        for (std::uint64_t c = 0; c < count; ++c) {
            std::vector<std::uint32_t> g(fd + 1);
            std::uint64_t v = c;
            for (unsigned i = 0; i < fd; ++i) {
                g[i] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            g[fd] = 1;
            auto r = poly_rem(std::vector<std::uint32_t>(monic.begin(), monic.end()), g, p);
            if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldElem

FieldElem::FieldElem(const FieldCtx& ctx, std::uint32_t code) : ctx_(&ctx), code_(code) {
    if (code >= ctx.order()) throw std::invalid_argument("FieldElem: code out of range");
}

const FieldCtx& FieldElem::ctx() const {
    if (!ctx_) throw std::logic_error("FieldElem: no field context");
    return *ctx_;
}

const FieldCtx& FieldElem::checked_ctx(const FieldElem& o) const {
    if (ctx_ == nullptr || ctx_ != o.ctx_)
        throw std::invalid_argument("FieldElem: operands belong to different fields");
    return *ctx_;
}

std::vector<std::uint32_t> FieldElem::coeffs() const { return ctx().decompose(code_); }

FieldElem FieldElem::operator+(const FieldElem& o) const {
    const auto& c = checked_ctx(o);
    return FieldElem(c, c.add(code_, o.code_));
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    const auto& c = checked_ctx(o);
    return FieldElem(c, c.sub(code_, o.code_));
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    const auto& c = checked_ctx(o);
    return FieldElem(c, c.mul(code_, o.code_));
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
    const auto& c = checked_ctx(o);
    return FieldElem(c, c.mul(code_, c.inv(o.code_)));
}

FieldElem FieldElem::operator-() const { return FieldElem(ctx(), ctx().neg(code_)); }

FieldElem FieldElem::inv() const { return FieldElem(ctx(), ctx().inv(code_)); }

FieldElem FieldElem::pow(std::uint64_t e) const { return FieldElem(ctx(), ctx().pow(code_, e)); }

std::string FieldElem::to_string() const { return ctx().render(code_); }

// ---------------------------------------------------------------------------
// FieldCtx

FieldCtx::FieldCtx(std::uint32_t p, unsigned k, std::vector<std::uint32_t> modulus)
    : p_(p), k_(k), q_(static_cast<std::uint32_t>(ipow(p, k))), modulus_(std::move(modulus)) {
    if (k_ > 1) build_tables();
    else if (p_ > 2) {
        const auto factors = prime_factors(p_ - 1);
        for (std::uint32_t g = 2; g < p_; ++g) {
            bool ok = std::all_of(factors.begin(), factors.end(),
                                  [&](std::uint64_t f) { return pow(g, (p_ - 1) / f) != 1; });
            if (ok) {
                generator_ = g;
                break;
            }
        }
    }
}

std::string FieldCtx::spec() const { return std::to_string(p_) + "^" + std::to_string(k_); }

FieldElem FieldCtx::elem(std::uint32_t code) const { return FieldElem(*this, code); }

FieldElem FieldCtx::from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return FieldElem(*this, static_cast<std::uint32_t>(r));
}

std::uint32_t FieldCtx::add_ext(std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    std::uint32_t r = 0, place = 1;
    while (a != 0 || b != 0) {
        std::uint32_t s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        r += s * place;
        place *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

std::uint32_t FieldCtx::neg_ext(std::uint32_t a) const {
    if (p_ == 2) return a;
    std::uint32_t r = 0, place = 1;
    while (a != 0) {
        std::uint32_t d = a % p_;
        r += (d == 0 ? 0 : p_ - d) * place;
        place *= p_;
        a /= p_;
    }
    return r;
}

std::uint32_t FieldCtx::inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("FieldCtx::inv: inverse of zero");
    if (k_ == 1) return pow(a, p_ - 2);
    std::uint32_t l = log_[a];
    return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

std::uint32_t FieldCtx::pow(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    std::uint32_t b = a;
    while (e != 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

std::uint32_t FieldCtx::mul_reference(std::uint32_t a, std::uint32_t b) const {
    if (k_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    auto ca = decompose(a);
    auto cb = decompose(b);
    std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
    for (unsigned i = 0; i < k_; ++i) {
        if (ca[i] == 0) continue;
        for (unsigned j = 0; j < k_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_);
    }
    auto r = poly_rem(std::move(prod), modulus_, p_);
    r.resize(k_, 0);
    return compose(r);
}

void FieldCtx::build_tables() {
    auto pow_ref = [this](std::uint32_t a, std::uint64_t e) {
        std::uint32_t r = 1, b = a;
        while (e != 0) {
            if (e & 1) r = mul_reference(r, b);
            b = mul_reference(b, b);
            e >>= 1;
        }
        return r;
    };
    const auto factors = prime_factors(q_ - 1);
    generator_ = 0;
    for (std::uint32_t g = 1; g < q_; ++g) {
        bool ok = std::all_of(factors.begin(), factors.end(),
                              [&](std::uint64_t f) { return pow_ref(g, (q_ - 1) / f) != 1; });
        if (ok) {
            generator_ = g;
            break;
        }
    }
    if (generator_ == 0) throw std::logic_error("FieldCtx: no multiplicative generator (modulus reducible?)");
    exp_.assign(2 * (q_ - 1), 0);
    log_.assign(q_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = x;
        exp_[i + q_ - 1] = x;
        log_[x] = i;
        x = mul_reference(x, generator_);
    }
}

std::vector<std::uint32_t> FieldCtx::decompose(std::uint32_t code) const {
    std::vector<std::uint32_t> out(k_);
    for (unsigned i = 0; i < k_; ++i) {
        out[i] = code % p_;
        code /= p_;
    }
    return out;
}

std::uint32_t FieldCtx::compose(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() != k_) throw std::invalid_argument("FieldCtx::compose: wrong coefficient count");
    std::uint32_t r = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] >= p_) throw std::invalid_argument("FieldCtx::compose: coefficient out of range");
        r = r * p_ + coeffs[i];
    }
    return r;
}

std::vector<FieldElem> FieldCtx::elements() const {
    std::vector<FieldElem> out;
    out.reserve(q_);
    for (std::uint32_t c = 0; c < q_; ++c) out.emplace_back(*this, c);
    return out;
}

std::string FieldCtx::render(std::uint32_t code) const {
    if (k_ == 1) return std::to_string(code);
    auto c = decompose(code);
    std::string out;
    for (unsigned i = 0; i < k_; ++i) {
        if (p_ <= 10) {
            out.push_back(static_cast<char>('0' + c[i]));
        } else {
            if (i) out.push_back('.');
            out += std::to_string(c[i]);
        }
    }
    return out;
}

std::uint32_t FieldCtx::parse(const std::string& text) const {
    auto bad = [&] { return std::invalid_argument("cannot parse '" + text + "' as an element of GF(" + spec() + ")"); };
    auto parse_uint = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.size() > 10 || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw bad();
        return std::stoull(s);
    };
    if (k_ == 1) {
        auto v = parse_uint(text);
        if (v >= p_) throw bad();
        return static_cast<std::uint32_t>(v);
    }
    std::vector<std::uint32_t> coeffs;
    if (text.find('.') != std::string::npos) {
        std::size_t start = 0;
        while (true) {
            auto dot = text.find('.', start);
            auto v = parse_uint(text.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
            if (v >= p_) throw bad();
            coeffs.push_back(static_cast<std::uint32_t>(v));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
    } else {
        if (p_ > 10) throw bad();
        for (char ch : text) {
            if (ch < '0' || ch > '9' || static_cast<std::uint32_t>(ch - '0') >= p_) throw bad();
            coeffs.push_back(static_cast<std::uint32_t>(ch - '0'));
        }
    }
    if (coeffs.size() != k_) throw bad();
    return compose(coeffs);
}

// ---------------------------------------------------------------------------
// Construction

const FieldCtx& make_field(std::uint64_t p, unsigned k, std::uint64_t cap) {
    if (!is_prime(p)) throw std::invalid_argument("make_field: " + std::to_string(p) + " is not prime");
    if (k == 0) throw std::invalid_argument("make_field: extension degree must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) {
        q *= p;
        if (q > cap || q > (std::uint64_t{1} << 30))
            throw CapExceeded("make_field: field order " + std::to_string(p) + "^" + std::to_string(k) +
                              " exceeds cap " + std::to_string(cap));
    }

    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<FieldCtx>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, k);
    if (auto it = registry.find(key); it != registry.end()) return *it->second;

    const auto p32 = static_cast<std::uint32_t>(p);
    std::vector<std::uint32_t> modulus;
    if (k == 1) {
        modulus = {0, 1};
    } else {
        // Lexicographically least: try lower coefficients in code order, which
        // compares the highest-degree coefficient first.
        for (std::uint64_t c = 0; c < q; ++c) {
            std::vector<std::uint32_t> cand(k + 1);
            std::uint64_t v = c;
            for (unsigned i = 0; i < k; ++i) {
                cand[i] = static_cast<std::uint32_t>(v % p);
                v /= p;
            }
            cand[k] = 1;
            if (cand[0] != 0 && is_irreducible_mod_p(cand, p32)) {
                modulus = std::move(cand);
                break;
            }
        }
    }
    std::unique_ptr<FieldCtx> ctx(new FieldCtx(p32, k, std::move(modulus)));
    auto& ref = *ctx;
    registry.emplace(key, std::move(ctx));
    return ref;
}

const FieldCtx& parse_field_spec(const std::string& spec, std::uint64_t cap) {
    auto bad = [&] { return std::invalid_argument("bad field spec '" + spec + "' (expected p^k or a prime power q)"); };
    auto num = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.size() > 12 || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw bad();
        return std::stoull(s);
    };
    auto caret = spec.find('^');
    if (caret != std::string::npos) {
        auto p = num(spec.substr(0, caret));
        auto k = num(spec.substr(caret + 1));
        if (k == 0 || k > 64) throw bad();
        return make_field(p, static_cast<unsigned>(k), cap);
    }
    std::uint64_t p = 0;
    unsigned k = 0;
    if (!prime_power(num(spec), p, k)) throw bad();
    return make_field(p, k, cap);
}

// ---------------------------------------------------------------------------
// Embedding

Embedding::Embedding(const FieldCtx& source, unsigned m, std::uint64_t cap)
    : source_(&source), target_(&make_field(source.p(), source.k() * m, cap)), root_(0) {
    if (m == 0) throw std::invalid_argument("Embedding: degree must be positive");
    const auto& T = *target_;
    const auto& mod = source.modulus();
    bool found = false;
    for (std::uint32_t r = 0; r < T.order() && !found; ++r) {
        std::uint32_t acc = 0;
        for (std::size_t i = mod.size(); i-- > 0;) acc = T.add(T.mul(acc, r), mod[i]);
        if (acc == 0) {
            root_ = r;
            found = true;
        }
    }
    if (!found) throw std::logic_error("Embedding: modulus has no root in the extension");
    image_.resize(source.order());
    for (std::uint32_t c = 0; c < source.order(); ++c) {
        auto coeffs = source.decompose(c);
        std::uint32_t acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = T.add(T.mul(acc, root_), coeffs[i]);
        image_[c] = acc;
    }
}

FieldElem Embedding::operator()(const FieldElem& a) const {
    if (&a.ctx() != source_) throw std::invalid_argument("Embedding: element is not in the source field");
    return FieldElem(*target_, image_[a.code()]);
}

FieldElem embed(const FieldElem& a, unsigned m) { return Embedding(a.ctx(), m)(a); }

} // namespace nikodym

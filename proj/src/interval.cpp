#include "nikodym/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace nikodym {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Interval: lower bound exceeds upper bound");
}

Interval operator+(const Interval& a, const Interval& b) { return Interval(a.lo + b.lo, a.hi + b.hi); }

Interval operator-(const Interval& a, const Interval& b) { return Interval(a.lo - b.hi, a.hi - b.lo); }

Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

Interval operator*(const Interval& a, const Interval& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return Interval(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("Interval: division by an interval containing zero");
    Rational one(1);
    return a * Interval(one / b.hi, one / b.lo);
}

Interval pow(const Interval& a, unsigned e) {
    if (e == 0) return Interval::point(1);
    if (a.lo >= 0) {
        Rational l = 1, h = 1;
        for (unsigned i = 0; i < e; ++i) {
            l *= a.lo;
            h *= a.hi;
        }
        return Interval(l, h);
    }
    Interval r = a;
    for (unsigned i = 1; i < e; ++i) r = r * a;
    return r;
}

Rational ceil_rational(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

Rational floor_rational(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

namespace {

bool exact_root(const Integer& x, unsigned n, Integer& out) {
    return mpz_root(out.get_mpz_t(), x.get_mpz_t(), n) != 0;
}

Rational rpow(const Rational& x, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace

Interval nth_root(const Rational& x, unsigned n, const Rational& width) {
    if (n == 0) throw std::invalid_argument("nth_root: degree must be positive");
    if (x < 0) throw std::domain_error("nth_root: negative radicand");
    if (width <= 0) throw std::invalid_argument("nth_root: width must be positive");
    if (n == 1) return Interval::point(x);
    Integer rn, rd;
    if (exact_root(x.get_num(), n, rn) && exact_root(x.get_den(), n, rd)) return Interval::point(Rational(rn, rd));

    Rational lo, hi;
    if (x >= 1) {
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        Integer r;
        mpz_root(r.get_mpz_t(), fl.get_mpz_t(), n);
        lo = Rational(r);
        hi = Rational(r + 1);
    } else {
        lo = 0;
        hi = 1;
    }
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        if (rpow(mid, n) <= x) lo = mid;
        else hi = mid;
    }
    return Interval(lo, hi);
}

Interval nth_root(const Interval& x, unsigned n, const Rational& width) {
    return Interval(nth_root(x.lo, n, width).lo, nth_root(x.hi, n, width).hi);
}

Interval rational_power(const Rational& x, unsigned num, unsigned den, const Rational& width) {
    if (x < 0) throw std::domain_error("rational_power: negative base");
    return nth_root(rpow(x, num), den, width);
}

Interval rational_power(const Interval& x, unsigned num, unsigned den, const Rational& width) {
    if (x.lo < 0) throw std::domain_error("rational_power: negative base");
    return Interval(rational_power(x.lo, num, den, width).lo, rational_power(x.hi, num, den, width).hi);
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Undecided: return "undecided";
    }
    return "?";
}

Verdict check_le(const Interval& a, const Interval& b) {
    if (a.hi <= b.lo) return Verdict::Holds;
    if (a.lo > b.hi) return Verdict::Fails;
    return Verdict::Undecided;
}

Verdict check_ge(const Interval& a, const Interval& b) { return check_le(b, a); }

Verdict check_lt(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return Verdict::Holds;
    if (a.lo >= b.hi) return Verdict::Fails;
    return Verdict::Undecided;
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return std::invalid_argument("cannot parse '" + text + "' as a rational"); };
    if (text.empty()) throw bad();
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            Rational r(Integer(text.substr(0, slash), 10), Integer(text.substr(slash + 1), 10));
            if (r.get_den() == 0) throw bad();
            r.canonicalize();
            return r;
        }
        std::string mant = text;
        long exp10 = 0;
        if (auto e = text.find_first_of("eE"); e != std::string::npos) {
            mant = text.substr(0, e);
            exp10 = std::stol(text.substr(e + 1));
        }
        std::string digits = mant;
        if (auto dot = mant.find('.'); dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exp10 -= static_cast<long>(mant.size() - dot - 1);
        }
        if (digits.empty() || digits == "-" || digits == "+") throw bad();
        if (digits[0] == '+') digits.erase(0, 1);
        Rational r{Integer(digits, 10)};
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        if (exp10 < 0) r /= scale;
        else r *= scale;
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw bad();
    } catch (const std::out_of_range&) {
        throw bad();
    }
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

} // namespace nikodym

#pragma once

// Closed rational intervals with outward-correct arithmetic. Real quantities
// (roots, fractional powers) are carried as enclosures; every comparison
// returns Holds, Fails or Undecided and never consults floating point.

#include <gmpxx.h>

#include <string>

namespace nikodym {

using Rational = mpq_class;
using Integer = mpz_class;

struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational l, Rational h);
    static Interval point(const Rational& r) { return Interval(r, r); }

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& r) const { return lo <= r && r <= hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
// Divisor must not contain zero.
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned e);

Rational ceil_rational(const Rational& r);
Rational floor_rational(const Rational& r);

// Enclosure of x^{1/n} for x >= 0 of width <= width; a point when exact.
Interval nth_root(const Rational& x, unsigned n, const Rational& width);
Interval nth_root(const Interval& x, unsigned n, const Rational& width);
// x^{num/den} for x >= 0.
Interval rational_power(const Rational& x, unsigned num, unsigned den, const Rational& width);
Interval rational_power(const Interval& x, unsigned num, unsigned den, const Rational& width);

enum class Verdict { Holds, Fails, Undecided };
std::string verdict_name(Verdict v);

Verdict check_le(const Interval& a, const Interval& b);
Verdict check_ge(const Interval& a, const Interval& b);
Verdict check_lt(const Interval& a, const Interval& b);

// "3", "-2/7", "0.25", "1e-12".
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& r);
// Decimal approximation for display only.
double to_double(const Rational& r);

} // namespace nikodym

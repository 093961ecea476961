#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dolbeault {

// Exact rational arithmetic for the integer-weight formulas.  All branch
// decisions (floors, strict vs non-strict inequalities) are taken on exact
// rationals; doubles appear only at the quadrature layer.
//
// Stored normalized: den > 0, gcd(|num|, den) = 1.  Intermediates widen to
// __int128; the weight computations never leave tiny numerators, so the
// long long storage is not a practical limit.
struct rat {
    long long num = 0;
    long long den = 1;

    rat() = default;
    rat(long long n) : num(n), den(1) {}
    rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }
};

namespace detail {
inline rat make_rat_128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    rat r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    if (static_cast<__int128>(r.num) != n || static_cast<__int128>(r.den) != d)
        throw std::overflow_error("rat: overflow");
    return r;
}
} // namespace detail

inline rat operator+(rat a, rat b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                                static_cast<__int128>(a.den) * b.den);
}
inline rat operator-(rat a, rat b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                                static_cast<__int128>(a.den) * b.den);
}
inline rat operator-(rat a) { return rat(-a.num, a.den); }
inline rat operator*(rat a, rat b) {
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}
inline rat operator/(rat a, rat b) {
    if (b.num == 0) throw std::invalid_argument("rat: division by zero");
    return detail::make_rat_128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
}

inline bool operator==(rat a, rat b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(rat a, rat b) { return !(a == b); }
inline bool operator<(rat a, rat b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
inline bool operator>(rat a, rat b) { return b < a; }
inline bool operator<=(rat a, rat b) { return !(b < a); }
inline bool operator>=(rat a, rat b) { return !(a < b); }

// Largest integer <= a (floor toward minus infinity, exact).
inline long long floor_rat(rat a) {
    long long q = a.num / a.den;
    if (a.num % a.den != 0 && a.num < 0) --q;
    return q;
}
inline long long ceil_rat(rat a) { return -floor_rat(-a); }

// Parses "3", "-7/2", "1/12".  Whitespace is not tolerated; config values are
// trimmed before they reach this.
inline rat parse_rat(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return rat(std::stoll(text));
        return rat(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("rat: cannot parse '" + text + "'");
    }
}

inline std::string to_string(rat a) {
    if (a.den == 1) return std::to_string(a.num);
    return std::to_string(a.num) + "/" + std::to_string(a.den);
}

// Lebesgue exponent: a rational p >= 1 or infinity.
struct pexp {
    bool inf = false;
    rat p{1};

    static pexp finite(rat v) {
        if (v < rat(1)) throw std::invalid_argument("pexp: need p >= 1");
        pexp e; e.inf = false; e.p = v; return e;
    }
    static pexp infinity() { pexp e; e.inf = true; return e; }
};

inline pexp parse_pexp(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "oo") return pexp::infinity();
    return pexp::finite(parse_rat(text));
}

inline std::string to_string(const pexp& e) { return e.inf ? std::string("inf") : to_string(e.p); }

} // namespace dolbeault

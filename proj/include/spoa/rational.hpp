#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "spoa/errors.hpp"

namespace spoa {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

inline Integer pow10(unsigned long k) {
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, k);
    return t;
}

inline Integer parse_integer(std::string_view text, const std::string& original) {
    if (text.empty()) throw ValidationError("invalid rational literal '" + original + "'");
    std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (i == text.size()) throw ValidationError("invalid rational literal '" + original + "'");
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            throw ValidationError("invalid rational literal '" + original + "'");
    return Integer(std::string(text), 10);
}

} // namespace detail

/// Parses an exact rational from "p/q", integer, or decimal notation
/// ("3/4", "-2", "0.25", "1.5e-3"). Decimal forms are converted exactly.
inline Rational parse_rational(std::string_view text) {
    const std::string original(text);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ValidationError("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_integer(text.substr(0, slash), original);
        Integer den = detail::parse_integer(text.substr(slash + 1), original);
        if (den == 0) throw ValidationError("zero denominator in '" + original + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        Integer ex = detail::parse_integer(text.substr(e + 1), original);
        if (!ex.fits_slong_p()) throw ValidationError("exponent out of range in '" + original + "'");
        exponent = ex.get_si();
        text = text.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw ValidationError("invalid rational literal '" + original + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw ValidationError("invalid rational literal '" + original + "'");
        }
    }
    if (!seen_digit) throw ValidationError("invalid rational literal '" + original + "'");

    Rational r(Integer(digits, 10));
    long net = exponent - frac_digits;
    if (net > 0)
        r *= Rational(detail::pow10(static_cast<unsigned long>(net)));
    else if (net < 0)
        r /= Rational(detail::pow10(static_cast<unsigned long>(-net)));
    if (negative) r = -r;
    r.canonicalize();
    return r;
}

/// Canonical exact form: "p/q", or just "p" when the denominator is one.
inline std::string fraction_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Correctly rounded decimal approximation with `sig` significant digits
/// (round half away from zero). Plain notation for moderate magnitudes,
/// scientific otherwise.
inline std::string decimal_string(const Rational& r, int sig = 12) {
    if (sig < 1) throw ValidationError("significant digit count must be positive");
    if (sgn(r) == 0) return "0";
    const bool negative = sgn(r) < 0;
    Integer p = abs(r.get_num());
    Integer q = r.get_den();

    // decimal exponent e with 10^e <= p/q < 10^(e+1)
    long e = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 10));
    auto too_low = [&](long cand) {  // p/q < 10^cand ?
        return cand >= 0 ? p < q * detail::pow10(static_cast<unsigned long>(cand))
                         : p * detail::pow10(static_cast<unsigned long>(-cand)) < q;
    };
    while (too_low(e)) --e;
    while (!too_low(e + 1)) ++e;

    long scale = sig - 1 - e;
    Integer num = p, den = q;
    if (scale >= 0)
        num *= detail::pow10(static_cast<unsigned long>(scale));
    else
        den *= detail::pow10(static_cast<unsigned long>(-scale));
    Integer rounded = (2 * num + den) / (2 * den);
    if (rounded >= detail::pow10(static_cast<unsigned long>(sig))) {
        rounded /= 10;
        ++e;
    }
    std::string ds = rounded.get_str();

    std::string out;
    if (e >= 0 && e < sig + 3) {
        if (e + 1 >= static_cast<long>(ds.size())) {
            out = ds + std::string(e + 1 - ds.size(), '0');
        } else {
            out = ds.substr(0, e + 1) + "." + ds.substr(e + 1);
        }
    } else if (e < 0 && e >= -4) {
        out = "0." + std::string(-e - 1, '0') + ds;
    } else {
        out = ds.substr(0, 1);
        if (ds.size() > 1) out += "." + ds.substr(1);
        out += "e" + std::to_string(e);
    }
    return negative ? "-" + out : out;
}

inline double to_double(const Rational& r) { return r.get_d(); }

} // namespace spoa

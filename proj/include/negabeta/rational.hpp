// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "negabeta/errors.hpp"

namespace negabeta {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Int floor_int(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Int ceil_int(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat pow_rat(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    Rat base = e > 0 ? q : Rat(1) / q;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rat acc(1);
    Rat p = base;
    while (n) {
        if (n & 1) acc *= p;
        p *= p;
        n >>= 1;
    }
    return acc;
}

/// Parses "p/q", an integer, or a plain decimal like "-2.75" into an exact rational.
inline Rat parse_rat(const std::string& s) {
    auto fail = [&] { throw PreconditionFailed("cannot parse rational: '" + s + "'"); };
    if (s.empty()) fail();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat q;
        if (q.set_str(s, 10) != 0) fail();
        if (q.get_den() == 0) fail();
        q.canonicalize();
        return q;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rat q;
        if (q.set_str(s, 10) != 0) fail();
        return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t places = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") fail();
    Int num;
    if (num.set_str(digits, 10) != 0) fail();
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rat_string(const Rat& q) { return q.get_str(); }

/// Rounds q to `places` decimal places, half away from zero. Deterministic by construction.
inline std::string decimal_string(const Rat& q, int places) {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    Rat scaled = q * Rat(scale);
    // round half away from zero, on the magnitude
    bool neg = sgn(scaled) < 0;
    Int num_mag = abs(scaled.get_num());
    Int mag;
    mpz_fdiv_q(mag.get_mpz_t(), Int(2 * num_mag + scaled.get_den()).get_mpz_t(),
               Int(2 * scaled.get_den()).get_mpz_t());
    std::string digits = mag.get_str();
    if (static_cast<int>(digits.size()) <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - places);
    if (places > 0) out += "." + digits.substr(digits.size() - places);
    if (neg && mag != 0) out.insert(0, 1, '-');
    return out;
}

} // namespace negabeta

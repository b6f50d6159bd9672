#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace topaq {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(Integer(std::to_string(num)), Integer(std::to_string(den)));
    q.canonicalize();
    return q;
}

inline Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline long long to_ll(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return z.get_si();
}

// Exact textual form: "3", "3/2", "-1/4".
inline std::string to_string(const Rational& q) { return q.get_str(); }

// Accepts "2", "-3", "3/2", "1.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
    if (s.empty()) throw bad();
    auto all_digits = [](std::string_view v) {
        if (v.empty()) return false;
        for (char c : v)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    bool neg = false;
    std::string_view body(s);
    if (body.front() == '-' || body.front() == '+') {
        neg = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational r;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto n = body.substr(0, slash), d = body.substr(slash + 1);
        if (!all_digits(n) || !all_digits(d)) throw bad();
        Integer den{std::string(d)};
        if (den == 0) throw bad();
        r = Rational(Integer(std::string(n)), den);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
            (ip.empty() && fp.empty()))
            throw bad();
        Integer den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        Integer num(std::string(ip.empty() ? "0" : ip) + std::string(fp));
        r = Rational(num, den);
    } else {
        if (!all_digits(body)) throw bad();
        r = Rational(Integer(std::string(body)));
    }
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

inline Integer lcm_of(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace topaq

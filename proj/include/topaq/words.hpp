#pragma once

#include "constructions.hpp"
#include "regions.hpp"

#include <sstream>

namespace topaq {

using TickedWord = std::vector<std::string>;

// Equal integral parts, zero fractions coincide, fraction order coincides.
inline bool sequence_equiv(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (floor_of(a[i]) != floor_of(b[i])) return false;
        if ((frac_of(a[i]) == 0) != (frac_of(b[i]) == 0)) return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if ((frac_of(a[i]) <= frac_of(a[j])) != (frac_of(b[i]) <= frac_of(b[j]))) return false;
    return true;
}

inline std::vector<Rational> timestamps(const TimedWord& w) {
    std::vector<Rational> r;
    for (const auto& l : w) r.push_back(l.time);
    return r;
}

inline bool word_equiv(const TimedWord& w, const TimedWord& v) {
    return untimed(w) == untimed(v) && sequence_equiv(timestamps(w), timestamps(v));
}

// Lift of the piecewise-linear map sending f[k] to g[k] on [0,1).
inline TimedWord distort(const TimedWord& w, const std::vector<Rational>& f, const std::vector<Rational>& g) {
    auto check = [](const std::vector<Rational>& s) {
        if (s.size() < 2 || s.front() != 0 || s.back() != 1)
            throw std::invalid_argument("distortion points must start at 0 and end at 1");
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!(s[i - 1] < s[i])) throw std::invalid_argument("distortion points must be strictly increasing");
    };
    check(f);
    check(g);
    if (f.size() != g.size()) throw std::invalid_argument("distortion point lists differ in length");
    TimedWord r = w;
    for (auto& l : r) {
        Rational fr = frac_of(l.time);
        auto it = std::find(f.begin(), f.end(), fr);
        if (it == f.end())
            throw std::invalid_argument("fractional part " + to_string(fr) + " is not a distortion point");
        l.time = Rational(floor_of(l.time)) + g[it - f.begin()];
    }
    return r;
}

inline std::string gadget_letter(const std::vector<int>& k) {
    std::string s = "f{";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + "}";
}

inline std::vector<int> parse_gadget_letter(const std::string& s) {
    if (!is_gadget_letter(s) || s.back() != '}') throw std::invalid_argument("not a gadget letter: '" + s + "'");
    std::vector<int> r;
    std::stringstream in(s.substr(2, s.size() - 3));
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("not a gadget letter: '" + s + "'");
        r.push_back(std::stoi(part));
    }
    if (r.empty()) throw std::invalid_argument("not a gadget letter: '" + s + "'");
    return r;
}

// Index 0 stands for time 0; indices beyond |w| (up to N) join the fraction-0 group.
inline TickedWord ticked_word(const TimedWord& w, int N) {
    if (static_cast<int>(w.size()) > N)
        throw std::invalid_argument("word of length " + std::to_string(w.size()) + " exceeds N = " + std::to_string(N));
    TickedWord r;
    Integer prev = 0;
    for (const auto& l : w) {
        Integer ip = floor_of(l.time);
        for (Integer k = prev; k < ip; ++k) r.push_back("t");
        prev = std::max(prev, ip);
        r.push_back(l.action);
    }
    std::map<Rational, std::vector<int>> groups;
    groups[Rational(0)].push_back(0);
    for (std::size_t i = 0; i < w.size(); ++i) groups[frac_of(w[i].time)].push_back(static_cast<int>(i) + 1);
    for (int i = static_cast<int>(w.size()) + 1; i <= N; ++i) groups[Rational(0)].push_back(i);
    for (auto& [fr, idx] : groups) {
        std::sort(idx.begin(), idx.end());
        r.push_back(gadget_letter(idx));
    }
    return r;
}

inline std::string format_ticked(const TickedWord& w) {
    std::string s;
    for (const auto& a : w) s += (s.empty() ? "" : " ") + a;
    return s;
}

// Canonical representative: with gadget letters f_K0 ... f_Km, block i >= 1 gets fraction i/(m+2).
inline TimedWord decode_ticked(const TickedWord& w, const std::string& tick = "t") {
    TimedWord r;
    long long ip = 0;
    std::vector<long long> ips;
    std::vector<std::vector<int>> groups;
    for (const auto& a : w) {
        if (a == tick) {
            ++ip;
        } else if (is_gadget_letter(a)) {
            groups.push_back(parse_gadget_letter(a));
        } else {
            r.push_back({a, Rational(0)});
            ips.push_back(ip);
        }
    }
    const long long m = groups.empty() ? 0 : static_cast<long long>(groups.size()) - 1;
    std::vector<Rational> frac(r.size() + 1, Rational(0));
    for (std::size_t g = 1; g < groups.size(); ++g)
        for (int i : groups[g])
            if (i >= 1 && i <= static_cast<int>(r.size())) frac[i] = make_rational(static_cast<long long>(g), m + 2);
    for (std::size_t i = 0; i < r.size(); ++i) r[i].time = Rational(Integer(std::to_string(ips[i]))) + frac[i + 1];
    return r;
}

// Chain automaton accepting exactly the timed words equivalent to w.
// Clock x_j is reset by the j-th letter (x_0 measures absolute time).
inline TimedAutomaton class_recognizer(const TimedWord& w) {
    TimedAutomaton r;
    r.name = "class";
    const int n = static_cast<int>(w.size());
    std::vector<int> x;
    for (int j = 0; j < std::max(n, 1); ++j) x.push_back(r.add_clock("x" + std::to_string(j)));
    for (int i = 0; i <= n; ++i) r.add_location("c" + std::to_string(i), {}, false, i == n);
    r.init = 0;
    std::vector<Rational> tau{Rational(0)};
    for (const auto& l : w) tau.push_back(l.time);
    for (int i = 1; i <= n; ++i) {
        Guard g;
        for (int j = 0; j < i; ++j) {
            Rational d = tau[i] - tau[j];
            if (is_integral(d)) {
                g.push_back({x[j], Cmp::Eq, to_ll(floor_of(d))});
            } else {
                g.push_back({x[j], Cmp::Gt, to_ll(floor_of(d))});
                g.push_back({x[j], Cmp::Lt, to_ll(ceil_of(d))});
            }
        }
        std::vector<int> res;
        if (i < n) res.push_back(x[i]);
        r.add_edge(i - 1, i, r.add_action(w[i - 1].action), std::move(g), std::move(res));
    }
    return r;
}

inline bool language_nonempty(const TimedAutomaton& ta) {
    return shortest_accepting_path(build_region_automaton(ta)).has_value();
}

// Exact membership of a timed word, via reachability in the product with its class recognizer.
inline bool member(const TimedWord& w, const TimedAutomaton& ta) {
    TimedAutomaton rec = class_recognizer(w);
    if (ta.discrete()) {
        for (const auto& l : w)
            if (!is_integral(l.time)) return false;
        rec.time = TimeDomain::Discrete;
    }
    return language_nonempty(product(ta, rec));
}

}  // namespace topaq

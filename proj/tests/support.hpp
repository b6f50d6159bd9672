#pragma once

#include "topaq/topaq.hpp"

#include <random>

namespace support {

using namespace topaq;

inline TimedAutomaton model(const std::string& name) {
    return load_model(std::string(TOPAQ_MODELS) + "/" + name + ".ta");
}

inline Rational q(long long n, long long d = 1) { return make_rational(n, d); }

inline TimedWord word(std::initializer_list<std::pair<const char*, Rational>> letters) {
    TimedWord w;
    for (const auto& [a, t] : letters) w.push_back({a, t});
    return w;
}

inline int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Timestamps are nondecreasing multiples of 1/den with den <= max_den.
inline TimedWord random_word(std::mt19937& rng, int max_len, int max_den, int max_int = 3,
                             const std::vector<std::string>& letters = {"a", "b"}) {
    TimedWord w;
    const int len = uniform(rng, 0, max_len);
    const int den = uniform(rng, 1, max_den);
    std::vector<int> ticks;
    for (int i = 0; i < len; ++i) ticks.push_back(uniform(rng, 0, max_int * den));
    std::sort(ticks.begin(), ticks.end());
    for (int t : ticks) w.push_back({letters[uniform(rng, 0, static_cast<int>(letters.size()) - 1)], q(t, den)});
    return w;
}

inline Guard random_guard(std::mt19937& rng, int clocks, int max_const) {
    Guard g;
    const int n = uniform(rng, 0, clocks == 0 ? 0 : 2);
    for (int i = 0; i < n; ++i)
        g.push_back({uniform(rng, 0, clocks - 1), static_cast<Cmp>(uniform(rng, 0, 4)), uniform(rng, 0, max_const)});
    return g;
}

// Random automaton over actions a, b with at most 4 locations, 2 clocks, constants <= 2 and 6 edges.
inline TimedAutomaton random_ta(std::mt19937& rng, TimeDomain time) {
    TimedAutomaton ta;
    ta.name = "random";
    ta.time = time;
    ta.add_action("a");
    ta.add_action("b");
    const int nc = uniform(rng, 1, 2);
    for (int x = 0; x < nc; ++x) ta.add_clock("x" + std::to_string(x));
    const int nl = uniform(rng, 2, 4);
    for (int l = 0; l < nl; ++l) {
        Guard inv;
        if (uniform(rng, 0, 3) == 0) inv.push_back({uniform(rng, 0, nc - 1), uniform(rng, 0, 1) ? Cmp::Le : Cmp::Lt,
                                                    uniform(rng, 1, 2)});
        ta.add_location("l" + std::to_string(l), inv, l > 0 && uniform(rng, 0, 2) == 0, l > 0 && uniform(rng, 0, 2) == 0);
    }
    ta.fin[nl - 1] = 1;
    const int ne = uniform(rng, 2, 6);
    for (int i = 0; i < ne; ++i) {
        int s = uniform(rng, 0, nl - 1), t = uniform(rng, 0, nl - 1);
        int a = uniform(rng, 0, 3) == 0 ? kEps : uniform(rng, 0, 1);
        std::vector<int> r;
        for (int x = 0; x < nc; ++x)
            if (uniform(rng, 0, 2) == 0) r.push_back(x);
        ta.add_edge(s, t, a, random_guard(rng, nc, 2), r);
    }
    return ta;
}

}  // namespace support

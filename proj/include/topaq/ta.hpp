#pragma once

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace topaq {

enum class Cmp { Lt, Le, Eq, Ge, Gt };

inline const char* cmp_symbol(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Eq: return "==";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
    }
    return "?";
}

struct ClockConstraint {
    int clock = 0;
    Cmp cmp = Cmp::Le;
    long long bound = 0;
    bool operator==(const ClockConstraint&) const = default;
};

// Conjunction; empty means true.
using Guard = std::vector<ClockConstraint>;

inline constexpr int kEps = -1;

struct Edge {
    int source = 0;
    int target = 0;
    int action = kEps;
    Guard guard;
    std::vector<int> resets;
    bool operator==(const Edge&) const = default;
};

enum class TimeDomain { Dense, Discrete };

struct TimedAutomaton {
    std::string name = "A";
    TimeDomain time = TimeDomain::Dense;
    std::vector<std::string> actions;
    std::vector<std::string> clocks;
    std::vector<std::string> locations;
    int init = 0;
    std::vector<char> priv;
    std::vector<char> fin;
    std::vector<Guard> invariant;
    std::vector<Edge> edges;

    bool operator==(const TimedAutomaton&) const = default;

    int add_location(const std::string& n, Guard inv = {}, bool is_priv = false, bool is_fin = false) {
        locations.push_back(n);
        invariant.push_back(std::move(inv));
        priv.push_back(is_priv);
        fin.push_back(is_fin);
        return static_cast<int>(locations.size()) - 1;
    }
    int add_clock(const std::string& n) {
        clocks.push_back(n);
        return static_cast<int>(clocks.size()) - 1;
    }
    int add_action(const std::string& n) {
        if (int i = action_index(n); i >= 0) return i;
        actions.push_back(n);
        return static_cast<int>(actions.size()) - 1;
    }
    void add_edge(int s, int t, int a, Guard g = {}, std::vector<int> r = {}) {
        edges.push_back(Edge{s, t, a, std::move(g), std::move(r)});
    }

    static int index_in(const std::vector<std::string>& v, const std::string& n) {
        auto it = std::find(v.begin(), v.end(), n);
        return it == v.end() ? -1 : static_cast<int>(it - v.begin());
    }
    int location_index(const std::string& n) const { return index_in(locations, n); }
    int clock_index(const std::string& n) const { return index_in(clocks, n); }
    int action_index(const std::string& n) const { return index_in(actions, n); }

    std::size_t num_locations() const { return locations.size(); }
    std::size_t num_clocks() const { return clocks.size(); }
    bool is_private(int l) const { return priv[l] != 0; }
    bool is_final(int l) const { return fin[l] != 0; }
    bool discrete() const { return time == TimeDomain::Discrete; }

    std::string action_name(int a) const { return a == kEps ? std::string("eps") : actions[a]; }

    // A name not yet used as a clock.
    std::string fresh_clock_name(std::string base) const {
        while (clock_index(base) >= 0) base += "'";
        return base;
    }
    std::string fresh_location_name(std::string base) const {
        while (location_index(base) >= 0) base += "'";
        return base;
    }
};

// M(x): largest constant compared with x, 0 when x is unconstrained.
inline std::vector<long long> max_constants(const TimedAutomaton& ta) {
    std::vector<long long> m(ta.num_clocks(), 0);
    auto visit = [&](const Guard& g) {
        for (const auto& c : g)
            if (c.clock >= 0 && c.clock < static_cast<int>(m.size())) m[c.clock] = std::max(m[c.clock], c.bound);
    };
    for (const auto& inv : ta.invariant) visit(inv);
    for (const auto& e : ta.edges) visit(e.guard);
    return m;
}

inline long long max_constant(const TimedAutomaton& ta) {
    long long r = 0;
    for (auto v : max_constants(ta)) r = std::max(r, v);
    return r;
}

inline bool has_epsilon_edges(const TimedAutomaton& ta) {
    return std::any_of(ta.edges.begin(), ta.edges.end(), [](const Edge& e) { return e.action == kEps; });
}

inline std::string format_constraint(const TimedAutomaton& ta, const ClockConstraint& c) {
    return ta.clocks[c.clock] + " " + cmp_symbol(c.cmp) + " " + std::to_string(c.bound);
}

inline std::string format_guard(const TimedAutomaton& ta, const Guard& g) {
    if (g.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) s += " && ";
        s += format_constraint(ta, g[i]);
    }
    return s;
}

struct Diagnostic {
    std::string message;
    bool warning = false;
};

inline std::vector<Diagnostic> validate(const TimedAutomaton& ta) {
    std::vector<Diagnostic> out;
    const int nl = static_cast<int>(ta.num_locations());
    const int nc = static_cast<int>(ta.num_clocks());
    const int na = static_cast<int>(ta.actions.size());
    auto err = [&](std::string m) { out.push_back({std::move(m), false}); };
    auto check_names = [&](const std::vector<std::string>& names, const char* kind) {
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second) err(std::string("duplicate ") + kind + " name '" + n + "'");
    };
    check_names(ta.locations, "location");
    check_names(ta.clocks, "clock");
    check_names(ta.actions, "action");
    if (nl == 0) err("automaton has no location");
    if (ta.init < 0 || ta.init >= nl) err("initial location index " + std::to_string(ta.init) + " out of range");
    if (static_cast<int>(ta.priv.size()) != nl) err("private flags do not cover all locations");
    if (static_cast<int>(ta.fin.size()) != nl) err("final flags do not cover all locations");
    if (static_cast<int>(ta.invariant.size()) != nl) err("invariant not defined on every location");
    auto check_guard = [&](const Guard& g, const std::string& where) {
        for (const auto& c : g) {
            if (c.clock < 0 || c.clock >= nc) {
                err(where + ": constraint on unknown clock #" + std::to_string(c.clock));
                continue;
            }
            if (c.bound < 0)
                out.push_back({where + ": constraint '" + format_constraint(ta, c) +
                                   "' has a negative bound (vacuous or unsatisfiable on nonnegative clocks)",
                               true});
        }
    };
    for (int l = 0; l < nl && l < static_cast<int>(ta.invariant.size()); ++l)
        check_guard(ta.invariant[l], "invariant of '" + ta.locations[l] + "'");
    for (std::size_t i = 0; i < ta.edges.size(); ++i) {
        const auto& e = ta.edges[i];
        std::string where = "edge #" + std::to_string(i);
        bool ok = true;
        if (e.source < 0 || e.source >= nl) {
            err(where + ": unknown source location #" + std::to_string(e.source));
            ok = false;
        }
        if (e.target < 0 || e.target >= nl) {
            err(where + ": unknown target location #" + std::to_string(e.target));
            ok = false;
        }
        if (ok) where += " (" + ta.locations[e.source] + " -> " + ta.locations[e.target] + ")";
        if (e.action != kEps && (e.action < 0 || e.action >= na))
            err(where + ": unknown action #" + std::to_string(e.action));
        check_guard(e.guard, where);
        for (int r : e.resets)
            if (r < 0 || r >= nc) err(where + ": reset of clock #" + std::to_string(r) + " not in the clock set");
    }
    return out;
}

inline bool has_errors(const std::vector<Diagnostic>& d) {
    return std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return !x.warning; });
}

struct TimedLetter {
    std::string action;
    Rational time;
    bool operator==(const TimedLetter& o) const { return action == o.action && time == o.time; }
    bool operator<(const TimedLetter& o) const {
        if (action != o.action) return action < o.action;
        return time < o.time;
    }
};

using TimedWord = std::vector<TimedLetter>;

inline std::string format_word(const TimedWord& w) {
    if (w.empty()) return "(empty)";
    std::string s;
    for (const auto& l : w) s += "(" + l.action + ", " + to_string(l.time) + ")";
    return s;
}

inline std::vector<std::string> untimed(const TimedWord& w) {
    std::vector<std::string> r;
    for (const auto& l : w) r.push_back(l.action);
    return r;
}

inline TimedWord scale_word(const TimedWord& w, const Rational& k) {
    TimedWord r = w;
    for (auto& l : r) l.time *= k;
    return r;
}

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decision procedure not applicable (undecidable class, precondition).
struct Refused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace topaq

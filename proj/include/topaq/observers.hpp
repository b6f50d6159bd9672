#pragma once

#include "words.hpp"

namespace topaq {

inline constexpr int kMaxObservations = 8;

struct TimeSelection {
    enum class Kind { FirstN, Static, Dynamic };
    Kind kind = Kind::FirstN;
    int n = 0;
    std::vector<Rational> tau;

    static TimeSelection first(int n) { return {Kind::FirstN, n, {}}; }
    static TimeSelection fixed(std::vector<Rational> tau) {
        int n = static_cast<int>(tau.size());
        return {Kind::Static, n, std::move(tau)};
    }
    static TimeSelection dynamic(int n) { return {Kind::Dynamic, n, {}}; }

    // Observations an attacker makes at most.
    int bound() const { return n; }
};

inline std::string format_selection(const TimeSelection& s) {
    switch (s.kind) {
        case TimeSelection::Kind::FirstN: return "first:" + std::to_string(s.n);
        case TimeSelection::Kind::Dynamic: return "dynamic:" + std::to_string(s.n);
        case TimeSelection::Kind::Static: {
            std::string r = "static:";
            for (std::size_t i = 0; i < s.tau.size(); ++i) r += (i ? "," : "") + to_string(s.tau[i]);
            return r;
        }
    }
    return "";
}

// "first:N", "static:t1,t2,..." or "dynamic:N".
inline TimeSelection parse_selection(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("observation must look like first:N, static:LIST or dynamic:N");
    std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
    auto count = [&]() {
        if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos || arg.size() > 6)
            throw std::invalid_argument("observation count must be a nonnegative integer: '" + arg + "'");
        return std::stoi(arg);
    };
    if (kind == "first") return TimeSelection::first(count());
    if (kind == "dynamic") return TimeSelection::dynamic(count());
    if (kind == "static") {
        std::vector<Rational> tau;
        std::stringstream in(arg);
        std::string part;
        while (std::getline(in, part, ',')) tau.push_back(parse_rational(part));
        for (std::size_t i = 0; i < tau.size(); ++i) {
            if (tau[i] < 0) throw std::invalid_argument("switch-on times must be nonnegative");
            if (i && tau[i] < tau[i - 1]) throw std::invalid_argument("switch-on times must be nondecreasing");
        }
        return TimeSelection::fixed(std::move(tau));
    }
    throw std::invalid_argument("unknown observation kind '" + kind + "'");
}

// Projection for first-N and static selections; dynamic ones have no single projection.
inline TimedWord project(const TimedWord& w, const TimeSelection& sel) {
    if (sel.kind == TimeSelection::Kind::FirstN)
        return TimedWord(w.begin(), w.begin() + std::min<std::size_t>(w.size(), static_cast<std::size_t>(sel.n)));
    if (sel.kind == TimeSelection::Kind::Dynamic)
        throw std::invalid_argument("dynamic selections have no fixed projection");
    const auto& tau = sel.tau;
    const std::size_t n = tau.size();
    TimedWord r;
    std::size_t ind = 0;
    for (const auto& l : w) {
        if (ind >= n || l.time < tau[ind]) continue;
        r.push_back(l);
        std::size_t next = ind + 1;
        while (next < n && tau[next] < l.time) ++next;
        ind = next;
    }
    return r;
}

// Copies 0..N; observable letters move to the next copy. In copy N they are relabelled
// silent so the run can still complete.
inline TimedAutomaton unfold_first_n(const TimedAutomaton& ta, int N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    TimedAutomaton r = empty_shell(ta, ta.name + "_first" + std::to_string(N));
    const int n = static_cast<int>(ta.num_locations());
    for (int i = 0; i <= N; ++i)
        for (int l = 0; l < n; ++l)
            r.add_location(ta.locations[l] + "@" + std::to_string(i), ta.invariant[l], ta.is_private(l), ta.is_final(l));
    auto id = [&](int l, int i) { return i * n + l; };
    for (int i = 0; i <= N; ++i)
        for (const auto& e : ta.edges) {
            if (e.action == kEps || i == N)
                r.add_edge(id(e.source, i), id(e.target, i), kEps, e.guard, e.resets);
            else
                r.add_edge(id(e.source, i), id(e.target, i + 1), e.action, e.guard, e.resets);
        }
    r.init = id(ta.init, 0);
    return r;
}

namespace detail {

// x_J = 1 for J, 0 < x < 1 for the other listed clocks.
inline Guard unit_guard(const std::vector<int>& clocks, unsigned mask) {
    Guard g;
    for (std::size_t k = 0; k < clocks.size(); ++k) {
        if (mask & (1u << k)) {
            g.push_back({clocks[k], Cmp::Eq, 1});
        } else {
            g.push_back({clocks[k], Cmp::Gt, 0});
            g.push_back({clocks[k], Cmp::Lt, 1});
        }
    }
    return g;
}

inline std::vector<int> mask_clocks(const std::vector<int>& clocks, unsigned mask) {
    std::vector<int> r;
    for (std::size_t k = 0; k < clocks.size(); ++k)
        if (mask & (1u << k)) r.push_back(clocks[k]);
    return r;
}

inline std::vector<int> mask_indices(unsigned mask, int offset) {
    std::vector<int> r;
    for (int k = 0; k < 32; ++k)
        if (mask & (1u << k)) r.push_back(k + offset);
    return r;
}

}  // namespace detail

// Region automaton words of the result are the ticked words of the first-N projections
// of the traces of ta (up to ticks between the last letter and the gadget suffix).
inline TimedAutomaton tick_construction(const TimedAutomaton& ta, int N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    if (N > kMaxObservations)
        throw ResourceExceeded("N = " + std::to_string(N) + " exceeds the observation cap " +
                               std::to_string(kMaxObservations));
    if (ta.discrete()) throw ModelError("tick construction expects a dense-time automaton");
    if (ta.action_index("t") >= 0) throw ModelError("action name 't' is reserved for ticks");
    TimedAutomaton u = release_final_invariants(unfold_first_n(ta, N));
    TimedAutomaton r = u;
    r.name = ta.name + "_tick" + std::to_string(N);
    r.edges.clear();
    std::vector<int> xs;  // x_0 .. x_N
    for (int k = 0; k <= N; ++k) xs.push_back(r.add_clock(r.fresh_clock_name("x_" + std::to_string(k))));
    std::vector<int> obs(xs.begin() + 1, xs.end());
    Guard below;
    for (int x : xs) below.push_back({x, Cmp::Lt, 1});
    const int n = static_cast<int>(ta.num_locations());
    for (const auto& e : u.edges) {
        Edge ne = e;
        ne.guard.insert(ne.guard.end(), below.begin(), below.end());
        if (e.action != kEps) {
            int copy = e.source / n;
            ne.resets.push_back(xs[copy + 1]);
        }
        r.edges.push_back(std::move(ne));
    }
    const int tick = r.add_action("t");
    const int nl = static_cast<int>(u.num_locations());
    for (int l = 0; l < nl; ++l) {
        if (!u.is_final(l)) r.add_edge(l, l, tick, {{xs[0], Cmp::Eq, 1}}, {xs[0]});
        for (unsigned m = 1; m < (1u << N); ++m)
            r.add_edge(l, l, kEps, detail::unit_guard(obs, m), detail::mask_clocks(obs, m));
    }
    const int g0 = r.add_location(r.fresh_location_name("G0"));
    const int g1 = r.add_location(r.fresh_location_name("G1"), {}, false, true);
    for (int l = 0; l < nl; ++l) {
        r.fin[l] = 0;
        if (!u.is_final(l)) continue;
        for (unsigned m = 0; m < (1u << N); ++m) {
            unsigned full = (m << 1) | 1u;
            int f = r.add_action(gadget_letter(detail::mask_indices(full, 0)));
            r.add_edge(l, g0, f, detail::unit_guard(xs, full), detail::mask_clocks(xs, full));
        }
    }
    for (unsigned m = 1; m < (1u << N); ++m) {
        unsigned full = m << 1;
        int f = r.add_action(gadget_letter(detail::mask_indices(full, 0)));
        r.add_edge(g0, g0, f, detail::unit_guard(xs, full), detail::mask_clocks(xs, full));
    }
    for (unsigned m = 0; m < (1u << N); ++m) {
        unsigned full = (m << 1) | 1u;
        r.add_edge(g0, g1, kEps, detail::unit_guard(xs, full));
    }
    return r;
}

// Each switch-on time becomes floor + rank of its fraction / (number of distinct nonzero fractions + 1).
inline std::vector<Rational> normalize_sequence(const std::vector<Rational>& tau) {
    std::vector<Rational> fr;
    for (const auto& t : tau)
        if (frac_of(t) != 0) fr.push_back(frac_of(t));
    std::sort(fr.begin(), fr.end());
    fr.erase(std::unique(fr.begin(), fr.end()), fr.end());
    const long long nf = static_cast<long long>(fr.size());
    std::vector<Rational> r;
    for (const auto& t : tau) {
        Rational f = frac_of(t);
        long long s = f == 0 ? 0 : static_cast<long long>(std::lower_bound(fr.begin(), fr.end(), f) - fr.begin()) + 1;
        r.push_back(Rational(floor_of(t)) + make_rational(s, nf + 1));
    }
    return r;
}

inline Integer common_denominator(const std::vector<Rational>& v) {
    Integer d = 1;
    for (const auto& q : v) d = lcm_of(d, q.get_den());
    return d;
}

inline TimedAutomaton scale_constants(TimedAutomaton ta, long long k) {
    for (auto& inv : ta.invariant)
        for (auto& c : inv) c.bound *= k;
    for (auto& e : ta.edges)
        for (auto& c : e.guard) c.bound *= k;
    return ta;
}

struct ScaledAutomaton {
    TimedAutomaton ta;
    long long scale = 1;  // timestamps of ta are the original ones times scale
};

// Off^j waits for switch-on time tau_j, On^i observes the next letter. Constants are scaled
// by the common denominator of tau so that every bound stays integral.
inline ScaledAutomaton unfold_tau(const TimedAutomaton& ta, const std::vector<Rational>& tau) {
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] < 0 || (i && tau[i] < tau[i - 1]))
            throw std::invalid_argument("switch-on times must be nonnegative and nondecreasing");
    if (static_cast<int>(tau.size()) > kMaxObservations)
        throw ResourceExceeded("N = " + std::to_string(tau.size()) + " exceeds the observation cap " +
                               std::to_string(kMaxObservations));
    const long long s = to_ll(common_denominator(tau));
    const int N = static_cast<int>(tau.size());
    std::vector<long long> st;
    for (const auto& t : tau) st.push_back(to_ll(floor_of(t * Rational(Integer(std::to_string(s))))));
    TimedAutomaton src = scale_constants(ta, s);
    TimedAutomaton r = empty_shell(src, ta.name + "_tau");
    const int z = r.add_clock(r.fresh_clock_name("z"));
    const int n = static_cast<int>(src.num_locations());
    auto off = [&](int l, int j) { return j * n + l; };
    auto on = [&](int l, int i) { return (N + 1) * n + i * n + l; };
    for (int j = 0; j <= N; ++j)
        for (int l = 0; l < n; ++l) {
            Guard inv = src.invariant[l];
            if (j < N) inv.push_back({z, Cmp::Le, st[j]});
            r.add_location(src.locations[l] + "@off" + std::to_string(j), std::move(inv), src.is_private(l),
                           src.is_final(l));
        }
    for (int i = 0; i < N; ++i)
        for (int l = 0; l < n; ++l)
            r.add_location(src.locations[l] + "@on" + std::to_string(i), src.invariant[l], src.is_private(l),
                           src.is_final(l));
    for (int j = 0; j <= N; ++j) {
        for (const auto& e : src.edges) {
            Guard g = e.guard;
            if (e.action != kEps && j < N) g.push_back({z, Cmp::Lt, st[j]});
            r.add_edge(off(e.source, j), off(e.target, j), kEps, std::move(g), e.resets);
        }
        if (j < N)
            for (int l = 0; l < n; ++l)
                if (!src.is_final(l)) r.add_edge(off(l, j), on(l, j), kEps, {{z, Cmp::Eq, st[j]}});
    }
    for (int i = 0; i < N; ++i) {
        for (const auto& e : src.edges) {
            if (e.action == kEps) {
                r.add_edge(on(e.source, i), on(e.target, i), kEps, e.guard, e.resets);
                continue;
            }
            Guard g = e.guard;
            if (i + 1 < N) g.push_back({z, Cmp::Le, st[i + 1]});
            r.add_edge(on(e.source, i), off(e.target, i + 1), e.action, std::move(g), e.resets);
        }
        if (i + 1 < N)
            for (int l = 0; l < n; ++l)
                if (!src.is_final(l)) r.add_edge(on(l, i), on(l, i + 1), kEps, {{z, Cmp::Gt, st[i + 1]}});
    }
    r.init = off(src.init, 0);
    return {std::move(r), s};
}

inline std::string switch_letter(int i) { return "o_" + std::to_string(i); }

// The attacker's switch-on choices become observable letters o_i.
inline TimedAutomaton unfold_free(const TimedAutomaton& ta, int N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    for (const auto& a : ta.actions)
        if (a.rfind("o_", 0) == 0) throw ModelError("action names o_i are reserved for switch-on letters");
    TimedAutomaton r = empty_shell(ta, ta.name + "_free" + std::to_string(N));
    std::vector<int> o;
    for (int i = 0; i < N; ++i) o.push_back(r.add_action(switch_letter(i)));
    const int n = static_cast<int>(ta.num_locations());
    auto off = [&](int l, int j) { return j * n + l; };
    auto on = [&](int l, int i) { return (N + 1) * n + i * n + l; };
    for (int j = 0; j <= N; ++j)
        for (int l = 0; l < n; ++l)
            r.add_location(ta.locations[l] + "@off" + std::to_string(j), ta.invariant[l], ta.is_private(l),
                           ta.is_final(l));
    for (int i = 0; i < N; ++i)
        for (int l = 0; l < n; ++l)
            r.add_location(ta.locations[l] + "@on" + std::to_string(i), ta.invariant[l], ta.is_private(l),
                           ta.is_final(l));
    for (int j = 0; j <= N; ++j) {
        for (const auto& e : ta.edges) r.add_edge(off(e.source, j), off(e.target, j), kEps, e.guard, e.resets);
        if (j < N)
            for (int l = 0; l < n; ++l)
                if (!ta.is_final(l)) r.add_edge(off(l, j), on(l, j), o[j]);
    }
    for (int i = 0; i < N; ++i) {
        for (const auto& e : ta.edges) {
            if (e.action == kEps)
                r.add_edge(on(e.source, i), on(e.target, i), kEps, e.guard, e.resets);
            else
                r.add_edge(on(e.source, i), off(e.target, i + 1), e.action, e.guard, e.resets);
        }
        if (i + 1 < N)
            for (int l = 0; l < n; ++l)
                if (!ta.is_final(l)) r.add_edge(on(l, i), on(l, i + 1), o[i + 1]);
    }
    r.init = off(ta.init, 0);
    return r;
}

// Dense-time automaton whose transitions happen exactly at integer dates.
inline TimedAutomaton discretize(const TimedAutomaton& ta) {
    TimedAutomaton r = ta;
    r.time = TimeDomain::Dense;
    r.name = ta.name + "_int";
    const int u = r.add_clock(r.fresh_clock_name("u"));
    for (auto& e : r.edges) e.guard.push_back({u, Cmp::Eq, 0});
    for (auto& inv : r.invariant) inv.push_back({u, Cmp::Le, 1});
    for (int l = 0; l < static_cast<int>(r.num_locations()); ++l)
        if (!r.is_final(l)) r.add_edge(l, l, kEps, {{u, Cmp::Eq, 1}}, {u});
    return r;
}

// (N+1)^3 |L| (2N+3) (2M+2)^|X| 2^|X| (N+|X|+1)^|X|
inline Integer visited_region_bound(const TimedAutomaton& ta, int N) {
    const unsigned long n = static_cast<unsigned long>(N);
    const unsigned long x = static_cast<unsigned long>(ta.num_clocks());
    const unsigned long m = static_cast<unsigned long>(max_constant(ta));
    Integer b = Integer(n + 1) * Integer(n + 1) * Integer(n + 1);
    b *= static_cast<unsigned long>(ta.num_locations());
    b *= 2 * n + 3;
    for (unsigned long i = 0; i < x; ++i) {
        b *= 2 * m + 2;
        b *= 2;
        b *= n + x + 1;
    }
    return b;
}

}  // namespace topaq

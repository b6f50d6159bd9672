#pragma once

#include "semantics.hpp"

namespace topaq {

// Copies src into dst. Actions are shared by name; clocks are shared by name unless
// share_clocks is false, in which case they get fresh names. Returns the location map.
inline std::vector<int> append_automaton(TimedAutomaton& dst, const TimedAutomaton& src, const std::string& prefix,
                                         bool keep_priv, bool keep_final, bool share_clocks = true) {
    std::vector<int> cmap(src.num_clocks());
    for (std::size_t x = 0; x < src.num_clocks(); ++x) {
        int i = share_clocks ? dst.clock_index(src.clocks[x]) : -1;
        cmap[x] = i >= 0 ? i : dst.add_clock(dst.fresh_clock_name(src.clocks[x]));
    }
    std::vector<int> amap(src.actions.size());
    for (std::size_t a = 0; a < src.actions.size(); ++a) amap[a] = dst.add_action(src.actions[a]);
    auto map_guard = [&](Guard g) {
        for (auto& c : g) c.clock = cmap[c.clock];
        return g;
    };
    std::vector<int> lmap(src.num_locations());
    for (std::size_t l = 0; l < src.num_locations(); ++l)
        lmap[l] = dst.add_location(dst.fresh_location_name(prefix + src.locations[l]), map_guard(src.invariant[l]),
                                   keep_priv && src.is_private(static_cast<int>(l)),
                                   keep_final && src.is_final(static_cast<int>(l)));
    for (const auto& e : src.edges) {
        std::vector<int> r;
        for (int x : e.resets) r.push_back(cmap[x]);
        dst.add_edge(lmap[e.source], lmap[e.target], e.action == kEps ? kEps : amap[e.action], map_guard(e.guard),
                     std::move(r));
    }
    return lmap;
}

inline TimedAutomaton empty_shell(const TimedAutomaton& ta, const std::string& name) {
    TimedAutomaton r;
    r.name = name;
    r.time = ta.time;
    r.actions = ta.actions;
    r.clocks = ta.clocks;
    return r;
}

// Public runs: private locations removed.
inline TimedAutomaton build_pub(const TimedAutomaton& ta, std::vector<Diagnostic>* warnings = nullptr) {
    TimedAutomaton r = empty_shell(ta, ta.name + "_pub");
    std::vector<int> lmap(ta.num_locations(), -1);
    for (int l = 0; l < static_cast<int>(ta.num_locations()); ++l)
        if (!ta.is_private(l)) lmap[l] = r.add_location(ta.locations[l], ta.invariant[l], false, ta.is_final(l));
    for (const auto& e : ta.edges)
        if (lmap[e.source] >= 0 && lmap[e.target] >= 0)
            r.add_edge(lmap[e.source], lmap[e.target], e.action, e.guard, e.resets);
    if (lmap[ta.init] >= 0) {
        r.init = lmap[ta.init];
    } else {
        r.init = r.add_location(r.fresh_location_name("sink"));
        if (warnings)
            warnings->push_back({"initial location '" + ta.locations[ta.init] +
                                     "' is private: the public automaton has an empty language",
                                 true});
    }
    return r;
}

namespace detail {

// Two copies: Sbar (no private location visited yet) and S (visited).
inline TimedAutomaton build_priv_copies(const TimedAutomaton& ta, bool sbar_final, const std::string& name) {
    TimedAutomaton r = empty_shell(ta, name);
    const int n = static_cast<int>(ta.num_locations());
    for (int l = 0; l < n; ++l)
        r.add_location(ta.locations[l] + ".Sbar", ta.invariant[l], false, sbar_final && ta.is_final(l));
    for (int l = 0; l < n; ++l)
        r.add_location(ta.locations[l] + ".S", ta.invariant[l], ta.is_private(l), ta.is_final(l));
    for (const auto& e : ta.edges) {
        r.add_edge(n + e.source, n + e.target, e.action, e.guard, e.resets);
        // Runs end at their first final location: nothing leaves an Sbar-final copy.
        if (ta.is_final(e.source)) continue;
        r.add_edge(e.source, ta.is_private(e.target) ? n + e.target : e.target, e.action, e.guard, e.resets);
    }
    r.init = ta.is_private(ta.init) ? n + ta.init : ta.init;
    return r;
}

}  // namespace detail

// Private runs: accepts exactly the traces of runs visiting a private location.
inline TimedAutomaton build_priv(const TimedAutomaton& ta) {
    return detail::build_priv_copies(ta, false, ta.name + "_priv");
}

// Same language as ta; a run is private iff it ends in the S copy.
inline TimedAutomaton build_memo(const TimedAutomaton& ta) {
    return detail::build_priv_copies(ta, true, ta.name + "_memo");
}

// Final invariants become guards of the incoming edges (constraints on reset clocks are
// evaluated at 0), edges leaving finals are dropped. The language is unchanged and a
// final component may then be frozen in a product without constraining time.
inline TimedAutomaton release_final_invariants(const TimedAutomaton& ta) {
    TimedAutomaton r = ta;
    r.edges.clear();
    Valuation zero(ta.num_clocks(), Rational(0));
    if (ta.is_final(ta.init) && !satisfies(ta.invariant[ta.init], zero)) {
        std::fill(r.fin.begin(), r.fin.end(), 0);
        return r;
    }
    for (const auto& e : ta.edges) {
        if (ta.is_final(e.source)) continue;
        Edge ne = e;
        bool ok = true;
        if (ta.is_final(e.target)) {
            for (const auto& c : ta.invariant[e.target]) {
                bool reset = std::find(e.resets.begin(), e.resets.end(), c.clock) != e.resets.end();
                if (!reset)
                    ne.guard.push_back(c);
                else if (!satisfies(c, Rational(0)))
                    ok = false;
            }
        }
        if (ok) r.edges.push_back(std::move(ne));
    }
    for (int l = 0; l < static_cast<int>(ta.num_locations()); ++l)
        if (ta.is_final(l)) r.invariant[l].clear();
    return r;
}

// Intersection of languages: letters synchronize by name, ε moves interleave.
// The clocks of ta2 are renamed apart.
inline TimedAutomaton product(const TimedAutomaton& ta1, const TimedAutomaton& ta2) {
    if (ta1.time != ta2.time) throw ModelError("product of automata with different time domains");
    const TimedAutomaton a = release_final_invariants(ta1);
    const TimedAutomaton b = release_final_invariants(ta2);
    TimedAutomaton r;
    r.name = a.name + "_x_" + b.name;
    r.time = a.time;
    r.clocks = a.clocks;
    std::vector<int> cmap(b.num_clocks());
    for (std::size_t x = 0; x < b.num_clocks(); ++x) cmap[x] = r.add_clock(r.fresh_clock_name(b.clocks[x]));
    std::vector<int> amap_a(a.actions.size()), amap_b(b.actions.size());
    for (std::size_t i = 0; i < a.actions.size(); ++i) amap_a[i] = r.add_action(a.actions[i]);
    for (std::size_t i = 0; i < b.actions.size(); ++i) amap_b[i] = r.add_action(b.actions[i]);
    auto gb = [&](Guard g) {
        for (auto& c : g) c.clock = cmap[c.clock];
        return g;
    };
    auto rb = [&](std::vector<int> v) {
        for (auto& x : v) x = cmap[x];
        return v;
    };
    auto cat = [](Guard g, const Guard& h) {
        g.insert(g.end(), h.begin(), h.end());
        return g;
    };
    const int n1 = static_cast<int>(a.num_locations()), n2 = static_cast<int>(b.num_locations());
    auto id = [&](int l1, int l2) { return l1 * n2 + l2; };
    for (int l1 = 0; l1 < n1; ++l1)
        for (int l2 = 0; l2 < n2; ++l2)
            r.add_location(a.locations[l1] + "|" + b.locations[l2], cat(a.invariant[l1], gb(b.invariant[l2])),
                           a.is_private(l1) || b.is_private(l2), a.is_final(l1) && b.is_final(l2));
    r.init = id(a.init, b.init);
    for (const auto& e : a.edges)
        if (e.action == kEps)
            for (int l2 = 0; l2 < n2; ++l2) r.add_edge(id(e.source, l2), id(e.target, l2), kEps, e.guard, e.resets);
    for (const auto& e : b.edges)
        if (e.action == kEps)
            for (int l1 = 0; l1 < n1; ++l1)
                r.add_edge(id(l1, e.source), id(l1, e.target), kEps, gb(e.guard), rb(e.resets));
    for (const auto& e1 : a.edges) {
        if (e1.action == kEps) continue;
        for (const auto& e2 : b.edges) {
            if (e2.action == kEps || a.actions[e1.action] != b.actions[e2.action]) continue;
            std::vector<int> res = e1.resets;
            for (int x : rb(e2.resets)) res.push_back(x);
            r.add_edge(id(e1.source, e2.source), id(e1.target, e2.target), amap_a[e1.action],
                       cat(e1.guard, gb(e2.guard)), std::move(res));
        }
    }
    return r;
}

namespace detail {

inline int urgency_clock(TimedAutomaton& r) {
    if (r.num_clocks() == 0) r.add_clock(r.fresh_clock_name("x"));
    return 0;
}

}  // namespace detail

// Tr_pub(B) = Tr_priv(ta) and Tr_priv(B) = Tr_pub(ta).
inline TimedAutomaton swap_gadget(const TimedAutomaton& ta) {
    TimedAutomaton priv = build_priv(ta), pub = build_pub(ta);
    TimedAutomaton r = empty_shell(ta, ta.name + "_swap");
    int x = detail::urgency_clock(r);
    int l0 = r.add_location("g.init", {{x, Cmp::Eq, 0}});
    int lp = r.add_location("g.priv", {{x, Cmp::Eq, 0}}, true);
    auto mp = append_automaton(r, priv, "", false, true);
    auto mu = append_automaton(r, pub, "", false, true);
    r.init = l0;
    r.add_edge(l0, mp[priv.init], kEps);
    r.add_edge(l0, lp, kEps);
    r.add_edge(lp, mu[pub.init], kEps);
    return r;
}

// Tr_pub(B) = Tr_pub(ta) and Tr_priv(B) = Tr_priv(ta) ∪ Tr_pub(ta).
inline TimedAutomaton embed_gadget(const TimedAutomaton& ta) {
    TimedAutomaton priv = build_priv(ta), pub = build_pub(ta);
    TimedAutomaton r = empty_shell(ta, ta.name + "_embed");
    int x = detail::urgency_clock(r);
    int l0 = r.add_location("g.init", {{x, Cmp::Eq, 0}});
    int lp = r.add_location("g.priv", {{x, Cmp::Eq, 0}}, true);
    auto mp = append_automaton(r, priv, "", false, true);
    auto mu = append_automaton(r, pub, "", false, true);
    r.init = l0;
    r.add_edge(l0, mu[pub.init], kEps);
    r.add_edge(l0, lp, kEps);
    r.add_edge(lp, mp[priv.init], kEps);
    r.add_edge(lp, mu[pub.init], kEps);
    return r;
}

// Tr_priv(O) = L(a) and Tr_pub(O) = L(b): O is weakly opaque iff L(a) ⊆ L(b).
inline TimedAutomaton inclusion_gadget(const TimedAutomaton& a, const TimedAutomaton& b) {
    if (a.time != b.time) throw ModelError("inclusion gadget over automata with different time domains");
    TimedAutomaton r;
    r.name = a.name + "_in_" + b.name;
    r.time = a.time;
    int li = r.add_location("g.init");
    int lp = r.add_location("g.priv", {}, true);
    auto mA = append_automaton(r, a, "A.", false, true);
    auto mB = append_automaton(r, b, "B.", false, true, false);
    int x = detail::urgency_clock(r);
    r.init = li;
    r.add_edge(li, lp, kEps, {{x, Cmp::Eq, 0}});
    r.add_edge(li, mB[b.init], kEps, {{x, Cmp::Eq, 0}});
    r.add_edge(lp, mA[a.init], kEps, {{x, Cmp::Eq, 0}});
    return r;
}

}  // namespace topaq

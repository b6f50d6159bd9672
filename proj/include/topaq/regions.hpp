#pragma once

#include "semantics.hpp"

#include <compare>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>

namespace topaq {

// Per clock: integral part (M+1 when above M) and block index
// (-1 above M, 0 zero fraction, 1..k increasing nonzero fractions).
struct ClockRegion {
    std::vector<int> ip;
    std::vector<int> bl;
    auto operator<=>(const ClockRegion&) const = default;
};

struct Region {
    int loc = 0;
    ClockRegion cr;
    bool operator==(const Region&) const = default;
};

struct RegionHash {
    std::size_t operator()(const Region& r) const {
        std::size_t h = std::hash<int>()(r.loc);
        auto mix = [&](int v) { h ^= std::hash<int>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        for (int v : r.cr.ip) mix(v);
        for (int v : r.cr.bl) mix(v);
        return h;
    }
};

inline bool is_above(const ClockRegion& cr, int x) { return cr.bl[x] < 0; }

inline void compact_blocks(ClockRegion& cr) {
    std::vector<int> used;
    for (int b : cr.bl)
        if (b > 0) used.push_back(b);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (int& b : cr.bl)
        if (b > 0) b = static_cast<int>(std::lower_bound(used.begin(), used.end(), b) - used.begin()) + 1;
}

inline ClockRegion clock_region_of(const Valuation& v, const std::vector<long long>& M) {
    ClockRegion cr;
    const std::size_t n = v.size();
    cr.ip.assign(n, 0);
    cr.bl.assign(n, 0);
    std::vector<Rational> fracs;
    for (std::size_t x = 0; x < n; ++x) {
        Rational m(Integer(std::to_string(M[x])));
        if (v[x] > m) {
            cr.ip[x] = static_cast<int>(M[x] + 1);
            cr.bl[x] = -1;
            continue;
        }
        cr.ip[x] = static_cast<int>(to_ll(floor_of(v[x])));
        Rational f = frac_of(v[x]);
        if (f != 0) fracs.push_back(f);
    }
    std::sort(fracs.begin(), fracs.end());
    fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
    for (std::size_t x = 0; x < n; ++x) {
        if (cr.bl[x] < 0) continue;
        Rational f = frac_of(v[x]);
        cr.bl[x] = f == 0 ? 0 : static_cast<int>(std::lower_bound(fracs.begin(), fracs.end(), f) - fracs.begin()) + 1;
    }
    return cr;
}

// Valid for bounds <= M(x); all valuations of a region agree on such constraints.
inline bool region_sat(const ClockConstraint& c, const ClockRegion& cr) {
    const long long b = c.bound;
    if (cr.bl[c.clock] < 0) return c.cmp == Cmp::Gt || c.cmp == Cmp::Ge;
    const long long ip = cr.ip[c.clock];
    if (cr.bl[c.clock] == 0) {
        switch (c.cmp) {
            case Cmp::Lt: return ip < b;
            case Cmp::Le: return ip <= b;
            case Cmp::Eq: return ip == b;
            case Cmp::Ge: return ip >= b;
            case Cmp::Gt: return ip > b;
        }
    }
    switch (c.cmp) {
        case Cmp::Lt:
        case Cmp::Le: return ip + 1 <= b;
        case Cmp::Eq: return false;
        case Cmp::Ge:
        case Cmp::Gt: return ip >= b;
    }
    return false;
}

inline bool region_sat(const Guard& g, const ClockRegion& cr) {
    for (const auto& c : g)
        if (!region_sat(c, cr)) return false;
    return true;
}

inline ClockRegion reset_region(ClockRegion cr, const std::vector<int>& resets) {
    for (int r : resets) {
        cr.ip[r] = 0;
        cr.bl[r] = 0;
    }
    compact_blocks(cr);
    return cr;
}

// Adjacent time successor; nullopt when every clock is above its constant (unbounded region).
inline std::optional<ClockRegion> time_successor(const ClockRegion& cr, const std::vector<long long>& M,
                                                 bool discrete) {
    const std::size_t n = cr.ip.size();
    bool any_bounded = false;
    for (std::size_t x = 0; x < n; ++x) any_bounded |= cr.bl[x] >= 0;
    if (!any_bounded) return std::nullopt;
    ClockRegion r = cr;
    if (discrete) {
        for (std::size_t x = 0; x < n; ++x) {
            if (r.bl[x] < 0) continue;
            if (r.ip[x] + 1 > M[x]) {
                r.ip[x] = static_cast<int>(M[x] + 1);
                r.bl[x] = -1;
            } else {
                r.ip[x] += 1;
                r.bl[x] = 0;
            }
        }
        return r;
    }
    bool zero_block = false;
    int top = 0;
    for (std::size_t x = 0; x < n; ++x) {
        zero_block |= r.bl[x] == 0;
        top = std::max(top, r.bl[x]);
    }
    if (zero_block) {
        for (std::size_t x = 0; x < n; ++x) {
            if (r.bl[x] > 0) {
                r.bl[x] += 1;
            } else if (r.bl[x] == 0) {
                if (r.ip[x] >= M[x]) {
                    r.ip[x] = static_cast<int>(M[x] + 1);
                    r.bl[x] = -1;
                } else {
                    r.bl[x] = 1;
                }
            }
        }
    } else {
        for (std::size_t x = 0; x < n; ++x)
            if (r.bl[x] == top) {
                r.ip[x] += 1;
                r.bl[x] = 0;
            }
    }
    compact_blocks(r);
    return r;
}

// Integral parts agree (or both above M), zero fractions coincide, fraction order coincides
// among clocks not above M.
inline bool valuation_equiv(const Valuation& a, const Valuation& b, const std::vector<long long>& M) {
    const std::size_t n = a.size();
    if (b.size() != n || M.size() != n) return false;
    auto above = [&](const Rational& v, std::size_t x) { return v > Rational(Integer(std::to_string(M[x]))); };
    for (std::size_t x = 0; x < n; ++x) {
        bool aa = above(a[x], x), ab = above(b[x], x);
        if (aa != ab) return false;
        if (aa) continue;
        if (floor_of(a[x]) != floor_of(b[x])) return false;
        if ((frac_of(a[x]) == 0) != (frac_of(b[x]) == 0)) return false;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (above(a[x], x)) continue;
        for (std::size_t y = 0; y < n; ++y) {
            if (above(a[y], y)) continue;
            Rational fa = frac_of(a[x]), ga = frac_of(a[y]), fb = frac_of(b[x]), gb = frac_of(b[y]);
            if ((fa <= ga) != (fb <= gb)) return false;
        }
    }
    return true;
}

inline Region region_of(const Configuration& cfg, const TimedAutomaton& ta) {
    return Region{cfg.location, clock_region_of(cfg.valuation, max_constants(ta))};
}

inline std::string region_label(const std::vector<std::string>& clocks, const ClockRegion& cr) {
    std::string s;
    auto add = [&](const std::string& p) {
        if (!s.empty()) s += ", ";
        s += p;
    };
    for (std::size_t x = 0; x < clocks.size(); ++x) {
        const auto& n = clocks[x];
        if (cr.bl[x] < 0)
            add(n + ">" + std::to_string(cr.ip[x] - 1));
        else if (cr.bl[x] == 0)
            add(n + "=" + std::to_string(cr.ip[x]));
        else
            add(std::to_string(cr.ip[x]) + "<" + n + "<" + std::to_string(cr.ip[x] + 1));
    }
    int top = 0;
    for (int b : cr.bl) top = std::max(top, b);
    if (top >= 1) {
        std::string order;
        for (int b = 1; b <= top; ++b) {
            std::string grp;
            for (std::size_t x = 0; x < clocks.size(); ++x)
                if (cr.bl[x] == b) grp += (grp.empty() ? "" : "=") + std::string("{") + clocks[x] + "}";
            order += (order.empty() ? "" : "<") + grp;
        }
        bool informative = false;
        int count = 0;
        for (int b : cr.bl) count += b > 0;
        informative = count > 1;
        if (informative) add(order);
    }
    return s;
}

inline std::size_t region_cap() {
    if (const char* e = std::getenv("TOPAQ_REGION_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 1000000;
}

// |L| * |X|! * 2^|X| * prod (2 M(x) + 2)
inline Integer region_count_bound(const TimedAutomaton& ta) {
    Integer b = static_cast<unsigned long>(ta.num_locations());
    const auto M = max_constants(ta);
    for (std::size_t i = 1; i <= ta.num_clocks(); ++i) b *= static_cast<unsigned long>(i);
    for (std::size_t i = 0; i < ta.num_clocks(); ++i) b *= 2;
    for (auto m : M) b *= Integer(std::to_string(2 * m + 2));
    return b;
}

struct RegionAutomaton {
    struct Move {
        int letter = kEps;  // action index of the source TA
        int target = 0;
        int edge = -1;  // -1 for a delay move
    };
    std::vector<std::string> alphabet;
    std::vector<std::string> clocks;
    std::vector<std::string> locations;
    std::vector<long long> M;
    bool discrete = false;
    std::vector<Region> states;
    std::vector<char> final;
    std::vector<std::vector<Move>> out;
    int initial = -1;

    std::size_t size() const { return states.size(); }
    std::string label(int s) const {
        return locations[states[s].loc] + (clocks.empty() ? "" : " | " + region_label(clocks, states[s].cr));
    }
};

inline RegionAutomaton build_region_automaton(const TimedAutomaton& ta, std::size_t cap = region_cap()) {
    RegionAutomaton ra;
    ra.alphabet = ta.actions;
    ra.clocks = ta.clocks;
    ra.locations = ta.locations;
    ra.M = max_constants(ta);
    ra.discrete = ta.discrete();
    std::vector<std::vector<int>> by_source(ta.num_locations());
    for (std::size_t i = 0; i < ta.edges.size(); ++i) by_source[ta.edges[i].source].push_back(static_cast<int>(i));
    std::unordered_map<Region, int, RegionHash> index;
    std::deque<int> queue;
    auto intern = [&](Region r) {
        auto it = index.find(r);
        if (it != index.end()) return it->second;
        if (ra.states.size() >= cap)
            throw ResourceExceeded("region cap of " + std::to_string(cap) + " states exceeded (set TOPAQ_REGION_CAP)");
        int id = static_cast<int>(ra.states.size());
        ra.final.push_back(ta.is_final(r.loc));
        ra.states.push_back(std::move(r));
        ra.out.emplace_back();
        index.emplace(ra.states.back(), id);
        queue.push_back(id);
        return id;
    };
    ClockRegion zero = clock_region_of(Valuation(ta.num_clocks(), Rational(0)), ra.M);
    if (!region_sat(ta.invariant[ta.init], zero)) return ra;
    ra.initial = intern(Region{ta.init, zero});
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        if (ra.final[s]) continue;
        const Region r = ra.states[s];
        auto succ = time_successor(r.cr, ra.M, ra.discrete);
        if (!succ) {
            ra.out[s].push_back({kEps, s, -1});
        } else if (region_sat(ta.invariant[r.loc], *succ)) {
            int t = intern(Region{r.loc, *succ});
            ra.out[s].push_back({kEps, t, -1});
        }
        for (int ei : by_source[r.loc]) {
            const Edge& e = ta.edges[ei];
            if (!region_sat(e.guard, r.cr)) continue;
            ClockRegion nr = reset_region(r.cr, e.resets);
            if (!region_sat(ta.invariant[e.target], nr)) continue;
            int t = intern(Region{e.target, std::move(nr)});
            ra.out[s].push_back({e.action, t, ei});
        }
    }
    if (Integer(static_cast<unsigned long>(ra.size())) > region_count_bound(ta))
        throw std::logic_error("region count exceeds the theoretical bound");
    return ra;
}

// Sequence of (state, move index) pairs.
using RegionPath = std::vector<std::pair<int, int>>;

// Shortest path from the initial region to a final region (BFS, move order).
inline std::optional<RegionPath> shortest_accepting_path(const RegionAutomaton& ra) {
    if (ra.initial < 0) return std::nullopt;
    std::vector<std::pair<int, int>> parent(ra.size(), {-2, -1});
    std::deque<int> q{ra.initial};
    parent[ra.initial] = {-1, -1};
    while (!q.empty()) {
        int s = q.front();
        q.pop_front();
        if (ra.final[s]) {
            RegionPath p;
            for (int c = s; parent[c].first >= 0; c = parent[c].first) p.push_back({parent[c].first, parent[c].second});
            std::reverse(p.begin(), p.end());
            return p;
        }
        for (std::size_t i = 0; i < ra.out[s].size(); ++i) {
            int t = ra.out[s][i].target;
            if (parent[t].first != -2) continue;
            parent[t] = {s, static_cast<int>(i)};
            q.push_back(t);
        }
    }
    return std::nullopt;
}

// Delay that moves a valuation of a bounded region into its time successor.
inline Rational successor_delay(const Valuation& v, const std::vector<long long>& M, bool discrete) {
    if (discrete) return 1;
    bool zero = false;
    Rational maxfrac = 0;
    bool any = false;
    for (std::size_t x = 0; x < v.size(); ++x) {
        if (v[x] > Rational(Integer(std::to_string(M[x])))) continue;
        any = true;
        Rational f = frac_of(v[x]);
        if (f == 0) zero = true;
        maxfrac = std::max(maxfrac, f);
    }
    if (!any) return 1;
    if (zero) return maxfrac == 0 ? Rational(1, 2) : Rational((1 - maxfrac) / 2);
    return 1 - maxfrac;
}

// A concrete run following the region path; returns its trace.
inline TimedWord concretize(const TimedAutomaton& ta, const RegionAutomaton& ra, const RegionPath& path) {
    Valuation v(ta.num_clocks(), Rational(0));
    Rational now = 0;
    TimedWord w;
    for (auto [s, mi] : path) {
        const auto& m = ra.out[s][mi];
        if (m.edge < 0) {
            Rational d = m.target == s ? Rational(1) : successor_delay(v, ra.M, ra.discrete);
            v = delayed(v, d);
            now += d;
        } else {
            const Edge& e = ta.edges[m.edge];
            if (e.action != kEps) w.push_back({ta.actions[e.action], now});
            v = with_resets(std::move(v), e.resets);
        }
        if (!(clock_region_of(v, ra.M) == ra.states[m.target].cr))
            throw std::logic_error("concrete reconstruction left the region path");
    }
    return w;
}

struct Nfa {
    std::vector<std::string> letters;
    std::vector<int> initial;
    std::vector<char> accepting;
    std::vector<std::vector<std::pair<int, int>>> out;  // (letter or kEps, target)

    int size() const { return static_cast<int>(accepting.size()); }
    int add_state(bool acc = false) {
        accepting.push_back(acc);
        out.emplace_back();
        return size() - 1;
    }
    int letter_index(const std::string& n) const { return TimedAutomaton::index_in(letters, n); }
    int add_letter(const std::string& n) {
        if (int i = letter_index(n); i >= 0) return i;
        letters.push_back(n);
        return static_cast<int>(letters.size()) - 1;
    }
    void add(int s, int letter, int t) { out[s].push_back({letter, t}); }

    std::vector<int> closure(std::vector<int> set) const {
        std::vector<char> in(size(), 0);
        for (int s : set) in[s] = 1;
        for (std::size_t i = 0; i < set.size(); ++i)
            for (auto [l, t] : out[set[i]])
                if (l == kEps && !in[t]) {
                    in[t] = 1;
                    set.push_back(t);
                }
        std::sort(set.begin(), set.end());
        return set;
    }
    std::vector<int> post(const std::vector<int>& set, int letter) const {
        std::vector<int> r;
        std::vector<char> in(size(), 0);
        for (int s : set)
            for (auto [l, t] : out[s])
                if (l == letter && !in[t]) {
                    in[t] = 1;
                    r.push_back(t);
                }
        return closure(std::move(r));
    }
    bool any_accepting(const std::vector<int>& set) const {
        for (int s : set)
            if (accepting[s]) return true;
        return false;
    }
    bool accepts(const std::vector<std::string>& word) const {
        std::vector<int> cur = closure(initial);
        for (const auto& a : word) {
            int l = letter_index(a);
            if (l < 0) return false;
            cur = post(cur, l);
            if (cur.empty()) return false;
        }
        return any_accepting(cur);
    }
};

inline Nfa to_nfa(const RegionAutomaton& ra) {
    Nfa n;
    n.letters = ra.alphabet;
    for (std::size_t s = 0; s < ra.size(); ++s) n.add_state(ra.final[s]);
    for (std::size_t s = 0; s < ra.size(); ++s)
        for (const auto& m : ra.out[s]) n.add(static_cast<int>(s), m.letter, m.target);
    if (ra.initial >= 0) n.initial.push_back(ra.initial);
    return n;
}

// Number of distinct states occupied while reading a word (epsilon closures included).
inline std::size_t visited_states(const Nfa& n, const std::vector<std::string>& word) {
    std::vector<char> seen(n.size(), 0);
    std::size_t count = 0;
    auto mark = [&](const std::vector<int>& set) {
        for (int s : set)
            if (!seen[s]) {
                seen[s] = 1;
                ++count;
            }
    };
    std::vector<int> cur = n.closure(n.initial);
    mark(cur);
    for (const auto& a : word) {
        int l = n.letter_index(a);
        if (l < 0) break;
        cur = n.post(cur, l);
        mark(cur);
    }
    return count;
}

inline bool is_gadget_letter(const std::string& a) { return a.size() >= 2 && a[0] == 'f' && a[1] == '{'; }

// Ticks between the last observable letter and acceptance carry no information;
// this turns them into silent moves so words take the canonical shape t^k1 a1 ... an f...
inline Nfa strip_trailing_ticks(const Nfa& n, const std::string& tick = "t") {
    Nfa r;
    r.letters = n.letters;
    const int tk = n.letter_index(tick);
    const int sz = n.size();
    for (int mode = 0; mode < 3; ++mode)
        for (int s = 0; s < sz; ++s) r.add_state(n.accepting[s] && mode != 1);
    auto id = [&](int s, int mode) { return mode * sz + s; };
    for (int s : n.initial) r.initial.push_back(id(s, 0));
    for (int s = 0; s < sz; ++s) {
        for (auto [l, t] : n.out[s]) {
            if (l == kEps) {
                for (int m = 0; m < 3; ++m) r.add(id(s, m), kEps, id(t, m));
            } else if (l == tk) {
                r.add(id(s, 0), l, id(t, 1));
                r.add(id(s, 1), l, id(t, 1));
                r.add(id(s, 0), kEps, id(t, 2));
                r.add(id(s, 2), kEps, id(t, 2));
            } else if (is_gadget_letter(n.letters[l])) {
                r.add(id(s, 0), l, id(t, 2));
                r.add(id(s, 2), l, id(t, 2));
            } else {
                r.add(id(s, 0), l, id(t, 0));
                r.add(id(s, 1), l, id(t, 0));
            }
        }
    }
    return r;
}

struct InclusionResult {
    bool included = true;
    std::vector<std::string> counterexample;
};

// Untimed inclusion L(a) ⊆ L(b), letters matched by name. Breadth-first over pairs of
// determinized state sets, letters in name order: the counterexample is a shortest word,
// lexicographically least among the shortest.
inline InclusionResult regular_inclusion(const Nfa& a, const Nfa& b, std::size_t cap = region_cap()) {
    std::vector<std::string> names = a.letters;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::vector<int> la, lb;
    for (const auto& n : names) {
        la.push_back(a.letter_index(n));
        lb.push_back(b.letter_index(n));
    }
    using Key = std::pair<std::vector<int>, std::vector<int>>;
    std::map<Key, int> seen;
    std::vector<std::pair<int, int>> parent;
    std::vector<Key> nodes;
    std::deque<int> q;
    auto push = [&](Key k, int par, int letter) {
        if (seen.count(k)) return;
        if (nodes.size() >= cap)
            throw ResourceExceeded("inclusion check exceeded the cap of " + std::to_string(cap) + " product states");
        int id = static_cast<int>(nodes.size());
        seen.emplace(k, id);
        nodes.push_back(std::move(k));
        parent.push_back({par, letter});
        q.push_back(id);
    };
    push({a.closure(a.initial), b.closure(b.initial)}, -1, -1);
    while (!q.empty()) {
        int id = q.front();
        q.pop_front();
        const Key cur = nodes[id];
        if (cur.first.empty()) continue;
        if (a.any_accepting(cur.first) && !b.any_accepting(cur.second)) {
            InclusionResult r;
            r.included = false;
            for (int c = id; parent[c].first >= 0; c = parent[c].first) r.counterexample.push_back(names[parent[c].second]);
            std::reverse(r.counterexample.begin(), r.counterexample.end());
            return r;
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (la[i] < 0) continue;
            auto s1 = a.post(cur.first, la[i]);
            if (s1.empty()) continue;
            std::vector<int> s2 = lb[i] < 0 ? std::vector<int>{} : b.post(cur.second, lb[i]);
            push({std::move(s1), std::move(s2)}, id, static_cast<int>(i));
        }
    }
    return {};
}

inline TimedAutomaton augment_ticks(const TimedAutomaton& ta) {
    if (ta.action_index("t") >= 0) throw ModelError("action name 't' is reserved for ticks");
    TimedAutomaton r = ta;
    r.name = ta.name + "_ticks";
    int z = r.add_clock(r.fresh_clock_name("z"));
    int t = r.add_action("t");
    for (auto& e : r.edges) e.guard.push_back({z, Cmp::Eq, 0});
    for (auto& inv : r.invariant) inv.push_back({z, Cmp::Le, 1});
    for (int l = 0; l < static_cast<int>(r.num_locations()); ++l) r.add_edge(l, l, t, {{z, Cmp::Eq, 1}}, {z});
    return r;
}

// Reads t^k1 a1 t^k2 a2 ... as (a1,k1)(a2,k1+k2)...; gadget letters are ignored.
inline TimedWord decode_tick_word(const std::vector<std::string>& word, const std::string& tick = "t") {
    TimedWord w;
    long long now = 0;
    for (const auto& a : word) {
        if (a == tick)
            ++now;
        else if (!is_gadget_letter(a))
            w.push_back({a, Rational(Integer(std::to_string(now)))});
    }
    return w;
}

}  // namespace topaq

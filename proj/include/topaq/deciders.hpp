#pragma once

#include "oracle.hpp"

#include <cstdint>

namespace topaq {

enum class Mode { Weak, Full };
enum class Engine { Auto, Discrete, Oera, Oracle };

inline const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Auto: return "auto";
        case Engine::Discrete: return "discrete";
        case Engine::Oera: return "oera";
        case Engine::Oracle: return "oracle";
    }
    return "?";
}

struct OpacityVerdict {
    Status status = Status::Inconclusive;
    std::optional<TimedWord> witness;
    Side side = Side::None;
    std::string engine;
    std::string note;

    bool holds() const { return status == Status::Holds; }
    bool violated() const { return status == Status::Violated; }
};

// Each letter a resets exactly its own clock x_a, silent transitions reset nothing.
inline bool is_oera(const TimedAutomaton& ta) {
    std::vector<int> clock_of(ta.actions.size(), -1);
    for (const auto& e : ta.edges) {
        if (e.action == kEps) {
            if (!e.resets.empty()) return false;
            continue;
        }
        std::vector<int> r = e.resets;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        if (r.size() != 1) return false;
        if (clock_of[e.action] >= 0 && clock_of[e.action] != r[0]) return false;
        clock_of[e.action] = r[0];
    }
    std::vector<int> owner(ta.num_clocks(), -1);
    for (std::size_t a = 0; a < clock_of.size(); ++a) {
        if (clock_of[a] < 0) continue;
        if (owner[clock_of[a]] >= 0) return false;
        owner[clock_of[a]] = static_cast<int>(a);
    }
    for (std::size_t x = 0; x < ta.num_clocks(); ++x) {
        if (owner[x] >= 0) continue;
        int a = ta.action_index(ta.clocks[x].rfind("x_", 0) == 0 ? ta.clocks[x].substr(2) : std::string());
        if (a < 0 || clock_of[a] >= 0) return false;
        clock_of[a] = static_cast<int>(x);
    }
    return true;
}

inline OpacityVerdict verdict_from(const OracleResult& r, const std::string& engine) {
    OpacityVerdict v;
    v.status = r.status;
    v.witness = r.witness;
    v.side = r.side;
    v.engine = engine;
    v.note = r.note;
    return v;
}

// ∃-opacity: some trace is both private and public.
inline OpacityVerdict check_exists(const TimedAutomaton& ta) {
    TimedAutomaton p = product(build_priv(ta), build_pub(ta));
    RegionAutomaton ra = build_region_automaton(p);
    OpacityVerdict v;
    v.engine = "regions";
    auto path = shortest_accepting_path(ra);
    if (!path) {
        v.status = Status::Violated;
        v.note = "no trace is both private and public";
        return v;
    }
    v.status = Status::Holds;
    v.side = Side::Both;
    v.witness = concretize(p, ra, *path);
    return v;
}

namespace detail {

inline Nfa region_nfa(const TimedAutomaton& ta) { return to_nfa(build_region_automaton(ta)); }

// Compares two NFAs in one or both directions; counterexamples are decoded by the caller.
inline std::optional<std::pair<Side, std::vector<std::string>>> compare_languages(const Nfa& priv, const Nfa& pub,
                                                                                Mode mode) {
    auto r = regular_inclusion(priv, pub);
    if (!r.included) return std::make_pair(Side::PrivateOnly, r.counterexample);
    if (mode == Mode::Full) {
        auto s = regular_inclusion(pub, priv);
        if (!s.included) return std::make_pair(Side::PublicOnly, s.counterexample);
    }
    return std::nullopt;
}

inline OpacityVerdict discrete_engine(const TimedAutomaton& ta, Mode mode) {
    if (!ta.discrete()) throw Refused("the discrete engine requires a discrete-time automaton");
    Nfa priv = strip_trailing_ticks(region_nfa(augment_ticks(build_priv(ta))));
    Nfa pub = strip_trailing_ticks(region_nfa(augment_ticks(build_pub(ta))));
    OpacityVerdict v;
    v.engine = "discrete";
    auto d = compare_languages(priv, pub, mode);
    if (!d) {
        v.status = Status::Holds;
        return v;
    }
    v.status = Status::Violated;
    v.side = d->first;
    v.witness = decode_tick_word(d->second);
    v.note = "tick word: " + format_ticked(d->second);
    return v;
}

inline OpacityVerdict untimed_engine(const TimedAutomaton& ta, Mode mode) {
    if (ta.num_clocks() != 0) throw Refused("the untimed engine requires an automaton without clocks");
    OpacityVerdict v;
    v.engine = "untimed";
    auto d = compare_languages(region_nfa(build_priv(ta)), region_nfa(build_pub(ta)), mode);
    if (!d) {
        v.status = Status::Holds;
        return v;
    }
    v.status = Status::Violated;
    v.side = d->first;
    TimedWord w;
    for (const auto& a : d->second) w.push_back({a, Rational(0)});
    v.witness = w;
    return v;
}

// Determinized exploration of A_memo: in an oERA every run on a given trace ends with the same
// clock values, so a macro-state pairs one clock region with a set of locations.
inline OpacityVerdict oera_engine(const TimedAutomaton& ta, Mode mode, std::size_t cap = region_cap()) {
    if (!is_oera(ta)) throw Refused("the oERA engine requires an observable event-recording automaton");
    const TimedAutomaton memo = build_memo(ta);
    const int n = static_cast<int>(ta.num_locations());
    const auto M = max_constants(memo);
    const bool discrete = memo.discrete();
    std::vector<std::vector<int>> by_source(memo.num_locations());
    for (std::size_t i = 0; i < memo.edges.size(); ++i) by_source[memo.edges[i].source].push_back(static_cast<int>(i));

    using Macro = std::pair<ClockRegion, std::vector<int>>;
    auto close = [&](const ClockRegion& cr, std::vector<int> locs) {
        std::vector<char> in(memo.num_locations(), 0);
        for (int l : locs) in[l] = 1;
        for (std::size_t i = 0; i < locs.size(); ++i) {
            if (memo.is_final(locs[i])) continue;
            for (int ei : by_source[locs[i]]) {
                const Edge& e = memo.edges[ei];
                if (e.action != kEps || in[e.target]) continue;
                if (!region_sat(e.guard, cr) || !region_sat(memo.invariant[e.target], cr)) continue;
                in[e.target] = 1;
                locs.push_back(e.target);
            }
        }
        std::sort(locs.begin(), locs.end());
        return Macro{cr, locs};
    };
    auto delay = [&](const Macro& m) -> std::optional<Macro> {
        auto succ = time_successor(m.first, M, discrete);
        if (!succ) return std::nullopt;
        std::vector<int> locs;
        for (int l : m.second)
            if (!memo.is_final(l) && region_sat(memo.invariant[l], *succ)) locs.push_back(l);
        if (locs.empty()) return std::nullopt;
        return close(*succ, locs);
    };
    auto letter = [&](const Macro& m, int a) -> std::optional<Macro> {
        std::vector<int> locs;
        std::optional<ClockRegion> cr;
        for (int l : m.second) {
            if (memo.is_final(l)) continue;
            for (int ei : by_source[l]) {
                const Edge& e = memo.edges[ei];
                if (e.action != a || !region_sat(e.guard, m.first)) continue;
                ClockRegion nr = reset_region(m.first, e.resets);
                if (!region_sat(memo.invariant[e.target], nr)) continue;
                cr = nr;
                locs.push_back(e.target);
            }
        }
        if (locs.empty()) return std::nullopt;
        std::sort(locs.begin(), locs.end());
        locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
        return close(*cr, locs);
    };

    struct Node {
        Macro m;
        int parent;
        int delays;  // time successors taken from the parent before the letter
        int action;
    };
    std::vector<Node> nodes;
    std::set<Macro> seen;
    std::deque<int> queue;
    ClockRegion zero = clock_region_of(Valuation(memo.num_clocks(), Rational(0)), M);
    OpacityVerdict v;
    v.engine = "oera";
    if (!region_sat(memo.invariant[memo.init], zero)) {
        v.status = Status::Holds;
        return v;
    }
    Macro init = close(zero, {memo.init});
    seen.insert(init);
    nodes.push_back({init, -1, 0, kEps});
    queue.push_back(0);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        bool fin_s = false, fin_sbar = false;
        std::optional<Macro> cur = nodes[id].m;
        std::set<Macro> chain;
        for (int k = 0; cur && chain.insert(*cur).second; ++k) {
            for (int l : cur->second)
                if (memo.is_final(l)) (l >= n ? fin_s : fin_sbar) = true;
            for (int a = 0; a < static_cast<int>(memo.actions.size()); ++a) {
                auto nx = letter(*cur, a);
                if (!nx || !seen.insert(*nx).second) continue;
                if (seen.size() > cap)
                    throw ResourceExceeded("oERA exploration exceeded the cap of " + std::to_string(cap) + " macro-states");
                nodes.push_back({*nx, id, k, a});
                queue.push_back(static_cast<int>(nodes.size()) - 1);
            }
            cur = delay(*cur);
        }
        Side side = Side::None;
        if (fin_s && !fin_sbar)
            side = Side::PrivateOnly;
        else if (mode == Mode::Full && fin_sbar && !fin_s)
            side = Side::PublicOnly;
        if (side == Side::None) continue;
        std::vector<int> path;
        for (int c = id; c > 0; c = nodes[c].parent) path.push_back(c);
        std::reverse(path.begin(), path.end());
        Valuation val(memo.num_clocks(), Rational(0));
        Rational now = 0;
        TimedWord w;
        for (int c : path) {
            for (int k = 0; k < nodes[c].delays; ++k) {
                bool unbounded = true;
                for (std::size_t x = 0; x < val.size(); ++x)
                    unbounded &= val[x] > Rational(Integer(std::to_string(M[x])));
                Rational d = unbounded ? Rational(1) : successor_delay(val, M, discrete);
                val = delayed(val, d);
                now += d;
            }
            w.push_back({memo.actions[nodes[c].action], now});
            const auto& cr = nodes[c].m.first;
            for (std::size_t x = 0; x < val.size(); ++x)
                if (cr.ip[x] == 0 && cr.bl[x] == 0) val[x] = 0;
        }
        v.status = Status::Violated;
        v.side = side;
        v.witness = w;
        return v;
    }
    v.status = Status::Holds;
    return v;
}

inline std::string refusal_reason(const TimedAutomaton& ta) {
    const std::string tail = "; use --engine oracle for a bounded semi-decision or --obs for a bounded attacker";
    if (ta.num_clocks() == 1 && has_epsilon_edges(ta))
        return "weak and full opacity are undecidable for one-clock timed automata with silent transitions" + tail;
    if (ta.num_clocks() == 1)
        return "the decision procedure for one-clock timed automata without silent transitions is not implemented" +
               tail;
    return "weak and full opacity are undecidable for dense-time automata with two or more clocks" + tail;
}

}  // namespace detail

inline OpacityVerdict check_opacity(const TimedAutomaton& ta, Mode mode, Engine engine = Engine::Auto,
                                    const OracleOptions& oracle = {}) {
    switch (engine) {
        case Engine::Discrete: return detail::discrete_engine(ta, mode);
        case Engine::Oera: return detail::oera_engine(ta, mode);
        case Engine::Oracle:
            return verdict_from(oracle_check(ta, mode == Mode::Weak ? Query::Weak : Query::Full, oracle), "oracle");
        case Engine::Auto: break;
    }
    if (ta.discrete()) return detail::discrete_engine(ta, mode);
    if (is_oera(ta)) return detail::oera_engine(ta, mode);
    if (ta.num_clocks() == 0) return detail::untimed_engine(ta, mode);
    throw Refused(detail::refusal_reason(ta));
}

namespace detail {

inline void check_bound(int n) {
    if (n > kMaxObservations)
        throw ResourceExceeded("N = " + std::to_string(n) + " exceeds the observation cap " +
                               std::to_string(kMaxObservations));
}

inline Nfa ticked_nfa(const TimedAutomaton& side, int N) {
    return strip_trailing_ticks(region_nfa(tick_construction(side, N)));
}

}  // namespace detail

// Opacity against an attacker making at most N observations.
inline OpacityVerdict check_bounded(const TimedAutomaton& ta, const TimeSelection& sel, Mode mode) {
    detail::check_bound(sel.kind == TimeSelection::Kind::Dynamic ? 2 * sel.n : sel.bound());
    if (sel.kind == TimeSelection::Kind::Dynamic) {
        OpacityVerdict v = check_bounded(unfold_free(ta, sel.n), TimeSelection::first(2 * sel.n), mode);
        v.engine = "bounded-dynamic";
        return v;
    }
    const TimedAutomaton base = ta.discrete() ? discretize(ta) : ta;
    TimedAutomaton priv = build_priv(base), pub = build_pub(base);
    long long scale = 1;
    if (sel.kind == TimeSelection::Kind::Static) {
        auto a = unfold_tau(priv, sel.tau), b = unfold_tau(pub, sel.tau);
        priv = a.ta;
        pub = b.ta;
        scale = a.scale;
    }
    const int N = sel.bound();
    OpacityVerdict v;
    v.engine = sel.kind == TimeSelection::Kind::Static ? "bounded-static" : "bounded-first";
    auto d = detail::compare_languages(detail::ticked_nfa(priv, N), detail::ticked_nfa(pub, N), mode);
    if (!d) {
        v.status = Status::Holds;
        return v;
    }
    v.status = Status::Violated;
    v.side = d->first;
    v.witness = scale_word(decode_ticked(d->second), make_rational(1, scale));
    v.note = "ticked word: " + format_ticked(d->second);
    return v;
}

// ∃-opacity against a first-N or static attacker.
inline OpacityVerdict check_bounded_exists(const TimedAutomaton& ta, const TimeSelection& sel) {
    if (sel.kind == TimeSelection::Kind::Dynamic)
        throw std::invalid_argument("exists mode is not defined for dynamic observations");
    detail::check_bound(sel.bound());
    TimedAutomaton priv = build_priv(ta), pub = build_pub(ta);
    long long scale = 1;
    if (sel.kind == TimeSelection::Kind::Static) {
        auto a = unfold_tau(priv, sel.tau), b = unfold_tau(pub, sel.tau);
        priv = a.ta;
        pub = b.ta;
        scale = a.scale;
    } else {
        priv = unfold_first_n(priv, sel.n);
        pub = unfold_first_n(pub, sel.n);
    }
    TimedAutomaton p = product(priv, pub);
    RegionAutomaton ra = build_region_automaton(p);
    OpacityVerdict v;
    v.engine = "bounded-exists";
    auto path = shortest_accepting_path(ra);
    if (!path) {
        v.status = Status::Violated;
        return v;
    }
    v.status = Status::Holds;
    v.side = Side::Both;
    v.witness = scale_word(concretize(p, ra, *path), make_rational(1, scale));
    return v;
}

struct WitnessToken {
    std::string letter;
    Integer exponent = 1;
};

// Tokens separated by whitespace: "a", "f{0,1}", or a repeated letter "t^5".
inline std::vector<WitnessToken> parse_witness(const std::string& desc) {
    std::vector<WitnessToken> out;
    std::stringstream in(desc);
    std::string tok;
    while (in >> tok) {
        WitnessToken t;
        auto caret = tok.find('^');
        t.letter = tok.substr(0, caret);
        if (t.letter.empty()) throw std::invalid_argument("malformed witness token '" + tok + "'");
        if (caret != std::string::npos) {
            std::string e = tok.substr(caret + 1);
            if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("malformed exponent in witness token '" + tok + "'");
            t.exponent = Integer(e);
        }
        out.push_back(std::move(t));
    }
    return out;
}

class BoolMatrix {
public:
    explicit BoolMatrix(int n = 0) : n_(n), w_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * w_, 0) {}
    static BoolMatrix identity(int n) {
        BoolMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i);
        return m;
    }
    int size() const { return n_; }
    void set(int i, int j) { bits_[i * w_ + j / 64] |= 1ULL << (j % 64); }
    bool get(int i, int j) const { return bits_[i * w_ + j / 64] >> (j % 64) & 1ULL; }
    BoolMatrix operator*(const BoolMatrix& o) const {
        BoolMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k)
                if (get(i, k))
                    for (std::size_t w = 0; w < w_; ++w) r.bits_[i * w_ + w] |= o.bits_[k * w_ + w];
        return r;
    }
    bool operator==(const BoolMatrix&) const = default;
    std::vector<char> apply(const std::vector<char>& row) const {
        std::vector<char> r(n_, 0);
        for (int i = 0; i < n_; ++i)
            if (row[i])
                for (int j = 0; j < n_; ++j) r[j] |= get(i, j);
        return r;
    }

private:
    int n_;
    std::size_t w_;
    std::vector<std::uint64_t> bits_;
};

inline BoolMatrix power(BoolMatrix m, Integer k) {
    BoolMatrix r = BoolMatrix::identity(m.size());
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = r * m;
        k /= 2;
        if (k > 0) m = m * m;
    }
    return r;
}

// Acceptance of a (compressed) word by the NFA through boolean matrices:
// M_a with silent closure E* on both sides, repeated letters by squaring.
inline bool accepts_compressed(const Nfa& nfa, const std::vector<WitnessToken>& word) {
    const int n = nfa.size();
    BoolMatrix eps(n);
    for (int s = 0; s < n; ++s)
        for (auto [l, t] : nfa.out[s])
            if (l == kEps) eps.set(s, t);
    BoolMatrix star = BoolMatrix::identity(n);
    for (;;) {
        BoolMatrix next = star * eps;
        BoolMatrix merged = star;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (next.get(i, j)) merged.set(i, j);
        if (merged == star) break;
        star = merged;
    }
    std::vector<char> row(n, 0);
    for (int s : nfa.initial) row[s] = 1;
    row = star.apply(row);
    std::map<int, BoolMatrix> cache;
    for (const auto& tok : word) {
        int l = nfa.letter_index(tok.letter);
        if (l < 0) throw std::invalid_argument("letter '" + tok.letter + "' is not in the alphabet");
        auto it = cache.find(l);
        if (it == cache.end()) {
            BoolMatrix m(n);
            for (int s = 0; s < n; ++s)
                for (auto [a, t] : nfa.out[s])
                    if (a == l) m.set(s, t);
            it = cache.emplace(l, star * m * star).first;
        }
        row = power(it->second, tok.exponent).apply(row);
    }
    for (int s = 0; s < n; ++s)
        if (row[s] && nfa.accepting[s]) return true;
    return false;
}

inline std::pair<bool, bool> verify_witness(const Nfa& a, const Nfa& b, const std::string& desc) {
    auto word = parse_witness(desc);
    return {accepts_compressed(a, word), accepts_compressed(b, word)};
}

}  // namespace topaq

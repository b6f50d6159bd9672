#pragma once

#include "observers.hpp"

#include <set>

namespace topaq {

enum class Query { Exists, Weak, Full };

inline const char* query_name(Query q) {
    switch (q) {
        case Query::Exists: return "exists";
        case Query::Weak: return "weak";
        case Query::Full: return "full";
    }
    return "?";
}

enum class Status { Holds, Violated, Inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Holds: return "holds";
        case Status::Violated: return "violated";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

enum class Side { None, PrivateOnly, PublicOnly, Both };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::None: return "none";
        case Side::PrivateOnly: return "private-only";
        case Side::PublicOnly: return "public-only";
        case Side::Both: return "private-and-public";
    }
    return "?";
}

struct OracleOptions {
    std::optional<TimeSelection> selection;
    Rational horizon = 4;
    int max_steps = 6;  // observed letters per word (dense time)
    std::optional<Rational> granularity;
    std::size_t node_cap = 200000;
};

struct OracleResult {
    Status status = Status::Inconclusive;
    std::optional<TimedWord> witness;
    Side side = Side::None;
    bool definitive = false;
    std::string note;
    std::size_t nodes = 0;
};

inline Rational default_granularity(const TimedAutomaton& ta, const std::optional<TimeSelection>& sel) {
    if (ta.discrete()) return 1;
    long long n = sel ? sel->bound() : 0;
    Rational g = make_rational(1, static_cast<long long>(ta.num_clocks()) + n + 2);
    if (sel && sel->kind == TimeSelection::Kind::Static) g /= Rational(common_denominator(sel->tau));
    return g;
}

namespace detail {

// Exploration of projected words on a time grid. A configuration is
// {location, visited-private flag, projection state, clock values in grid units}.
class GridExplorer {
public:
    using Conf = std::vector<long long>;
    using Set = std::vector<Conf>;

    GridExplorer(const TimedAutomaton& ta, const std::optional<TimeSelection>& sel, const Rational& g)
        : ta_(ta), sel_(sel), p_(to_ll(g.get_num())), q_(to_ll(g.get_den())) {
        const auto M = max_constants(ta);
        for (auto m : M) cap_.push_back(m * q_ / p_ + 1);
        by_source_.resize(ta.num_locations());
        for (std::size_t i = 0; i < ta.edges.size(); ++i) by_source_[ta.edges[i].source].push_back(static_cast<int>(i));
    }

    Rational time_of(long long T) const { return make_rational(T * p_, q_); }

    bool sat(const Guard& g, const Conf& c) const {
        for (const auto& k : g) {
            long long v = c[3 + k.clock] * p_, b = k.bound * q_;
            bool ok = false;
            switch (k.cmp) {
                case Cmp::Lt: ok = v < b; break;
                case Cmp::Le: ok = v <= b; break;
                case Cmp::Eq: ok = v == b; break;
                case Cmp::Ge: ok = v >= b; break;
                case Cmp::Gt: ok = v > b; break;
            }
            if (!ok) return false;
        }
        return true;
    }

    std::optional<Conf> fire(const Conf& c, const Edge& e) const {
        if (!sat(e.guard, c)) return std::nullopt;
        Conf n = c;
        n[0] = e.target;
        for (int r : e.resets) n[3 + r] = 0;
        if (!sat(ta_.invariant[e.target], n)) return std::nullopt;
        if (ta_.is_private(e.target)) n[1] = 1;
        return n;
    }

    // Projection state after observing a letter at grid time T, or nullopt when the letter is not observed.
    std::optional<long long> observe(long long proj, long long T) const {
        if (!sel_) return proj;
        if (sel_->kind != TimeSelection::Kind::Static) {
            if (proj >= sel_->n) return std::nullopt;
            return proj + 1;
        }
        const auto& tau = sel_->tau;
        const long long n = static_cast<long long>(tau.size());
        Rational t = time_of(T);
        if (proj >= n || t < tau[proj]) return std::nullopt;
        long long next = proj + 1;
        while (next < n && tau[next] < t) ++next;
        return next;
    }

    Set initial() const {
        Conf c(3 + ta_.num_clocks(), 0);
        c[0] = ta_.init;
        c[1] = ta_.is_private(ta_.init);
        if (!sat(ta_.invariant[ta_.init], c)) return {};
        return closure({c}, 0);
    }

    Set closure(Set s, long long T) const {
        std::set<Conf> seen(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const Conf c = s[i];
            if (ta_.is_final(static_cast<int>(c[0]))) continue;
            for (int ei : by_source_[c[0]]) {
                const Edge& e = ta_.edges[ei];
                if (e.action != kEps && observe(c[2], T)) continue;
                auto n = fire(c, e);
                if (n && seen.insert(*n).second) s.push_back(*n);
            }
        }
        return Set(seen.begin(), seen.end());
    }

    Set letter(const Set& s, int a, long long T) const {
        std::set<Conf> out;
        for (const auto& c : s) {
            if (ta_.is_final(static_cast<int>(c[0]))) continue;
            auto np = observe(c[2], T);
            if (!np) continue;
            for (int ei : by_source_[c[0]]) {
                const Edge& e = ta_.edges[ei];
                if (e.action != a) continue;
                auto n = fire(c, e);
                if (!n) continue;
                (*n)[2] = *np;
                out.insert(*n);
            }
        }
        if (out.empty()) return {};
        return closure(Set(out.begin(), out.end()), T);
    }

    Set delay(const Set& s, long long T) const {
        std::set<Conf> out;
        for (const auto& c : s) {
            if (ta_.is_final(static_cast<int>(c[0]))) continue;
            Conf n = c;
            for (std::size_t x = 0; x < cap_.size(); ++x) n[3 + x] = std::min(n[3 + x] + 1, cap_[x]);
            if (!sat(ta_.invariant[c[0]], n)) continue;
            out.insert(std::move(n));
        }
        if (out.empty()) return {};
        return closure(Set(out.begin(), out.end()), T + 1);
    }

    std::pair<bool, bool> accepting(const Set& s) const {
        bool priv = false, pub = false;
        for (const auto& c : s)
            if (ta_.is_final(static_cast<int>(c[0]))) (c[1] ? priv : pub) = true;
        return {priv, pub};
    }

    // Grid time after which the projection no longer depends on absolute time.
    long long stable_time() const {
        if (!sel_ || sel_->kind != TimeSelection::Kind::Static || sel_->tau.empty()) return 0;
        Rational last = sel_->tau.back() * Rational(Integer(std::to_string(q_))) / Rational(Integer(std::to_string(p_)));
        return to_ll(ceil_of(last)) + 1;
    }

    const TimedAutomaton& ta() const { return ta_; }

private:
    const TimedAutomaton& ta_;
    std::optional<TimeSelection> sel_;
    long long p_, q_;
    std::vector<long long> cap_;
    std::vector<std::vector<int>> by_source_;
};

// Preferred witness: fewest integral dates, then latest dates.
inline bool better_witness(const std::vector<std::pair<int, long long>>& a, const std::vector<std::pair<int, long long>>& b,
                           const std::function<bool(long long)>& integral) {
    auto ints = [&](const std::vector<std::pair<int, long long>>& w) {
        int k = 0;
        for (auto& [_, t] : w) k += integral(t);
        return k;
    };
    int ia = ints(a), ib = ints(b);
    if (ia != ib) return ia < ib;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].second != b[i].second) return a[i].second > b[i].second;
    return a < b;
}

}  // namespace detail

// Sides compared by the oracle: automata whose languages are the projected private and
// public trace sets, used to confirm dense-time violations exactly.
struct ProjectedSides {
    TimedAutomaton priv, pub;
    long long scale = 1;
};

inline ProjectedSides projected_sides(const TimedAutomaton& ta, const std::optional<TimeSelection>& sel) {
    TimedAutomaton pv = build_priv(ta), pb = build_pub(ta);
    if (!sel) return {pv, pb, 1};
    switch (sel->kind) {
        case TimeSelection::Kind::FirstN: return {unfold_first_n(pv, sel->n), unfold_first_n(pb, sel->n), 1};
        case TimeSelection::Kind::Static: {
            auto a = unfold_tau(pv, sel->tau), b = unfold_tau(pb, sel->tau);
            return {a.ta, b.ta, a.scale};
        }
        case TimeSelection::Kind::Dynamic: {
            TimedAutomaton u = unfold_free(ta, sel->n);
            return {unfold_first_n(build_priv(u), 2 * sel->n), unfold_first_n(build_pub(u), 2 * sel->n), 1};
        }
    }
    return {pv, pb, 1};
}

// Direct evaluation of the opacity definitions on grid-timed words.
// Discrete time explores to saturation and is definitive. Dense time is bounded by the horizon
// and the grid: a violation is definitive once confirmed by exact membership, an intersection
// witness is always genuine, and the absence of a witness is inconclusive.
inline OracleResult oracle_check(const TimedAutomaton& input, Query query, const OracleOptions& opt = {}) {
    std::optional<TimeSelection> sel = opt.selection;
    TimedAutomaton ta = input;
    if (sel && sel->kind == TimeSelection::Kind::Dynamic) {
        ta = unfold_free(input, sel->n);
        sel = TimeSelection::first(2 * sel->n);
    }
    const Rational g = opt.granularity ? *opt.granularity : default_granularity(input, opt.selection);
    if (g <= 0) throw std::invalid_argument("granularity must be positive");
    if (ta.discrete() && g != 1) throw std::invalid_argument("discrete time requires granularity 1");
    if (sel && sel->kind == TimeSelection::Kind::Static)
        for (const auto& t : sel->tau)
            if (!is_integral(t / g)) throw std::invalid_argument("switch-on time " + to_string(t) + " is off the grid");
    const bool saturate = ta.discrete();
    detail::GridExplorer ex(ta, sel, g);
    const long long horizon = saturate ? 0 : to_ll(floor_of(opt.horizon / g));
    const long long stable = ex.stable_time();
    std::optional<ProjectedSides> sides;

    using Word = std::vector<std::pair<int, long long>>;
    struct Node {
        detail::GridExplorer::Set set;
        long long T;
        Word word;
    };
    std::set<std::pair<detail::GridExplorer::Set, long long>> seen;
    auto key_time = [&](long long T) { return saturate ? std::min(T, stable) : T; };
    std::vector<Node> level;
    OracleResult res;
    if (auto s0 = ex.initial(); !s0.empty()) {
        seen.insert({s0, key_time(0)});
        level.push_back({std::move(s0), 0, {}});
    }
    auto to_word = [&](const Word& w) {
        TimedWord r;
        for (auto& [a, T] : w) r.push_back({ta.actions[a], ex.time_of(T)});
        return r;
    };
    auto integral = [&](long long T) { return is_integral(ex.time_of(T)); };
    bool truncated = false;
    for (int depth = 0; !level.empty(); ++depth) {
        std::optional<Word> best;
        Side best_side = Side::None;
        std::vector<Node> next;
        for (const auto& node : level) {
            bool acc_priv = false, acc_pub = false;
            detail::GridExplorer::Set cur = node.set;
            std::set<std::pair<detail::GridExplorer::Set, long long>> chain;
            for (long long T = node.T;; ++T) {
                auto [ap, au] = ex.accepting(cur);
                acc_priv |= ap;
                acc_pub |= au;
                if (saturate && !chain.insert({cur, key_time(T)}).second) break;
                if (saturate || depth < opt.max_steps)
                    for (int a = 0; a < static_cast<int>(ta.actions.size()); ++a) {
                        auto s = ex.letter(cur, a, T);
                        if (s.empty()) continue;
                        if (!seen.insert({s, key_time(T)}).second) continue;
                        Word w = node.word;
                        w.push_back({a, T});
                        next.push_back({std::move(s), T, std::move(w)});
                    }
                else if (!saturate)
                    truncated = true;
                if (!saturate && T >= horizon) break;
                cur = ex.delay(cur, T);
                if (cur.empty()) break;
            }
            Side side = Side::None;
            if (query == Query::Exists) {
                if (acc_priv && acc_pub) side = Side::Both;
            } else if (acc_priv && !acc_pub) {
                side = Side::PrivateOnly;
            } else if (query == Query::Full && acc_pub && !acc_priv) {
                side = Side::PublicOnly;
            }
            if (side == Side::None) continue;
            if (!saturate && side != Side::Both) {
                if (!sides) sides = projected_sides(input, opt.selection);
                TimedWord w = scale_word(to_word(node.word), Rational(Integer(std::to_string(sides->scale))));
                const TimedAutomaton& has = side == Side::PrivateOnly ? sides->priv : sides->pub;
                const TimedAutomaton& lacks = side == Side::PrivateOnly ? sides->pub : sides->priv;
                if (!member(w, has) || member(w, lacks)) continue;
            }
            if (!best || detail::better_witness(node.word, *best, integral)) {
                best = node.word;
                best_side = side;
            }
        }
        res.nodes += level.size();
        if (best) {
            res.witness = to_word(*best);
            res.side = best_side;
            res.definitive = true;
            res.status = query == Query::Exists ? Status::Holds : Status::Violated;
            return res;
        }
        if (res.nodes + next.size() > opt.node_cap) {
            res.note = "node cap of " + std::to_string(opt.node_cap) + " reached";
            return res;
        }
        level = std::move(next);
    }
    if (saturate) {
        res.definitive = true;
        res.status = query == Query::Exists ? Status::Violated : Status::Holds;
        return res;
    }
    res.note = std::string("no witness up to horizon ") + to_string(opt.horizon) + " at granularity " + to_string(g) +
               (truncated ? " (word length bounded)" : "");
    return res;
}

struct TraceSets {
    std::set<TimedWord> priv, pub;
    bool exhausted = false;
};

// Projected private and public traces of all grid runs within the bounds.
inline TraceSets collect_traces(const TimedAutomaton& ta, const Rational& horizon, int max_steps,
                                const Rational& granularity, const std::optional<TimeSelection>& sel = std::nullopt,
                                std::size_t cap = 200000) {
    RunSet rs = enumerate_runs(ta, horizon, max_steps, granularity, cap);
    TraceSets out;
    out.exhausted = rs.exhausted;
    for (const auto& r : rs.runs) {
        TimedWord w = trace_of(ta, r);
        if (sel) w = project(w, *sel);
        (visits_private(ta, r) ? out.priv : out.pub).insert(std::move(w));
    }
    return out;
}

}  // namespace topaq

#pragma once

#include "ta.hpp"

#include <functional>
#include <optional>

namespace topaq {

using Valuation = std::vector<Rational>;

inline bool satisfies(const ClockConstraint& c, const Rational& v) {
    Rational b(Integer(std::to_string(c.bound)));
    switch (c.cmp) {
        case Cmp::Lt: return v < b;
        case Cmp::Le: return v <= b;
        case Cmp::Eq: return v == b;
        case Cmp::Ge: return v >= b;
        case Cmp::Gt: return v > b;
    }
    return false;
}

inline const ClockConstraint* first_violated(const Guard& g, const Valuation& v) {
    for (const auto& c : g)
        if (!satisfies(c, v[c.clock])) return &c;
    return nullptr;
}

inline bool satisfies(const Guard& g, const Valuation& v) { return first_violated(g, v) == nullptr; }

inline Valuation delayed(const Valuation& v, const Rational& d) {
    Valuation r = v;
    for (auto& x : r) x += d;
    return r;
}

inline Valuation with_resets(Valuation v, const std::vector<int>& resets) {
    for (int r : resets) v[r] = 0;
    return v;
}

struct Configuration {
    int location = 0;
    Valuation valuation;
    bool operator==(const Configuration&) const = default;
};

inline Configuration initial_configuration(const TimedAutomaton& ta) {
    return Configuration{ta.init, Valuation(ta.num_clocks(), Rational(0))};
}

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Combined delay then discrete transition; nullopt when not enabled.
inline std::optional<Configuration> try_step(const TimedAutomaton& ta, const Configuration& cfg, const Rational& delay,
                                             const Edge& e, std::string* why = nullptr) {
    auto fail = [&](std::string m) -> std::optional<Configuration> {
        if (why) *why = std::move(m);
        return std::nullopt;
    };
    if (delay < 0) return fail("negative delay");
    if (e.source != cfg.location) return fail("edge does not leave the current location");
    const Guard& inv = ta.invariant[cfg.location];
    if (auto* c = first_violated(inv, cfg.valuation))
        return fail("invariant violated during delay: " + format_constraint(ta, *c));
    Valuation after = delayed(cfg.valuation, delay);
    if (auto* c = first_violated(inv, after))
        return fail("invariant violated during delay: " + format_constraint(ta, *c));
    if (auto* c = first_violated(e.guard, after)) return fail("guard unsatisfied: " + format_constraint(ta, *c));
    Valuation next = with_resets(std::move(after), e.resets);
    if (auto* c = first_violated(ta.invariant[e.target], next))
        return fail("target invariant violated: " + format_constraint(ta, *c));
    return Configuration{e.target, std::move(next)};
}

inline Configuration step(const TimedAutomaton& ta, const Configuration& cfg, const Rational& delay, const Edge& e) {
    std::string why;
    auto r = try_step(ta, cfg, delay, e, &why);
    if (!r) throw StepError(why);
    return *r;
}

struct RunStep {
    Rational delay;
    int edge = 0;
    bool operator==(const RunStep&) const = default;
};

struct Run {
    std::vector<RunStep> steps;
    std::vector<Configuration> configurations;  // size steps+1
};

inline TimedWord trace_of(const TimedAutomaton& ta, const Run& run) {
    TimedWord w;
    Rational now = 0;
    for (const auto& s : run.steps) {
        now += s.delay;
        int a = ta.edges[s.edge].action;
        if (a != kEps) w.push_back({ta.actions[a], now});
    }
    return w;
}

inline bool visits_private(const TimedAutomaton& ta, const Run& run) {
    for (const auto& c : run.configurations)
        if (ta.is_private(c.location)) return true;
    return false;
}

struct RunSet {
    std::vector<Run> runs;
    bool exhausted = false;  // enumeration stopped at the cap; result is partial
};

// All runs with delays on the granularity grid, total duration <= horizon and at most max_steps
// transitions, in depth-first order (smaller delays first, then edge order).
inline RunSet enumerate_runs(const TimedAutomaton& ta, const Rational& horizon, int max_steps,
                             const Rational& granularity, std::size_t cap = 200000) {
    if (granularity <= 0) throw std::invalid_argument("granularity must be positive");
    if (ta.discrete() && granularity != 1) throw std::invalid_argument("discrete time requires granularity 1");
    RunSet out;
    Configuration init = initial_configuration(ta);
    if (!satisfies(ta.invariant[ta.init], init.valuation)) return out;
    std::vector<std::vector<int>> by_source(ta.num_locations());
    for (std::size_t i = 0; i < ta.edges.size(); ++i) by_source[ta.edges[i].source].push_back(static_cast<int>(i));
    Run cur;
    cur.configurations.push_back(init);
    std::size_t visited = 0;
    std::function<void(const Rational&)> dfs = [&](const Rational& now) {
        if (out.exhausted) return;
        if (++visited > cap) {
            out.exhausted = true;
            return;
        }
        const Configuration cfg = cur.configurations.back();
        if (ta.is_final(cfg.location)) {
            out.runs.push_back(cur);
            return;
        }
        if (static_cast<int>(cur.steps.size()) >= max_steps) return;
        const Guard& inv = ta.invariant[cfg.location];
        for (Rational d = 0; now + d <= horizon; d += granularity) {
            if (!satisfies(inv, delayed(cfg.valuation, d))) break;
            for (int ei : by_source[cfg.location]) {
                auto next = try_step(ta, cfg, d, ta.edges[ei]);
                if (!next) continue;
                cur.steps.push_back({d, ei});
                cur.configurations.push_back(*next);
                dfs(now + d);
                cur.steps.pop_back();
                cur.configurations.pop_back();
                if (out.exhausted) return;
            }
        }
    };
    dfs(Rational(0));
    return out;
}

}  // namespace topaq
